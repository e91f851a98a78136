#pragma once

#include <cstddef>
#include <vector>

namespace tppg {

// One component stream: strictly increasing event times in [0, horizon].
struct EventStream {
  std::vector<double> times;
};

// A p-variate realization observed on [0, horizon].
struct EventData {
  std::vector<EventStream> streams;
  double horizon = 0.0;

  std::size_t node_count() const { return streams.size(); }
  std::size_t total_events() const;

  // Throws std::invalid_argument on empty stream set, nonpositive horizon,
  // ties within a stream, or times outside [0, horizon].
  void validate() const;
};

}  // namespace tppg
