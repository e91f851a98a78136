#include "tppg/events.hpp"

#include <stdexcept>
#include <string>

namespace tppg {

std::size_t EventData::total_events() const {
  std::size_t n = 0;
  for (const auto& s : streams) n += s.times.size();
  return n;
}

void EventData::validate() const {
  if (streams.empty()) throw std::invalid_argument("EventData: p must be >= 1");
  if (!(horizon > 0.0))
    throw std::invalid_argument("EventData: horizon must be positive");
  for (std::size_t j = 0; j < streams.size(); ++j) {
    const auto& t = streams[j].times;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < 0.0 || t[i] > horizon)
        throw std::invalid_argument("EventData: stream " + std::to_string(j) +
                                    " has a time outside [0, T]");
      if (i > 0 && !(t[i] > t[i - 1]))
        throw std::invalid_argument("EventData: stream " + std::to_string(j) +
                                    " times not strictly increasing");
    }
  }
}

}  // namespace tppg
