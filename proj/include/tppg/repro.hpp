#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "tppg/estimator.hpp"
#include "tppg/evaluation.hpp"
#include "tppg/model.hpp"

namespace tppg::repro {

// Simulation-study model: mu_j = 0.5, block/chain transfer matrix, and
// setting 1 (arctan link, restricted linear kernel) or setting 2 (sigmoid
// link, exponential kernel).
ModelSpec make_sim_model(int setting, StructureKind structure, std::size_t p);

struct Cell {
  int setting = 1;
  StructureKind structure = StructureKind::Block;
  std::size_t p = 30;
  double T = 200.0;
  WeightMode estimator = WeightMode::Naive;
  int replications = 5;
  std::uint64_t base_seed = 1;
};

struct EstimationCellResult {
  double mean_l1 = 0.0, se_l1 = 0.0;
  double mean_l2 = 0.0, se_l2 = 0.0;
};

// simulate -> discretize (M = 10 T) -> 5-fold CV -> full-data refit ->
// relative errors, averaged over replications.
EstimationCellResult run_estimation_cell(const Cell& cell);

struct AUCCellResult {
  double mean_auc = 0.0, se_auc = 0.0;
};

// ROC over a 30-point lambda path per replication.
AUCCellResult run_auc_cell(const Cell& cell);

// Relative l2 error of a single fixed-lambda fit (no CV); used by rate
// scaling experiments.
double rel_l2_at_lambda(const Cell& cell, double lambda, std::uint64_t seed);

std::string format_mean_se(double mean, double se);

// table in {t1, t2, t3}; scale in {desk, full}. t1 and t2 share the same
// runs, so either writes both table1.csv and table2.csv.
void reproduce(const std::string& table, const std::string& scale,
               const std::filesystem::path& out_dir, std::uint64_t seed);

}  // namespace tppg::repro
