#pragma once

//
// Experiment harness: seeded replications of the VAR and regression studies
// with holdout grid-search tuning, per-rep raw logs, summary aggregation and
// run metadata.  Reruns with the same config are byte-identical.
//

#include <cstdint>
#include <string>
#include <vector>

#include "tsrobust/linalg.hpp"
#include "tsrobust/process.hpp"
#include "tsrobust/rng.hpp"

namespace tsr {

struct ExperimentConfig {
  std::string kind = "var";  // var | regression
  std::string design = "banded";
  int p = 50;
  int n = 100;
  int reps = 200;
  std::vector<std::string> methods = {"lasso", "lasso_plain", "dantzig",
                                      "dantzig_plain"};
  std::vector<double> nu_grid;      // empty -> data-driven per replication
  std::vector<double> lambda_grid;  // empty -> data-driven per replication
  std::vector<double> b_list = {std::numeric_limits<double>::infinity(), 15.0};
  std::uint64_t base_seed = 1;
  int threads = 0;  // 0 -> hardware concurrency
  InnovationDist innov = InnovationDist::student_t(5.0);

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

struct ResultRow {
  std::string design;
  int p = 0, n = 0, s = 0;
  std::string method;
  std::string norm;
  double mean = 0.0;
  double sd = 0.0;
  int reps = 0;  // completed replications behind this row
  std::uint64_t base_seed = 0;
};

struct RawRow {
  int rep = 0;
  std::string method;
  double nu = 0.0;
  double lambda = 0.0;
  std::string norm;
  double value = 0.0;
};

struct BenchOutput {
  ExperimentConfig cfg;
  int sparsity = 0;
  std::vector<ResultRow> summary;
  std::vector<RawRow> raw;
  std::vector<std::string> failures;
  double max_lasso_kkt_rel = 0.0;    // over every selected estimate
  double max_dantzig_feas_gap = -1.0;

  double summary_mean(const std::string& method, const std::string& norm) const;
  std::string summary_csv() const;
  std::string raw_csv() const;
  std::string metadata_json() const;
};

// Replication failures are recorded and excluded; more than 5% of reps
// failing for any method aborts the run.
BenchOutput run_var_benchmark(const ExperimentConfig& cfg);
BenchOutput run_regression_benchmark(const ExperimentConfig& cfg);

// Writes <prefix>_summary.csv, <prefix>_raw.csv, <prefix>_meta.json.
void write_bench_output(const BenchOutput& out, const std::string& prefix);

// `design,p,k,norm` rows for the |A^k| profile plots.
std::string profile_csv(const std::vector<std::string>& designs,
                        const std::vector<int>& p_list, int kmax,
                        std::uint64_t seed);

}  // namespace tsr
