#include <doctest.h>

#include <cmath>

#include "tsrobust/bench.hpp"
#include "tsrobust/csv.hpp"

using namespace tsr;

namespace {

ExperimentConfig tiny_var_config() {
  ExperimentConfig cfg;
  cfg.kind = "var";
  cfg.design = "banded";
  cfg.p = 10;
  cfg.n = 30;
  cfg.reps = 4;
  cfg.base_seed = 99;
  return cfg;
}

}  // namespace

TEST_CASE("config json round trip") {
  const std::string text = R"({
    "kind": "var", "design": "toeplitz", "p": 12, "n": 40, "reps": 7,
    "methods": ["lasso", "dantzig"],
    "nu_grid": [1.0, 2.0], "lambda_grid": [0.1],
    "b_list": ["inf", 15], "base_seed": 5, "threads": 1,
    "innovations": "gaussian"
  })";
  const ExperimentConfig cfg = ExperimentConfig::from_json_text(text);
  CHECK(cfg.design == "toeplitz");
  CHECK(cfg.p == 12);
  CHECK(cfg.reps == 7);
  CHECK(cfg.methods.size() == 2);
  CHECK(cfg.nu_grid.size() == 2);
  CHECK(std::isinf(cfg.b_list[0]));
  CHECK(cfg.b_list[1] == 15.0);
  CHECK(cfg.innov.kind == InnovationDist::Kind::Gaussian);
}

TEST_CASE("var benchmark is deterministic and carries certificates") {
  const ExperimentConfig cfg = tiny_var_config();
  const BenchOutput a = run_var_benchmark(cfg);
  const BenchOutput b = run_var_benchmark(cfg);
  CHECK(a.summary_csv() == b.summary_csv());
  CHECK(a.raw_csv() == b.raw_csv());
  CHECK(a.metadata_json() == b.metadata_json());

  ExperimentConfig serial = cfg;
  serial.threads = 1;
  const BenchOutput c = run_var_benchmark(serial);
  CHECK(a.summary_csv() == c.summary_csv());

  CHECK(a.failures.empty());
  CHECK(a.max_lasso_kkt_rel <= 1e-6);
  CHECK(a.max_dantzig_feas_gap <= 1e-8);
  CHECK(a.summary.size() == 4 * cfg.methods.size());
}

TEST_CASE("summary aggregation matches a recomputation from the raw log") {
  const ExperimentConfig cfg = tiny_var_config();
  const BenchOutput out = run_var_benchmark(cfg);
  for (const auto& row : out.summary) {
    double sum = 0.0;
    int count = 0;
    for (const auto& raw : out.raw) {
      if (raw.method == row.method && raw.norm == row.norm) {
        sum += raw.value;
        ++count;
      }
    }
    REQUIRE(count == row.reps);
    const double mean = sum / count;
    CHECK(row.mean == doctest::Approx(mean).epsilon(1e-12));
    double ss = 0.0;
    for (const auto& raw : out.raw) {
      if (raw.method == row.method && raw.norm == row.norm) {
        ss += (raw.value - mean) * (raw.value - mean);
      }
    }
    const double sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
    CHECK(row.sd == doctest::Approx(sd).epsilon(1e-12));
  }
}

TEST_CASE("regression benchmark runs and reproduces") {
  ExperimentConfig cfg;
  cfg.kind = "regression";
  cfg.p = 6;
  cfg.n = 40;
  cfg.reps = 3;
  cfg.base_seed = 7;
  cfg.b_list = {std::numeric_limits<double>::infinity(), 15.0};
  const BenchOutput a = run_regression_benchmark(cfg);
  const BenchOutput b = run_regression_benchmark(cfg);
  CHECK(a.summary_csv() == b.summary_csv());
  CHECK(a.summary.size() == 2);
  CHECK(a.summary[0].method == "huber");
  CHECK(a.summary[1].method == "weighted_huber_b15");
  for (const auto& row : a.summary) {
    CHECK(row.mean > 0.0);
    CHECK(row.reps == 3);
  }
}

TEST_CASE("profile csv: stabilized banded follows the half-rate power law") {
  const std::string csv = profile_csv({"banded"}, {20}, 30, 1);
  std::size_t pos = csv.find('\n') + 1;
  int k = 0;
  while (pos < csv.size()) {
    std::size_t next = csv.find('\n', pos);
    if (next == std::string::npos) break;
    const std::string line = csv.substr(pos, next - pos);
    const std::size_t last_comma = line.rfind(',');
    const double norm = std::stod(line.substr(last_comma + 1));
    CHECK(norm == doctest::Approx(std::pow(0.5, k)).epsilon(0).scale(1).epsilon(1e-8));
    ++k;
    pos = next + 1;
  }
  CHECK(k == 31);
}

TEST_CASE("benchmark rejects unknown methods") {
  ExperimentConfig cfg = tiny_var_config();
  cfg.methods = {"lasso", "ridge"};
  CHECK_THROWS_AS(run_var_benchmark(cfg), InvalidInput);
}
