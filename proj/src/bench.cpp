#include "tsrobust/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include <nlohmann/json.hpp>

#include "tsrobust/csv.hpp"
#include "tsrobust/errors.hpp"
#include "tsrobust/huber.hpp"
#include "tsrobust/huber_reg.hpp"
#include "tsrobust/var_est.hpp"

namespace tsr {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

InnovationDist innovation_by_name(const std::string& name) {
  if (name == "t5") return InnovationDist::student_t(5.0);
  if (name == "gaussian") return InnovationDist::gaussian(1.0);
  if (name.rfind("t", 0) == 0) return InnovationDist::student_t(std::stod(name.substr(1)));
  throw InvalidInput("unknown innovation distribution: " + name);
}

std::string innovation_name(const InnovationDist& innov) {
  if (innov.kind == InnovationDist::Kind::Gaussian) return "gaussian";
  return "t" + std::to_string(static_cast<int>(innov.df));
}

void parallel_reps(int reps, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  threads = std::min(threads, reps);
  if (threads <= 1) {
    for (int r = 0; r < reps; ++r) body(r);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const int r = next.fetch_add(1);
        if (r >= reps) return;
        body(r);
      }
    });
  }
  for (auto& th : pool) th.join();
}

double mad_of_entries(const Matrix& m) {
  std::vector<double> flat(m.data(), m.data() + m.size());
  const double med = median(flat);
  for (double& v : flat) v = std::abs(v - med);
  return 1.4826 * median(std::move(flat));
}

// Pilot truncation scale nu0 = sigma_hat * (n/log p)^(1/6): the rate's
// exponent 1/(2q-2) evaluated at the working moment assumption q = 4.
std::vector<double> auto_nu_grid(const Matrix& train, int n) {
  const double sigma = std::max(mad_of_entries(train), 1e-12);
  const double logp = std::max(std::log(static_cast<double>(train.cols())), 1.0);
  const double pilot = sigma * std::pow(static_cast<double>(n) / logp, 1.0 / 6.0);
  return {0.25 * pilot, 0.5 * pilot, pilot, 2.0 * pilot, 4.0 * pilot};
}

// Eight log-spaced points spanning two decades below the zero-solution
// threshold of the given family.
std::vector<double> auto_lambda_grid(double lambda_max) {
  if (!(lambda_max > 0.0)) lambda_max = 1.0;
  std::vector<double> grid(8);
  for (int j = 0; j < 8; ++j) grid[static_cast<std::size_t>(j)] = lambda_max * std::pow(10.0, -2.0 * j / 7.0);
  return grid;
}

double lasso_lambda_max(const Matrix& train, double nu) {
  const Eigen::Index n = train.rows() - 1;
  const Matrix xt = truncate(train, nu).X_tilde;
  const Matrix cross = (2.0 / static_cast<double>(n)) *
                       (xt.topRows(n).transpose() * xt.bottomRows(n));
  return cross.cwiseAbs().maxCoeff();
}

struct MethodOutcome {
  bool ok = false;
  std::string failure;
  NormSet errors{};
  double nu = 0.0;
  double lambda = 0.0;
  double kkt_rel = 0.0;
  double feas_gap = -1.0;
};

struct VarRep {
  std::vector<MethodOutcome> outcomes;  // parallel to cfg.methods
};

double holdout_prediction_error(const Matrix& a_hat, const Matrix& predictors,
                                const Matrix& targets) {
  return (targets - predictors * a_hat.transpose()).rowwise().squaredNorm().sum() /
         static_cast<double>(targets.rows());
}

MethodOutcome tune_var_method(const std::string& method, const Matrix& train,
                              const Matrix& predictors, const Matrix& targets,
                              const std::vector<double>& nu_grid,
                              const std::vector<double>& lambda_grid_cfg) {
  const bool is_lasso = method.rfind("lasso", 0) == 0;
  const bool robust = method.find("plain") == std::string::npos;

  std::vector<double> nus = robust ? nu_grid : std::vector<double>{kInf};
  std::sort(nus.begin(), nus.end());
  nus.erase(std::unique(nus.begin(), nus.end()), nus.end());

  MethodOutcome best;
  double best_err = kInf;
  int infeasible_points = 0;
  for (double nu : nus) {
    std::vector<double> lambdas = lambda_grid_cfg;
    if (lambdas.empty()) {
      const double lmax = is_lasso ? lasso_lambda_max(train, nu)
                                   : autocov_robust(train, nu, 1).cwiseAbs().maxCoeff();
      lambdas = auto_lambda_grid(lmax);
    }
    const std::vector<VarEstimate> path = is_lasso
                                              ? lasso_var_path(train, nu, lambdas)
                                              : dantzig_var_path(train, nu, lambdas);
    for (const VarEstimate& est : path) {
      if (!est.all_ok()) {
        ++infeasible_points;
        continue;
      }
      const double err = holdout_prediction_error(est.A_hat, predictors, targets);
      const bool better =
          err < best_err ||
          (err == best_err && (est.nu < best.nu ||
                               (est.nu == best.nu && est.lambda < best.lambda)));
      if (!best.ok || better) {
        best.ok = true;
        best.nu = est.nu;
        best.lambda = est.lambda;
        best.kkt_rel = est.lambda > 0.0 ? est.max_kkt_residual() / est.lambda : 0.0;
        best.feas_gap = est.max_feasibility_gap();
        best_err = err;
      }
    }
  }
  if (!best.ok) {
    best.failure = "all " + std::to_string(infeasible_points) +
                   " grid points unusable (infeasible or non-converged)";
  }
  return best;
}

void validate_methods(const std::vector<std::string>& methods) {
  for (const auto& m : methods) {
    if (m != "lasso" && m != "lasso_plain" && m != "dantzig" && m != "dantzig_plain") {
      throw InvalidInput("unrecognized method: " + m);
    }
  }
  if (methods.empty()) throw InvalidInput("no methods configured");
}

const char* kVarNorms[] = {"linf_induced", "l1_induced", "frobenius", "max_abs"};

double norm_by_name(const NormSet& set, const std::string& name) {
  if (name == "linf_induced") return set.linf_induced;
  if (name == "l1_induced") return set.l1_induced;
  if (name == "frobenius") return set.frobenius;
  if (name == "max_abs") return set.max_abs;
  if (name == "entry_l1") return set.entry_l1;
  throw InvalidInput("unknown norm: " + name);
}

void mean_sd(const std::vector<double>& values, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (values.empty()) return;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() < 2) return;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  sd = std::sqrt(ss / (static_cast<double>(values.size()) - 1.0));
}

std::string method_label_for_b(double b) {
  if (std::isinf(b)) return "huber";
  const double rounded = std::round(b);
  if (std::abs(b - rounded) < 1e-12) {
    return "weighted_huber_b" + std::to_string(static_cast<long long>(rounded));
  }
  return "weighted_huber_b" + format_double(b);
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const json j = json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("kind")) cfg.kind = j["kind"].get<std::string>();
  if (j.contains("design")) cfg.design = j["design"].get<std::string>();
  if (j.contains("p")) cfg.p = j["p"].get<int>();
  if (j.contains("n")) cfg.n = j["n"].get<int>();
  if (j.contains("reps")) cfg.reps = j["reps"].get<int>();
  if (j.contains("methods")) cfg.methods = j["methods"].get<std::vector<std::string>>();
  if (j.contains("nu_grid")) cfg.nu_grid = j["nu_grid"].get<std::vector<double>>();
  if (j.contains("lambda_grid")) cfg.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
  if (j.contains("b_list")) {
    cfg.b_list.clear();
    for (const auto& v : j["b_list"]) {
      if (v.is_string() && (v == "inf" || v == "infinity")) {
        cfg.b_list.push_back(kInf);
      } else {
        cfg.b_list.push_back(v.get<double>());
      }
    }
  }
  if (j.contains("base_seed")) cfg.base_seed = j["base_seed"].get<std::uint64_t>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("innovations")) cfg.innov = innovation_by_name(j["innovations"].get<std::string>());
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  return from_json_text(read_text_file(path));
}

double BenchOutput::summary_mean(const std::string& method,
                                 const std::string& norm) const {
  for (const auto& row : summary) {
    if (row.method == method && row.norm == norm) return row.mean;
  }
  throw InvalidInput("no summary row for " + method + "/" + norm);
}

std::string BenchOutput::summary_csv() const {
  std::string out = "# tsrobust bench summary schema v1\n";
  out += "design,p,n,s,method,norm,mean,sd,reps,base_seed\n";
  for (const auto& row : summary) {
    out += row.design + ',' + std::to_string(row.p) + ',' + std::to_string(row.n) +
           ',' + std::to_string(row.s) + ',' + row.method + ',' + row.norm + ',' +
           format_double(row.mean) + ',' + format_double(row.sd) + ',' +
           std::to_string(row.reps) + ',' + std::to_string(row.base_seed) + '\n';
  }
  return out;
}

std::string BenchOutput::raw_csv() const {
  std::string out = "# tsrobust bench raw schema v1\n";
  out += "rep,design,p,n,method,nu,lambda,norm,value\n";
  for (const auto& row : raw) {
    out += std::to_string(row.rep) + ',' + cfg.design + ',' + std::to_string(cfg.p) +
           ',' + std::to_string(cfg.n) + ',' + row.method + ',' +
           format_double(row.nu) + ',' + format_double(row.lambda) + ',' + row.norm +
           ',' + format_double(row.value) + '\n';
  }
  return out;
}

std::string BenchOutput::metadata_json() const {
  json j;
  j["schema"] = "tsrobust bench metadata v1";
  j["kind"] = cfg.kind;
  j["design"] = cfg.design;
  j["p"] = cfg.p;
  j["n"] = cfg.n;
  j["reps"] = cfg.reps;
  j["sparsity"] = sparsity;
  j["base_seed"] = cfg.base_seed;
  j["innovations"] = innovation_name(cfg.innov);
  j["methods"] = cfg.methods;
  j["nu_grid"] = cfg.nu_grid.empty() ? json("auto") : json(cfg.nu_grid);
  j["lambda_grid"] = cfg.lambda_grid.empty() ? json("auto") : json(cfg.lambda_grid);
  j["failures"] = failures;
  j["max_lasso_kkt_rel"] = max_lasso_kkt_rel;
  j["max_dantzig_feasibility_gap"] = max_dantzig_feas_gap;
  return j.dump(2) + "\n";
}

BenchOutput run_var_benchmark(const ExperimentConfig& cfg) {
  if (cfg.kind != "var") throw InvalidInput("run_var_benchmark: config kind must be var");
  if (cfg.reps < 1) throw InvalidInput("run_var_benchmark: reps must be >= 1");
  validate_methods(cfg.methods);
  const VarDesign design = VarDesign::by_name(cfg.design);

  BenchOutput out;
  out.cfg = cfg;
  out.sparsity = default_sparsity(cfg.p);

  std::vector<VarRep> reps(static_cast<std::size_t>(cfg.reps));
  parallel_reps(cfg.reps, cfg.threads, [&](int r) {
    VarRep& rep = reps[static_cast<std::size_t>(r)];
    rep.outcomes.resize(cfg.methods.size());
    Rng rng = Rng::stream(cfg.base_seed, static_cast<std::uint64_t>(r));
    const Matrix a = build_design(design, cfg.p, rng);
    const SeriesSample series =
        simulate_var(a, 2 * cfg.n, cfg.innov, default_burn_in(), rng);
    const Matrix train = series.X.topRows(cfg.n + 1);  // X_0..X_n
    const Matrix predictors = series.X.middleRows(cfg.n, cfg.n);
    const Matrix targets = series.X.bottomRows(cfg.n);
    const std::vector<double> nu_grid =
        cfg.nu_grid.empty() ? auto_nu_grid(train, cfg.n) : cfg.nu_grid;

    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      MethodOutcome& outcome = rep.outcomes[mi];
      try {
        outcome = tune_var_method(cfg.methods[mi], train, predictors, targets,
                                  nu_grid, cfg.lambda_grid);
        if (outcome.ok) {
          const bool is_lasso = cfg.methods[mi].rfind("lasso", 0) == 0;
          const VarEstimate final_est =
              is_lasso ? lasso_var_path(train, outcome.nu, {outcome.lambda}).front()
                       : dantzig_var_path(train, outcome.nu, {outcome.lambda}).front();
          if (!final_est.all_ok()) {
            outcome.ok = false;
            outcome.failure = "selected estimate failed certificates on refit";
          } else {
            outcome.errors = estimation_errors(final_est.A_hat, a);
          }
        }
      } catch (const std::exception& err) {
        outcome.ok = false;
        outcome.failure = err.what();
      }
    }
  });

  for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
    const std::string& method = cfg.methods[mi];
    std::vector<std::vector<double>> values(4);
    int completed = 0;
    int failed = 0;
    for (int r = 0; r < cfg.reps; ++r) {
      const MethodOutcome& outcome = reps[static_cast<std::size_t>(r)].outcomes[mi];
      if (!outcome.ok) {
        ++failed;
        out.failures.push_back("rep " + std::to_string(r) + " " + method + ": " +
                               outcome.failure);
        continue;
      }
      ++completed;
      const bool is_lasso = method.rfind("lasso", 0) == 0;
      if (is_lasso) {
        out.max_lasso_kkt_rel = std::max(out.max_lasso_kkt_rel, outcome.kkt_rel);
      } else {
        out.max_dantzig_feas_gap = std::max(out.max_dantzig_feas_gap, outcome.feas_gap);
      }
      for (int k = 0; k < 4; ++k) {
        const double v = norm_by_name(outcome.errors, kVarNorms[k]);
        values[static_cast<std::size_t>(k)].push_back(v);
        out.raw.push_back({r, method, outcome.nu, outcome.lambda, kVarNorms[k], v});
      }
    }
    if (failed > 0.05 * cfg.reps) {
      throw std::runtime_error("run_var_benchmark: method " + method + " failed " +
                               std::to_string(failed) + "/" +
                               std::to_string(cfg.reps) + " replications");
    }
    for (int k = 0; k < 4; ++k) {
      ResultRow row;
      row.design = cfg.design;
      row.p = cfg.p;
      row.n = cfg.n;
      row.s = out.sparsity;
      row.method = method;
      row.norm = kVarNorms[k];
      mean_sd(values[static_cast<std::size_t>(k)], row.mean, row.sd);
      row.reps = completed;
      row.base_seed = cfg.base_seed;
      out.summary.push_back(row);
    }
  }
  return out;
}

BenchOutput run_regression_benchmark(const ExperimentConfig& cfg) {
  if (cfg.kind != "regression") {
    throw InvalidInput("run_regression_benchmark: config kind must be regression");
  }
  if (cfg.reps < 1) throw InvalidInput("run_regression_benchmark: reps must be >= 1");
  if (cfg.b_list.empty()) throw InvalidInput("run_regression_benchmark: empty b list");

  BenchOutput out;
  out.cfg = cfg;
  out.sparsity = 2 * static_cast<int>(std::floor(std::log(cfg.p)));

  struct RegRep {
    std::vector<MethodOutcome> outcomes;
  };
  std::vector<RegRep> reps(static_cast<std::size_t>(cfg.reps));

  parallel_reps(cfg.reps, cfg.threads, [&](int r) {
    RegRep& rep = reps[static_cast<std::size_t>(r)];
    rep.outcomes.resize(cfg.b_list.size());
    Rng rng = Rng::stream(cfg.base_seed, static_cast<std::uint64_t>(r));
    const RegressionDataset ds = make_regression_dataset(cfg.p, 2 * cfg.n, rng);
    const Matrix x_train = ds.X.topRows(cfg.n);
    const Vector y_train = ds.Y.head(cfg.n);
    const Matrix x_hold = ds.X.bottomRows(cfg.n);
    const Vector y_hold = ds.Y.tail(cfg.n);

    for (std::size_t bi = 0; bi < cfg.b_list.size(); ++bi) {
      MethodOutcome& outcome = rep.outcomes[bi];
      try {
        const double b = cfg.b_list[bi];
        const WeightSpec spec =
            std::isinf(b) ? WeightSpec::off() : WeightSpec::identity(b);
        const std::vector<double> nus =
            cfg.nu_grid.empty() ? default_nu_grid(x_train, y_train) : cfg.nu_grid;
        const std::vector<double> lambdas =
            cfg.lambda_grid.empty()
                ? default_lambda_grid(x_train, y_train, nus[nus.size() / 2], spec)
                : cfg.lambda_grid;
        HuberConfig base;
        base.weight = spec;
        const TuneResult tuned =
            huber_reg_tune(x_train, y_train, nus, lambdas, x_hold, y_hold, base);
        outcome.ok = true;
        outcome.nu = tuned.nu;
        outcome.lambda = tuned.lambda;
        outcome.errors.frobenius = (tuned.fit.beta_hat - ds.beta_star).norm();
        outcome.kkt_rel = tuned.fit.kkt_residual;
      } catch (const std::exception& err) {
        outcome.ok = false;
        outcome.failure = err.what();
      }
    }
  });

  for (std::size_t bi = 0; bi < cfg.b_list.size(); ++bi) {
    const std::string method = method_label_for_b(cfg.b_list[bi]);
    std::vector<double> values;
    int failed = 0;
    for (int r = 0; r < cfg.reps; ++r) {
      const MethodOutcome& outcome = reps[static_cast<std::size_t>(r)].outcomes[bi];
      if (!outcome.ok) {
        ++failed;
        out.failures.push_back("rep " + std::to_string(r) + " " + method + ": " +
                               outcome.failure);
        continue;
      }
      values.push_back(outcome.errors.frobenius);
      out.raw.push_back({r, method, outcome.nu, outcome.lambda, "l2",
                         outcome.errors.frobenius});
    }
    if (failed > 0.05 * cfg.reps) {
      throw std::runtime_error("run_regression_benchmark: method " + method +
                               " failed " + std::to_string(failed) + "/" +
                               std::to_string(cfg.reps) + " replications");
    }
    ResultRow row;
    row.design = "regression_toeplitz";
    row.p = cfg.p;
    row.n = cfg.n;
    row.s = out.sparsity;
    row.method = method;
    row.norm = "l2";
    mean_sd(values, row.mean, row.sd);
    row.reps = static_cast<int>(values.size());
    row.base_seed = cfg.base_seed;
    out.summary.push_back(row);
  }
  return out;
}

void write_bench_output(const BenchOutput& out, const std::string& prefix) {
  write_text_file(prefix + "_summary.csv", out.summary_csv());
  write_text_file(prefix + "_raw.csv", out.raw_csv());
  write_text_file(prefix + "_meta.json", out.metadata_json());
}

std::string profile_csv(const std::vector<std::string>& designs,
                        const std::vector<int>& p_list, int kmax,
                        std::uint64_t seed) {
  std::string out = "design,p,k,norm\n";
  std::uint64_t stream = 0;
  for (const std::string& name : designs) {
    for (int p : p_list) {
      Rng rng = Rng::stream(seed, stream++);
      const Matrix a = build_design(VarDesign::by_name(name), p, rng);
      const std::vector<double> norms = power_norms(a, kmax);
      for (std::size_t k = 0; k < norms.size(); ++k) {
        out += name + ',' + std::to_string(p) + ',' + std::to_string(k) + ',' +
               format_double(norms[k]) + '\n';
      }
    }
  }
  return out;
}

}  // namespace tsr
