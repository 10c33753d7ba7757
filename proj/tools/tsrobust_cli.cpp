//
// tsrobust command line: simulators, the robust estimators, the
// concentration lab and the benchmark harness behind one binary.
//

#include <CLI11.hpp>
#include <iostream>
#include <nlohmann/json.hpp>

#include "tsrobust/bench.hpp"
#include "tsrobust/concentration.hpp"
#include "tsrobust/csv.hpp"
#include "tsrobust/huber.hpp"
#include "tsrobust/huber_reg.hpp"
#include "tsrobust/process.hpp"
#include "tsrobust/var_est.hpp"

namespace {

using nlohmann::json;
using namespace tsr;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    const std::string tok = text.substr(pos, next - pos);
    if (!tok.empty()) {
      if (tok == "inf" || tok == "infinity") {
        out.push_back(std::numeric_limits<double>::infinity());
      } else {
        out.push_back(std::stod(tok));
      }
    }
    pos = next + 1;
    if (next == text.size()) break;
  }
  if (out.empty()) throw InvalidInput("empty grid: " + text);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_grid(text)) out.push_back(static_cast<int>(v));
  return out;
}

InnovationDist parse_innov(const std::string& name) {
  if (name == "gaussian") return InnovationDist::gaussian(1.0);
  if (name == "t5") return InnovationDist::student_t(5.0);
  if (name.rfind("t", 0) == 0) return InnovationDist::student_t(std::stod(name.substr(1)));
  throw InvalidInput("unknown innovation: " + name);
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_text_file(out_path, content);
  }
}

json diagnostics_json(const VarEstimate& est) {
  json d;
  d["method"] = est.method;
  d["nu"] = est.nu;
  d["lambda"] = est.lambda;
  d["max_kkt_residual"] = est.max_kkt_residual();
  d["max_feasibility_gap"] = est.max_feasibility_gap();
  json subs = json::array();
  for (const auto& s : est.diagnostics) {
    subs.push_back({{"ok", s.ok},
                    {"kkt_residual", s.kkt_residual},
                    {"feasibility_gap", s.feasibility_gap},
                    {"iterations", s.iterations}});
  }
  d["subproblems"] = subs;
  return d;
}

int run_var_estimator(bool lasso, const std::string& input, const std::string& nu_text,
                      const std::string& lambda_text, const std::string& holdout_path,
                      const std::string& out_path, const std::string& diag_path) {
  const Matrix series = read_numeric_csv(input);
  std::vector<double> nus = parse_grid(nu_text);
  std::vector<double> lambdas = parse_grid(lambda_text);

  VarEstimate best;
  if (nus.size() == 1 && lambdas.size() == 1) {
    best = lasso ? robust_lasso_var(series, nus[0], lambdas[0])
                 : robust_dantzig_var(series, nus[0], lambdas[0]);
  } else {
    if (holdout_path.empty()) {
      throw InvalidInput("grid search needs --holdout series");
    }
    const Matrix holdout = read_numeric_csv(holdout_path);
    const Eigen::Index m = holdout.rows() - 1;
    if (m < 1) throw InvalidInput("holdout series too short");
    const Matrix predictors = holdout.topRows(m);
    const Matrix targets = holdout.bottomRows(m);
    double best_err = std::numeric_limits<double>::infinity();
    bool found = false;
    std::sort(nus.begin(), nus.end());
    for (double nu : nus) {
      const auto path = lasso ? lasso_var_path(series, nu, lambdas)
                              : dantzig_var_path(series, nu, lambdas);
      for (const auto& est : path) {
        if (!est.all_ok()) continue;
        const double err =
            (targets - predictors * est.A_hat.transpose()).rowwise().squaredNorm().sum() /
            static_cast<double>(m);
        if (!found || err < best_err) {
          best = est;
          best_err = err;
          found = true;
        }
      }
    }
    if (!found) throw TuningFailedError("no feasible grid point");
  }

  emit(out_path, matrix_to_csv(best.A_hat));
  if (!diag_path.empty()) write_text_file(diag_path, diagnostics_json(best).dump(2) + "\n");
  std::cerr << best.method << ": nu=" << best.nu << " lambda=" << best.lambda
            << " max_kkt=" << best.max_kkt_residual()
            << " max_feas_gap=" << best.max_feasibility_gap() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robust estimation for high-dimensional time series"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a VAR series as CSV");
  std::string sim_design = "banded", sim_innov = "t5", sim_out, sim_design_out;
  int sim_p = 50, sim_n = 100;
  std::uint64_t sim_seed = 1;
  sim->add_option("--design", sim_design, "banded|block|toeplitz|random_sparse|example_shift");
  sim->add_option("--p", sim_p);
  sim->add_option("--n", sim_n);
  sim->add_option("--seed", sim_seed);
  sim->add_option("--innov", sim_innov, "gaussian|t5|t<df>");
  sim->add_option("--out", sim_out, "series CSV path (stdout when omitted)");
  sim->add_option("--design-out", sim_design_out, "also dump the transition matrix");

  // estimate-mean
  auto* mean_cmd = app.add_subcommand("estimate-mean", "coordinatewise Huber mean");
  std::string mean_input, mean_nu = "auto", mean_out;
  double mean_c = 1.0;
  mean_cmd->add_option("--input", mean_input)->required();
  mean_cmd->add_option("--nu", mean_nu, "auto or a positive value");
  mean_cmd->add_option("--c", mean_c, "constant in the automatic nu");
  mean_cmd->add_option("--out", mean_out);

  // huber-reg
  auto* reg = app.add_subcommand("huber-reg", "weighted l1-penalized Huber regression");
  std::string reg_x, reg_y, reg_b_matrix = "identity", reg_nu_grid, reg_lambda_grid;
  std::string reg_hx, reg_hy, reg_out;
  double reg_b = std::numeric_limits<double>::infinity();
  reg->add_option("--x", reg_x)->required();
  reg->add_option("--y", reg_y)->required();
  reg->add_option("--b", reg_b, "weight bound; inf disables the weight");
  reg->add_option("--B", reg_b_matrix, "identity or a CSV matrix path");
  reg->add_option("--nu-grid", reg_nu_grid, "comma separated; default MAD-based");
  reg->add_option("--lambda-grid", reg_lambda_grid, "comma separated; default geometric");
  reg->add_option("--holdout-x", reg_hx);
  reg->add_option("--holdout-y", reg_hy);
  reg->add_option("--out", reg_out);

  // var-lasso / var-dantzig
  std::string vl_input, vl_nu = "inf", vl_lambda, vl_holdout, vl_out, vl_diag;
  auto* vl = app.add_subcommand("var-lasso", "robust lasso VAR transition estimate");
  vl->add_option("--input", vl_input)->required();
  vl->add_option("--nu", vl_nu, "value or comma grid; inf = no truncation");
  vl->add_option("--lambda", vl_lambda)->required();
  vl->add_option("--holdout", vl_holdout, "second series for grid search");
  vl->add_option("--out", vl_out);
  vl->add_option("--diagnostics", vl_diag);

  std::string vd_input, vd_nu = "inf", vd_lambda, vd_holdout, vd_out, vd_diag;
  auto* vd = app.add_subcommand("var-dantzig", "robust Dantzig VAR transition estimate");
  vd->add_option("--input", vd_input)->required();
  vd->add_option("--nu", vd_nu);
  vd->add_option("--lambda", vd_lambda)->required();
  vd->add_option("--holdout", vd_holdout);
  vd->add_option("--out", vd_out);
  vd->add_option("--diagnostics", vd_diag);

  // concentration
  auto* conc = app.add_subcommand("concentration", "empirical tails vs the Bernstein bound");
  std::string conc_model = "iid", conc_innov = "gaussian", conc_out;
  double conc_ar = 0.5, conc_rho0 = 0.5, conc_m = 2.0;
  int conc_n = 200, conc_reps = 10000, conc_p = 1;
  std::uint64_t conc_seed = 1;
  conc->add_option("--model", conc_model, "iid|var");
  conc->add_option("--ar", conc_ar, "AR(1) coefficient for --model var");
  conc->add_option("--p", conc_p, "dimension for --model iid (uniform weights)");
  conc->add_option("--n", conc_n);
  conc->add_option("--reps", conc_reps);
  conc->add_option("--rho0", conc_rho0);
  conc->add_option("--M", conc_m, "clip level of the transform");
  conc->add_option("--innov", conc_innov);
  conc->add_option("--seed", conc_seed);
  conc->add_option("--out", conc_out);

  // bench
  auto* bench = app.add_subcommand("bench", "paper-style benchmark runs");
  bench->require_subcommand(1);
  auto* bench_var = bench->add_subcommand("var", "VAR table benchmark");
  auto* bench_reg = bench->add_subcommand("regression", "regression table benchmark");
  std::string bv_config, bv_prefix = "bench_var";
  std::string br_config, br_prefix = "bench_regression";
  bench_var->add_option("--config", bv_config)->required();
  bench_var->add_option("--out", bv_prefix, "output prefix");
  bench_reg->add_option("--config", br_config)->required();
  bench_reg->add_option("--out", br_prefix, "output prefix");
  auto* bench_prof = bench->add_subcommand("profile", "|A^k| profiles as CSV");
  std::string bp_designs = "banded,block,toeplitz,random_sparse", bp_p = "100,500", bp_out;
  int bp_kmax = 80;
  std::uint64_t bp_seed = 1;
  bench_prof->add_option("--design", bp_designs, "comma separated design names");
  bench_prof->add_option("--p", bp_p, "comma separated sizes");
  bench_prof->add_option("--kmax", bp_kmax);
  bench_prof->add_option("--seed", bp_seed);
  bench_prof->add_option("--out", bp_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      Rng rng(sim_seed);
      const Matrix a = build_design(VarDesign::by_name(sim_design), sim_p, rng);
      if (!sim_design_out.empty()) write_matrix_csv(sim_design_out, a);
      const SeriesSample s =
          simulate_var(a, sim_n, parse_innov(sim_innov), default_burn_in(), rng);
      emit(sim_out, series_to_csv(s.X));
      return 0;
    }

    if (mean_cmd->parsed()) {
      const Matrix x = read_numeric_csv(mean_input);
      const double nu = mean_nu == "auto" ? -1.0 : std::stod(mean_nu);
      const HuberMeanResult res = huber_mean_vector(x, nu, mean_c);
      std::string csv = "j,mu_hat_j\n";
      for (Eigen::Index j = 0; j < res.mu_hat.size(); ++j) {
        csv += std::to_string(j + 1) + ',' + format_double(res.mu_hat[j]) + '\n';
      }
      emit(mean_out, csv);
      std::cerr << "nu=" << res.nu << "\n";
      return 0;
    }

    if (reg->parsed()) {
      const Matrix x = read_numeric_csv(reg_x);
      const Vector y = read_numeric_csv(reg_y).col(0);
      WeightSpec spec = WeightSpec::off();
      if (std::isfinite(reg_b)) {
        spec = reg_b_matrix == "identity"
                   ? WeightSpec::identity(reg_b)
                   : WeightSpec::with_matrix(read_numeric_csv(reg_b_matrix), reg_b);
      }
      std::vector<double> nus =
          reg_nu_grid.empty() ? default_nu_grid(x, y) : parse_grid(reg_nu_grid);
      std::vector<double> lambdas =
          reg_lambda_grid.empty()
              ? default_lambda_grid(x, y, nus[nus.size() / 2], spec)
              : parse_grid(reg_lambda_grid);

      HuberConfig base;
      base.weight = spec;
      FitResult fit;
      double nu_used, lambda_used;
      if (nus.size() == 1 && lambdas.size() == 1) {
        HuberConfig cfg = base;
        cfg.nu = nus[0];
        cfg.lambda = lambdas[0];
        fit = huber_reg_fit(x, y, cfg);
        nu_used = nus[0];
        lambda_used = lambdas[0];
      } else if (!reg_hx.empty() && !reg_hy.empty()) {
        const Matrix hx = read_numeric_csv(reg_hx);
        const Vector hy = read_numeric_csv(reg_hy).col(0);
        const TuneResult tuned = huber_reg_tune(x, y, nus, lambdas, hx, hy, base);
        fit = tuned.fit;
        nu_used = tuned.nu;
        lambda_used = tuned.lambda;
      } else {
        // no holdout given: first half trains, second half validates
        const Eigen::Index half = x.rows() / 2;
        const TuneResult tuned =
            huber_reg_tune(x.topRows(half), y.head(half), nus, lambdas,
                           x.bottomRows(x.rows() - half), y.tail(x.rows() - half), base);
        fit = tuned.fit;
        nu_used = tuned.nu;
        lambda_used = tuned.lambda;
      }

      json j;
      j["beta_hat"] = std::vector<double>(fit.beta_hat.data(),
                                          fit.beta_hat.data() + fit.beta_hat.size());
      j["nu"] = nu_used;
      j["lambda"] = lambda_used;
      j["objective"] = fit.objective_trace.back();
      j["kkt_residual"] = fit.kkt_residual;
      j["converged"] = fit.converged;
      emit(reg_out, j.dump(2) + "\n");
      return 0;
    }

    if (vl->parsed()) {
      return run_var_estimator(true, vl_input, vl_nu, vl_lambda, vl_holdout, vl_out,
                               vl_diag);
    }
    if (vd->parsed()) {
      return run_var_estimator(false, vd_input, vd_nu, vd_lambda, vd_holdout, vd_out,
                               vd_diag);
    }

    if (conc->parsed()) {
      Rng rng(conc_seed);
      ProcessModel model = conc_model == "var"
                               ? ProcessModel::ar1(conc_ar, parse_innov(conc_innov))
                               : ProcessModel::iid(conc_p, parse_innov(conc_innov));
      const int dim = static_cast<int>(model.A.rows());
      const Vector weights = Vector::Constant(dim, 1.0 / dim);
      const LipschitzTransform g = clipped_linear_transform(weights, conc_m);
      BoundParams pre;
      const DependenceProfile prof = dependence_profile(model.A, conc_rho0, 400);
      pre.rho0 = conc_rho0;
      pre.tau = prof.tau;
      pre.gamma = prof.gamma;
      pre.sigma = 1.0;
      pre.m_bound = conc_m;
      pre.n = conc_n;
      const TailTable table = empirical_tail(model, g, conc_n, default_x_grid(pre),
                                             conc_reps, rng, conc_rho0);
      std::string csv = "x,empirical,bound,stderr\n";
      for (const auto& row : table.rows) {
        csv += format_double(row.x) + ',' + format_double(row.empirical) + ',' +
               format_double(row.bound) + ',' + format_double(row.stderr_) + '\n';
      }
      emit(conc_out, csv);
      return 0;
    }

    if (bench_var->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::from_json_file(bv_config);
      cfg.kind = "var";
      const BenchOutput out = run_var_benchmark(cfg);
      write_bench_output(out, bv_prefix);
      std::cout << out.summary_csv();
      return 0;
    }
    if (bench_reg->parsed()) {
      ExperimentConfig cfg = ExperimentConfig::from_json_file(br_config);
      cfg.kind = "regression";
      const BenchOutput out = run_regression_benchmark(cfg);
      write_bench_output(out, br_prefix);
      std::cout << out.summary_csv();
      return 0;
    }
    if (bench_prof->parsed()) {
      std::vector<std::string> designs;
      std::size_t pos = 0;
      while (pos <= bp_designs.size()) {
        std::size_t next = bp_designs.find(',', pos);
        if (next == std::string::npos) next = bp_designs.size();
        if (next > pos) designs.push_back(bp_designs.substr(pos, next - pos));
        pos = next + 1;
        if (next == bp_designs.size()) break;
      }
      emit(bp_out, profile_csv(designs, parse_int_list(bp_p), bp_kmax, bp_seed));
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
