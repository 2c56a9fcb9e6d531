// Command-line front end for robust location estimation on manifolds:
// Huber/pseudo-Huber means, one-sample location tests, efficiency tables,
// and the simulation studies.
#include <chrono>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "hmean/bench.hpp"
#include "hmean/efficiency.hpp"
#include "hmean/io.hpp"
#include "hmean/special_functions.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace hmean;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitNumerical = 4;

Cutoff parse_cutoff(const std::string& text, const Sample* data) {
  if (text == "inf") return Cutoff::infinity();
  if (text == "auto") {
    if (!data) throw std::domain_error("--c auto needs a dataset");
    return Cutoff::finite(default_cutoff(*data));
  }
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::domain_error("bad cutoff '" + text + "'");
  }
  if (pos != text.size()) throw std::domain_error("bad cutoff '" + text + "'");
  return v == 0.0 ? Cutoff::zero() : Cutoff::finite(v);
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(row);
  }
  return out;
}

json cutoff_to_json(const Cutoff& c) {
  return c.is_infinite() ? json("inf") : json(c.value());
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
  out << report.dump(2) << "\n";
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

json base_report(const std::string& command) {
  json report;
  report["schema"] = "rmm-report-v1";
  report["command"] = command;
  return report;
}

int run_estimate(const std::string& data_path, const std::string& c_text,
                 const std::string& loss_name, double step, double tol,
                 int max_iter, std::uint64_t seed, const std::string& out_path) {
  Timer timer;
  const Sample data = read_dataset_file(data_path);
  const Cutoff c = parse_cutoff(c_text, &data);
  const LossSpec loss = loss_name == "pseudo" ? LossSpec::pseudo_huber(c)
                                              : LossSpec::huber(c);
  SolverConfig cfg;
  cfg.step_alpha = step;
  cfg.grad_tol = tol;
  cfg.max_iter = max_iter;
  const EstimateReport est = huber_mean(data, loss, cfg);

  json report = base_report("estimate");
  report["config"] = {{"data", data_path},
                      {"manifold", data.tag.name()},
                      {"c", cutoff_to_json(c)},
                      {"loss", loss_name},
                      {"step", step},
                      {"tol", tol},
                      {"max_iter", max_iter}};
  report["seed"] = seed;
  report["results"] = {{"mean", vector_to_json(est.mean.coords)},
                       {"converged", est.converged},
                       {"iterations", est.iterations},
                       {"final_grad_norm", est.final_grad_norm},
                       {"objective", est.objective_value},
                       {"left_support_ball", est.left_support_ball}};
  report["timing_seconds"] = timer.seconds();
  emit(report, out_path);
  return est.converged ? kExitOk : kExitNoConvergence;
}

int run_test(const std::string& data_path, const std::string& null_path,
             const std::string& c_text, double alpha,
             const std::string& out_path) {
  Timer timer;
  const Sample data = read_dataset_file(data_path);
  const Sample null_set = read_dataset_file(null_path);
  if (null_set.size() != 1)
    throw std::domain_error("--null-point file must hold exactly one point");
  const Cutoff c = parse_cutoff(c_text, &data);
  const TestResult res =
      one_sample_test(data, null_set.points.front(), c, alpha);

  json report = base_report("test");
  report["config"] = {{"data", data_path},
                      {"null_point", null_path},
                      {"c", cutoff_to_json(c)},
                      {"alpha", alpha}};
  report["results"] = {{"statistic_Tn", res.statistic_Tn},
                       {"df", res.df},
                       {"critical_value", res.critical_value},
                       {"p_value", res.p_value},
                       {"reject", res.reject}};
  report["timing_seconds"] = timer.seconds();
  emit(report, out_path);
  return kExitOk;
}

std::function<double(double)> are_function(const std::string& family,
                                           double sigma) {
  if (family == "gaussian-real")
    return [](double k) { return are_gaussian_real(k); };
  if (family == "circle-gaussian")
    return [sigma](double k) {
      return are_circle(k, sigma, CircleFamily::GaussianType);
    };
  if (family == "circle-laplace")
    return [sigma](double k) {
      return are_circle(k, sigma, CircleFamily::LaplaceType);
    };
  if (family == "laplace-real")
    return [sigma](double k) { return are_laplace_real(k * sigma, sigma); };
  throw std::domain_error("unknown family '" + family + "'");
}

int run_are(const std::string& family, double sigma, const std::string& grid,
            double target, const std::string& out_path) {
  const auto fn = are_function(family, sigma);
  if (!grid.empty()) {
    double lo = 0, hi = 0, step = 0;
    if (std::sscanf(grid.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 ||
        step <= 0 || hi < lo)
      throw std::domain_error("--kappa-grid expects lo:hi:step");
    std::ostringstream csv;
    csv << "kappa,sigma,are\n";
    for (double k = lo; k <= hi + 1e-12; k += step)
      csv << k << ',' << sigma << ',' << fn(k) << '\n';
    if (out_path.empty()) {
      std::cout << csv.str();
    } else {
      std::ofstream out(out_path);
      out << csv.str();
    }
    return kExitOk;
  }
  const double kappa = find_kappa_for_target(fn, target);
  json report = base_report("are");
  report["config"] = {{"family", family}, {"sigma", sigma}, {"target", target}};
  report["results"] = {{"kappa", kappa}, {"are", fn(kappa)}};
  report["timing_seconds"] = 0.0;
  emit(report, out_path);
  return kExitOk;
}

// Synthetic stand-in for a small real SPD dataset: 36 points, one of them a
// gross outlier.
Sample synthetic_spd_with_outlier(std::uint64_t seed) {
  const ManifoldPoint identity =
      ManifoldPoint::spd(Eigen::MatrixXd::Identity(2, 2));
  SeededRng rng(seed, 99);
  Sample data = sample(DistributionSpec::lognormal_spd(identity, 0.5), 36, rng);
  Eigen::VectorXd far(3);
  far << 6.0, 6.0, 4.0;
  data.points.back() = exp_map(identity, tangent(identity, far));
  return data;
}

int run_simulate(const std::string& study, int reps, std::uint64_t seed,
                 const std::string& out_path, const std::string& csv_path) {
  Timer timer;
  json report = base_report("simulate");
  report["config"] = {{"study", study}, {"reps", reps}};
  report["seed"] = seed;
  std::ostringstream csv;
  SeededRng rng(seed);

  if (study == "table1") {
    const ManifoldPoint identity =
        ManifoldPoint::spd(Eigen::MatrixXd::Identity(2, 2));
    const std::vector<EstimatorSpec> estimators = {
        {"frechet", LossSpec::huber(Cutoff::infinity())},
        {"huber_c1", LossSpec::huber(Cutoff::finite(1.0))},
        {"pseudo_huber_c1", LossSpec::pseudo_huber(Cutoff::finite(1.0))},
        {"median", LossSpec::huber(Cutoff::zero())}};
    csv << "setting,estimator,bias,variance,mse\n";
    json rows = json::array();
    const auto run_setting = [&](const std::string& name,
                                 const DistributionSpec& spec, SeededRng r) {
      for (const auto& row :
           mse_bias_variance(spec, identity, estimators, 100, reps, r)) {
        csv << name << ',' << row.estimator << ',' << row.bias << ','
            << row.variance << ',' << row.mse << '\n';
        rows.push_back({{"setting", name},
                        {"estimator", row.estimator},
                        {"bias", row.bias},
                        {"variance", row.variance},
                        {"mse", row.mse}});
      }
    };
    run_setting("contaminated_lognormal", contaminated_lognormal_spd2(),
                rng.stream(1));
    run_setting("log_laplace", DistributionSpec::log_laplace_spd(identity, 1.0),
                rng.stream(2));
    report["results"]["rows"] = rows;
  } else if (study == "table2") {
    Eigen::VectorXd north(3);
    north << 0, 0, 1;
    const ManifoldPoint mu = ManifoldPoint::sphere(north);
    const auto rows = covariance_error_study(mu, 30.0, {0.3}, {100, 300, 1000},
                                             reps, rng);
    csv << "c,n,mean_rel_error,sd_rel_error\n";
    json jrows = json::array();
    for (const auto& r : rows) {
      csv << r.c << ',' << r.n << ',' << r.mean_rel_error << ','
          << r.sd_rel_error << '\n';
      jrows.push_back({{"c", r.c},
                       {"n", r.n},
                       {"mean_rel_error", r.mean_rel_error},
                       {"sd_rel_error", r.sd_rel_error}});
    }
    report["results"]["rows"] = jrows;
  } else if (study == "table3") {
    Eigen::VectorXd north(3);
    north << 0, 0, 1;
    const ManifoldPoint m0 = ManifoldPoint::sphere(north);
    const auto rows = test_power_study(m0, {0.0, 3.0, 5.0}, 30.0,
                                       Cutoff::finite(0.3), {100, 500, 1000},
                                       reps, 0.05, rng);
    csv << "offset_deg,n,rejection_rate\n";
    json jrows = json::array();
    for (const auto& r : rows) {
      csv << r.offset_deg << ',' << r.n << ',' << r.rejection_rate << '\n';
      jrows.push_back({{"offset_deg", r.offset_deg},
                       {"n", r.n},
                       {"rejection_rate", r.rejection_rate}});
    }
    report["results"]["rows"] = jrows;
  } else if (study == "breakdown") {
    std::vector<ManifoldPoint> pts;
    for (int i = 0; i < 10; ++i) {
      Eigen::VectorXd x(2);
      x << rng.normal(), rng.normal();
      pts.push_back(ManifoldPoint::euclidean(x));
    }
    const Sample base = Sample::of(pts);
    const std::vector<double> distances = {1, 10, 100, 1e3, 1e4, 1e6};
    const auto huber = breakdown_probe(base, 4, Cutoff::finite(1.0), distances);
    const auto frechet = breakdown_probe(base, 5, Cutoff::infinity(), distances);
    csv << "estimator,k,distance,displacement,bound\n";
    json jrows = json::array();
    const auto add = [&](const char* name, const BreakdownReport& r) {
      for (std::size_t i = 0; i < r.displacement.size(); ++i) {
        csv << name << ',' << r.k_corrupted << ','
            << r.outlier_distance_schedule[i] << ',' << r.displacement[i] << ','
            << r.bound_values[i] << '\n';
        jrows.push_back({{"estimator", name},
                         {"k", r.k_corrupted},
                         {"distance", r.outlier_distance_schedule[i]},
                         {"displacement", r.displacement[i]},
                         {"bound", r.bound_values[i]}});
      }
    };
    add("huber_c1", huber);
    add("frechet", frechet);
    report["results"]["rows"] = jrows;
  } else if (study == "bridge") {
    Eigen::VectorXd north(3);
    north << 0, 0, 1;
    const ManifoldPoint mu = ManifoldPoint::sphere(north);
    const Sample data = sample(DistributionSpec::vmf(mu, 40.0), 20, rng);
    const auto rows =
        limit_bridge_check(data, {1e-4, 1e-2, 0.1, 1.0, 10.0, 1e3});
    csv << "c,dist_to_median,dist_to_frechet\n";
    json jrows = json::array();
    for (const auto& r : rows) {
      csv << r.c << ',' << r.dist_to_median << ',' << r.dist_to_frechet << '\n';
      jrows.push_back({{"c", r.c},
                       {"dist_to_median", r.dist_to_median},
                       {"dist_to_frechet", r.dist_to_frechet}});
    }
    report["results"]["rows"] = jrows;
  } else if (study == "bootstrap") {
    const Sample data = synthetic_spd_with_outlier(seed);
    const Cutoff c = Cutoff::finite(1.0);
    const int b = std::max(50, reps);
    const BootstrapReport boot = bootstrap_means(data, c, b, rng);
    const AsymptoticCovariance cov =
        limiting_covariance(data, boot.center, c, tangent_frame(boot.center));
    csv << "replicate,coord,value\n";
    for (std::size_t r = 0; r < boot.logs.size(); ++r)
      for (int j = 0; j < boot.logs[r].size(); ++j)
        csv << r << ',' << j << ',' << boot.logs[r][j] << '\n';
    report["results"] = {
        {"center", vector_to_json(boot.center.coords)},
        {"bootstrap_covariance", matrix_to_json(boot.covariance)},
        {"plugin_covariance_over_n",
         matrix_to_json(Eigen::MatrixXd(cov.a_hat / data.size()))},
        {"replicates", b}};
  } else {
    throw std::domain_error("unknown study '" + study + "'");
  }

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot open '" + csv_path + "'");
    out << csv.str();
  }
  report["timing_seconds"] = timer.seconds();
  emit(report, out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust location estimation and inference on Riemannian manifolds"};
  app.require_subcommand(1);

  std::string data_path, c_text = "auto", loss_name = "huber", out_path;
  double step = 0.25, tol = 1e-9, alpha = 0.05;
  int max_iter = 10000;
  std::uint64_t seed = 0;

  auto* est = app.add_subcommand("estimate", "Compute a robust location estimate");
  est->add_option("--data", data_path, "dataset CSV")->required();
  est->add_option("--c", c_text, "cutoff: number, 0, inf, or auto");
  est->add_option("--loss", loss_name, "huber or pseudo")
      ->check(CLI::IsMember({"huber", "pseudo"}));
  est->add_option("--step", step, "gradient step fraction");
  est->add_option("--tol", tol, "gradient-norm tolerance");
  est->add_option("--max-iter", max_iter, "iteration cap");
  est->add_option("--seed", seed, "seed echoed into the report");
  est->add_option("--out", out_path, "report JSON path (default stdout)");

  std::string null_path;
  auto* tst = app.add_subcommand("test", "One-sample location test");
  tst->add_option("--data", data_path, "dataset CSV")->required();
  tst->add_option("--null-point", null_path, "single-point dataset CSV")
      ->required();
  tst->add_option("--c", c_text, "cutoff: number, inf, or auto");
  tst->add_option("--alpha", alpha, "test level in (0, 1)")
      ->check(CLI::Range(1e-12, 1.0 - 1e-12));
  tst->add_option("--out", out_path, "report JSON path (default stdout)");

  std::string family, grid;
  double sigma = 1.0, target = -1.0;
  auto* are = app.add_subcommand("are", "Asymptotic relative efficiency");
  are->add_option("--family", family,
                  "gaussian-real, circle-gaussian, circle-laplace, laplace-real")
      ->required();
  are->add_option("--sigma", sigma, "scale parameter");
  are->add_option("--kappa-grid", grid, "lo:hi:step grid (CSV output)");
  are->add_option("--target", target, "target efficiency in (0, 1)");
  are->add_option("--out", out_path, "output path (default stdout)");

  std::string study, csv_path;
  int reps = 250;
  auto* sim = app.add_subcommand("simulate", "Run a named simulation study");
  sim->add_option("--study", study,
                  "table1, table2, table3, breakdown, bridge, bootstrap")
      ->required();
  sim->add_option("--reps", reps, "replicate count");
  sim->add_option("--seed", seed, "random seed");
  sim->add_option("--out", out_path, "report JSON path (default stdout)");
  sim->add_option("--csv", csv_path, "raw table CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (est->parsed())
      return run_estimate(data_path, c_text, loss_name, step, tol, max_iter,
                          seed, out_path);
    if (tst->parsed())
      return run_test(data_path, null_path, c_text, alpha, out_path);
    if (are->parsed()) {
      if (grid.empty() && !(target > 0.0 && target < 1.0))
        throw std::domain_error("provide --kappa-grid or --target in (0, 1)");
      return run_are(family, sigma, grid, target, out_path);
    }
    return run_simulate(study, reps, seed, out_path, csv_path);
  } catch (const SingularCovariance& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NoCrossingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const CutLocusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
