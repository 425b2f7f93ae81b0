#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "varprod/case_study.hpp"
#include "varprod/distributions.hpp"
#include "varprod/error.hpp"
#include "varprod/estimators.hpp"
#include "varprod/inference.hpp"
#include "varprod/market_data.hpp"
#include "varprod/numerics.hpp"
#include "varprod/product_acvf.hpp"
#include "varprod/random.hpp"
#include "varprod/report_io.hpp"
#include "varprod/var1.hpp"

namespace {

using nlohmann::json;
using namespace varprod;

struct ModelFlags {
  std::string preset = "1";
  std::string dist = "gaussian";
  std::optional<double> phi11, phi12, phi21, phi22;
  std::optional<double> rho;
  double eta = 5.0;
  std::optional<double> sigma1, sigma2;
  double mean_shift = 0.0;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f) {
  cmd->add_option("--case", f.preset, "Parameter preset and expected dependence structure")
      ->check(CLI::IsMember({"1", "2", "3", "general"}))
      ->capture_default_str();
  cmd->add_option("--dist", f.dist, "Residual law")
      ->check(CLI::IsMember({"gaussian", "t", "t-indep"}))
      ->capture_default_str();
  cmd->add_option("--phi11", f.phi11);
  cmd->add_option("--phi12", f.phi12);
  cmd->add_option("--phi21", f.phi21);
  cmd->add_option("--phi22", f.phi22);
  cmd->add_option("--sigma1", f.sigma1, "Marginal residual SD (default sqrt(eta/(eta-2)))");
  cmd->add_option("--sigma2", f.sigma2, "Marginal residual SD (default sqrt(eta/(eta-2)))");
  cmd->add_option("--rho", f.rho, "Residual correlation");
  cmd->add_option("--eta", f.eta, "Student's t degrees of freedom")->capture_default_str();
  cmd->add_option("--mean-shift", f.mean_shift, "Constant added to X1 in the product")
      ->capture_default_str();
}

Var1Model build_model(const ModelFlags& f) {
  TransitionMatrix phi;
  double rho = 0.0;
  if (f.preset == "1") {
    phi = TransitionMatrix::diagonal(0.8, 0.8);
  } else if (f.preset == "2") {
    phi = TransitionMatrix::diagonal(0.8, 0.8);
    rho = 0.8;
  } else if (f.preset == "3") {
    phi = {0.0, 0.8, 0.0, 0.8};
  } else {
    phi = {0.5, 0.2, 0.1, 0.4};
    rho = 0.5;
  }
  if (f.phi11) phi.phi11 = *f.phi11;
  if (f.phi12) phi.phi12 = *f.phi12;
  if (f.phi21) phi.phi21 = *f.phi21;
  if (f.phi22) phi.phi22 = *f.phi22;
  if (f.rho) rho = *f.rho;

  const double default_sd = f.dist == "gaussian" ? std::sqrt(5.0 / 3.0)
                            : f.eta > 2.0        ? std::sqrt(f.eta / (f.eta - 2.0))
                                                 : 1.0;
  const double s1 = f.sigma1.value_or(default_sd);
  const double s2 = f.sigma2.value_or(default_sd);

  Var1Model model;
  model.phi = phi;
  model.mean_shift = f.mean_shift;
  // Cases 1 and 3 need independent components, which a bivariate t never
  // has; "t" there means independent univariate t components.
  const bool independent_case = f.preset == "1" || f.preset == "3";
  if (f.dist == "gaussian") {
    model.residual = ResidualSpec::gaussian(s1, s2, rho);
  } else if (f.dist == "t-indep" || independent_case) {
    if (f.rho && *f.rho != 0.0) throw ValidationError("--rho is not used with independent t residuals");
    if (!(f.eta > 2.0)) throw DomainError("--sigma needs eta > 2 to define a scale");
    model.residual = ResidualSpec::independent_t(f.eta, f.eta, t_scale_for_sd(f.eta, s1),
                                                 t_scale_for_sd(f.eta, s2));
  } else {
    if (!(f.eta > 2.0)) throw DomainError("--sigma needs eta > 2 to define a scale");
    model.residual = ResidualSpec::bivariate_t(f.eta, rho, t_scale_for_sd(f.eta, s1),
                                               t_scale_for_sd(f.eta, s2));
  }
  validate(model);

  if (f.preset != "general") {
    const CaseTag expected = f.preset == "1"   ? CaseTag::Case1
                             : f.preset == "2" ? CaseTag::Case2
                                               : CaseTag::Case3;
    const CaseTag actual = classify_case(model);
    if (actual != expected) {
      throw ValidationError(std::string("parameters describe ") + to_string(actual) +
                            ", not the requested " + to_string(expected));
    }
  }
  return model;
}

// Writes to the named file, or stdout when the name is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw IoError("cannot write '" + path + "'");
      path_ = path;
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  void close() {
    stream().flush();
    if (!stream()) throw IoError("write failed for '" + (path_.empty() ? "stdout" : path_) + "'");
  }

 private:
  std::ofstream file_;
  std::string path_;
};

std::string fmt(double v) { return format_double(v); }

const std::vector<double>& pick_column(const NumericTable& table, const std::string& name,
                                       std::size_t fallback) {
  if (!name.empty()) {
    for (std::size_t i = 0; i < table.names.size(); ++i) {
      if (table.names[i] == name) return table.columns[i];
    }
    throw ValidationError("no column named '" + name + "'");
  }
  if (fallback >= table.columns.size()) {
    throw ValidationError("input needs at least " + std::to_string(fallback + 1) + " numeric columns");
  }
  return table.columns[fallback];
}

Trajectory two_columns(const NumericTable& table) {
  Trajectory traj;
  traj.x1 = pick_column(table, "", 0);
  traj.x2 = pick_column(table, "", 1);
  return traj;
}

json test_json(const TestResult& t) {
  json j = {{"test", to_string(t.name)}, {"statistic", t.statistic}, {"p_value", t.p_value},
            {"n", t.n}};
  if (t.dof > 0.0) j["dof"] = t.dof;
  return j;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("malformed --levels entry '" + item + "'");
    }
  }
  if (out.size() != 2 || !(0.0 <= out[0] && out[0] < out[1] && out[1] <= 1.0)) {
    throw ValidationError("--levels needs two increasing values in [0, 1]");
  }
  return out;
}

struct FitDistResult {
  json summary;
  std::function<double(double)> cdf;
};

FitDistResult fit_distribution(std::span<const double> z, const std::string& family, bool fix_mu) {
  FitDistResult out;
  if (family == "gaussian") {
    double mu = 0.0;
    std::vector<double> centred(z.begin(), z.end());
    if (!fix_mu) {
      for (double v : z) mu += v;
      mu /= static_cast<double>(z.size());
      for (double& v : centred) v -= mu;
    }
    const GaussianFit g = fit_gaussian_zero_mean(centred);
    out.summary = {{"family", "gaussian"}, {"mu", mu}, {"sigma", g.sigma}, {"loglik", g.loglik}};
    out.cdf = [mu, s = g.sigma](double x) { return numerics::normal_cdf((x - mu) / s); };
  } else {
    const StudentTFit t = fit_t_locscale(z, fix_mu);
    out.summary = {{"family", "t-locscale"}, {"mu", t.mu},         {"lambda", t.lambda},
                   {"eta", t.eta},           {"loglik", t.loglik}, {"effectively_gaussian", t.effectively_gaussian}};
    out.cdf = [t](double x) { return cdf_t((x - t.mu) / t.lambda, t.eta); };
  }
  return out;
}

MarketSeries load_prices(const std::string& path, bool strict) {
  IngestResult r = ingest_csv(path, CsvSchema::PriceSeries, strict);
  if (r.dropped > 0) std::cerr << "warning: dropped " << r.dropped << " malformed rows from " << path << "\n";
  return std::move(r.columns.front());
}

MarketSeries load_errors(const std::string& path, bool strict) {
  IngestResult r = ingest_csv(path, CsvSchema::ForecastActualPair, strict);
  if (r.dropped > 0) std::cerr << "warning: dropped " << r.dropped << " malformed rows from " << path << "\n";
  return forecast_error(r.columns[0], r.columns[1]);
}

void warn_incomplete(const WeeklySeries& w, const char* what) {
  std::size_t partial = 0;
  for (bool c : w.complete) partial += c ? 0 : 1;
  if (partial > 0) std::cerr << "note: " << partial << " incomplete week(s) retained in " << what << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Product of bi-dimensional VAR(1) components: simulation, ACVF and case study"};
  app.require_subcommand(1);

  // simulate
  ModelFlags sim_flags;
  std::size_t sim_n = 1000;
  std::size_t sim_burnin = kDefaultBurnin;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  auto* sim = app.add_subcommand("simulate", "Simulate a trajectory; writes t,x1,x2,y");
  add_model_flags(sim, sim_flags);
  sim->add_option("--n", sim_n)->capture_default_str();
  sim->add_option("--burnin", sim_burnin)->capture_default_str();
  sim->add_option("--seed", sim_seed)->capture_default_str();
  sim->add_option("--out", sim_out, "Output CSV (default stdout)");

  // acvf
  ModelFlags acvf_flags;
  std::string acvf_mode = "auto";
  int acvf_hmax = 10;
  std::string acvf_out;
  auto* acvf = app.add_subcommand("acvf", "Theoretical ACVF of the product series; writes h,acvf");
  add_model_flags(acvf, acvf_flags);
  acvf->add_option("--mode", acvf_mode)->check(CLI::IsMember({"closed", "numeric", "auto"}))->capture_default_str();
  acvf->add_option("--hmax", acvf_hmax)->capture_default_str();
  acvf->add_option("--out", acvf_out);

  // mc-bounds
  ModelFlags mc_flags;
  McBandConfig mc_config;
  mc_config.n = 100;
  std::string mc_levels = "0.05,0.95";
  std::uint64_t mc_seed = 1;
  std::string mc_out;
  auto* mc = app.add_subcommand("mc-bounds", "Monte Carlo band of the empirical product ACVF; writes h,theoretical,lower,upper");
  add_model_flags(mc, mc_flags);
  mc->add_option("--n", mc_config.n)->capture_default_str();
  mc->add_option("--reps", mc_config.reps)->capture_default_str();
  mc->add_option("--hmax", mc_config.hmax)->capture_default_str();
  mc->add_option("--burnin", mc_config.burnin)->capture_default_str();
  mc->add_option("--levels", mc_levels)->capture_default_str();
  mc->add_option("--seed", mc_seed)->capture_default_str();
  mc->add_option("--threads", mc_config.threads, "0 = all cores")->capture_default_str();
  mc->add_option("--out", mc_out);

  // empirical-acvf
  std::string emp_file;
  int emp_hmax = 10;
  std::string emp_column;
  auto* emp = app.add_subcommand("empirical-acvf",
                                 "Sample ACVF of one column, or of the product of the first two; writes h,acvf");
  emp->add_option("file", emp_file)->required();
  emp->add_option("--hmax", emp_hmax)->capture_default_str();
  emp->add_option("--column", emp_column, "Use this single column instead of the product");

  // fit-var
  std::string fitvar_file;
  auto* fitvar = app.add_subcommand("fit-var", "Yule-Walker VAR(1) fit of the first two numeric columns");
  fitvar->add_option("file", fitvar_file)->required();

  // fit-dist
  std::string fitdist_file;
  std::string fitdist_family = "t-locscale";
  std::string fitdist_column;
  bool fitdist_fix_mu = false;
  auto* fitdist = app.add_subcommand("fit-dist", "Fit a Gaussian or t location-scale law to one column");
  fitdist->add_option("file", fitdist_file)->required();
  fitdist->add_option("--family", fitdist_family)->check(CLI::IsMember({"gaussian", "t-locscale"}))->capture_default_str();
  fitdist->add_option("--column", fitdist_column);
  fitdist->add_flag("--fix-mu", fitdist_fix_mu, "Fix the location at 0");

  // test
  std::string test_kind;
  std::string test_file;
  int test_bins = kDefaultChi2Bins;
  std::string test_family = "gaussian";
  std::string test_column;
  bool test_fix_mu = false;
  auto* test = app.add_subcommand("test", "Hypothesis tests: corr-t and chi2 on two columns, ks on one");
  test->add_option("kind", test_kind)->required()->check(CLI::IsMember({"corr-t", "chi2", "ks"}));
  test->add_option("file", test_file)->required();
  test->add_option("--bins", test_bins, "chi2: quantile cells per axis")->capture_default_str();
  test->add_option("--family", test_family, "ks: fitted family")->check(CLI::IsMember({"gaussian", "t-locscale"}))->capture_default_str();
  test->add_option("--column", test_column, "ks: column to test");
  test->add_flag("--fix-mu", test_fix_mu, "ks: fit with location fixed at 0");

  // case-study
  std::string cs_prices;
  std::string cs_load;
  bool cs_weekly = false;
  bool cs_strict = false;
  bool cs_no_timestamp = false;
  std::string cs_out_dir = "case_study_out";
  CaseStudyConfig cs_config;
  auto* cs = app.add_subcommand("case-study", "Fit, diagnose and compare the product ACVF for price and load-error data");
  cs->add_option("--prices", cs_prices, "CSV with header timestamp,price")->required();
  cs->add_option("--load", cs_load, "CSV with header timestamp,forecast,actual")->required();
  cs->add_flag("--weekly", cs_weekly, "Aggregate both inputs to ISO-week means first");
  cs->add_flag("--strict", cs_strict, "Fail on malformed rows instead of dropping them");
  cs->add_option("--seed", cs_config.seed)->capture_default_str();
  cs->add_option("--hmax", cs_config.hmax)->capture_default_str();
  cs->add_option("--reps", cs_config.reps)->capture_default_str();
  cs->add_option("--alpha", cs_config.alpha, "Significance level of the Case-1 gate")->capture_default_str();
  cs->add_option("--bins", cs_config.chi2_bins)->capture_default_str();
  cs->add_option("--threads", cs_config.threads)->capture_default_str();
  cs->add_option("--out-dir", cs_out_dir)->capture_default_str();
  cs->add_flag("--no-timestamp", cs_no_timestamp, "Omit the run timestamp from report.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*sim) {
      const Var1Model model = build_model(sim_flags);
      RandomStream rng(sim_seed);
      const Trajectory traj = simulate(model, sim_n, sim_burnin, rng);
      const auto y = product_series(traj, model.mean_shift);
      Output out(sim_out);
      out.stream() << "t,x1,x2,y\n";
      for (std::size_t t = 0; t < traj.size(); ++t) {
        out.stream() << (t + 1) << ',' << fmt(traj.x1[t]) << ',' << fmt(traj.x2[t]) << ',' << fmt(y[t]) << '\n';
      }
      out.close();
    } else if (*acvf) {
      const Var1Model model = build_model(acvf_flags);
      const AcvfMode mode = acvf_mode == "closed"    ? AcvfMode::Closed
                            : acvf_mode == "numeric" ? AcvfMode::Numeric
                                                     : AcvfMode::Auto;
      const AcvfCurve curve = theoretical_acvf(model, acvf_hmax, mode);
      Output out(acvf_out);
      out.stream() << "h,acvf\n";
      for (std::size_t i = 0; i < curve.lags.size(); ++i) {
        out.stream() << curve.lags[i] << ',' << fmt(curve.values[i]) << '\n';
      }
      out.close();
      std::cerr << "case: " << to_string(curve.case_tag) << "\n";
    } else if (*mc) {
      const Var1Model model = build_model(mc_flags);
      const auto levels = parse_levels(mc_levels);
      mc_config.level_low = levels[0];
      mc_config.level_high = levels[1];
      const ConfidenceBand band = mc_confidence_bounds(model, mc_config, RandomStream(mc_seed));
      std::vector<double> theory(band.lags.size(), std::nan(""));
      try {
        theory = theoretical_acvf(model, mc_config.hmax).values;
      } catch (const HeavyTailError& e) {
        std::cerr << "warning: no theoretical ACVF: " << e.what() << "\n";
      }
      Output out(mc_out);
      out.stream() << "h,theoretical,lower,upper\n";
      for (std::size_t i = 0; i < band.lags.size(); ++i) {
        out.stream() << band.lags[i] << ',' << fmt(theory[i]) << ',' << fmt(band.lower[i]) << ','
                     << fmt(band.upper[i]) << '\n';
      }
      out.close();
    } else if (*emp) {
      const NumericTable table = read_numeric_table(emp_file);
      std::vector<double> series;
      if (!emp_column.empty()) {
        series = pick_column(table, emp_column, 0);
      } else if (table.columns.size() >= 2) {
        series = product_series(two_columns(table));
      } else {
        series = pick_column(table, "", 0);
      }
      const AcvfCurve curve = empirical_acvf(series, emp_hmax);
      std::cout << "h,acvf\n";
      for (std::size_t i = 0; i < curve.lags.size(); ++i) {
        std::cout << curve.lags[i] << ',' << fmt(curve.values[i]) << '\n';
      }
    } else if (*fitvar) {
      const Trajectory traj = two_columns(read_numeric_table(fitvar_file));
      const YuleWalkerFit fit = yule_walker_var1(traj);
      const Matrix2 se = yule_walker_standard_errors(fit);
      const Trajectory resid = extract_residuals(fit.phi, traj);
      const auto m = [](const Matrix2& a) { return json::array({{a.a11, a.a12}, {a.a21, a.a22}}); };
      json j = {{"n", fit.n},
                {"phi_hat", m(fit.phi.matrix())},
                {"phi_se", m(se)},
                {"residual_cov", m(fit.residual_cov)},
                {"rho_z_hat", sample_correlation(resid.x1, resid.x2)},
                {"stability", to_string(stability(fit.phi))}};
      std::cout << j.dump(2) << "\n";
    } else if (*fitdist) {
      const NumericTable table = read_numeric_table(fitdist_file);
      const auto& z = pick_column(table, fitdist_column, 0);
      FitDistResult fit = fit_distribution(z, fitdist_family, fitdist_fix_mu);
      const TestResult ks = ks_test(z, fit.cdf);
      fit.summary["ks_statistic"] = ks.statistic;
      fit.summary["ks_p"] = ks.p_value;
      fit.summary["n"] = z.size();
      std::cout << fit.summary.dump(2) << "\n";
    } else if (*test) {
      const NumericTable table = read_numeric_table(test_file);
      json j;
      if (test_kind == "ks") {
        const auto& z = pick_column(table, test_column, 0);
        const FitDistResult fit = fit_distribution(z, test_family, test_fix_mu);
        j = test_json(ks_test(z, fit.cdf));
        j["fit"] = fit.summary;
        j["note"] = "asymptotic p-value, not corrected for estimated parameters";
      } else {
        const Trajectory traj = two_columns(table);
        j = test_json(test_kind == "corr-t" ? corr_t_test(traj.x1, traj.x2)
                                            : chi2_independence(traj.x1, traj.x2, test_bins));
      }
      std::cout << j.dump(2) << "\n";
    } else if (*cs) {
      MarketSeries prices = load_prices(cs_prices, cs_strict);
      MarketSeries errors = load_errors(cs_load, cs_strict);
      if (cs_weekly) {
        const WeeklySeries wp = weekly_means(prices);
        const WeeklySeries we = weekly_means(errors);
        warn_incomplete(wp, "prices");
        warn_incomplete(we, "load errors");
        prices = wp.series;
        errors = we.series;
      }
      const CaseStudyReport report = run_case_study(prices, errors, cs_config);
      for (const auto& path : emit_outputs(report, cs_out_dir, !cs_no_timestamp)) {
        std::cout << path.string() << "\n";
      }
      std::cerr << "case: " << to_string(report.case_tag) << ", residuals: " << report.residual_model
                << ", coverage: " << fmt(report.coverage_fraction) << "\n";
    }
  } catch (const varprod::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
