#include "varprod/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "varprod/distributions.hpp"
#include "varprod/estimators.hpp"
#include "varprod/numerics.hpp"

namespace varprod {

namespace {

constexpr double kEtaFloor = 0.05;
constexpr int kSimplexIterationCap = 2000;
constexpr double kSimplexRelTol = 1e-10;
// 75% quantile of Student's t with 6 dof, for the starting scale.
constexpr double kT6UpperQuartile = 0.717558;

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Nelder-Mead with standard coefficients (1, 2, 0.5, 0.5).
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          std::vector<double> start, const std::vector<double>& steps,
                          int max_iterations, double rel_tol) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> simplex(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += steps[i];
  std::vector<double> values(dim + 1);
  for (std::size_t i = 0; i <= dim; ++i) values[i] = f(simplex[i]);

  std::vector<std::size_t> order(dim + 1);
  SimplexResult result;
  for (int iter = 0; iter < max_iterations; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    const double spread = std::fabs(values[worst] - values[best]);
    if (spread <= rel_tol * (std::fabs(values[best]) + 1e-300)) {
      result.x = simplex[best];
      result.value = values[best];
      result.iterations = iter;
      result.converged = true;
      return result;
    }

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d] / static_cast<double>(dim);
    }
    auto along = [&](double coef) {
      std::vector<double> p(dim);
      for (std::size_t d = 0; d < dim; ++d) p[d] = centroid[d] + coef * (simplex[worst][d] - centroid[d]);
      return p;
    };

    const auto reflected = along(-1.0);
    const double fr = f(reflected);
    if (fr < values[best]) {
      const auto expanded = along(-2.0);
      const double fe = f(expanded);
      if (fe < fr) {
        simplex[worst] = expanded;
        values[worst] = fe;
      } else {
        simplex[worst] = reflected;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const auto contracted = along(outside ? -0.5 : 0.5);
    const double fc = f(contracted);
    if (fc < (outside ? fr : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < dim; ++d) {
        simplex[i][d] = simplex[best][d] + 0.5 * (simplex[i][d] - simplex[best][d]);
      }
      values[i] = f(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(
      std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  result.iterations = max_iterations;
  result.converged = false;
  return result;
}

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + mid));
  }
  return m;
}

double clamp_eta(double log_eta) { return std::clamp(std::exp(log_eta), kEtaFloor, kStudentTEtaCap); }

// Cell index 0..bins-1 of each observation by rank (ties broken by position).
std::vector<int> quantile_cells(std::span<const double> x, int bins) {
  std::vector<std::size_t> idx(x.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  std::vector<int> cell(x.size());
  for (std::size_t rank = 0; rank < idx.size(); ++rank) {
    cell[idx[rank]] = static_cast<int>(rank * static_cast<std::size_t>(bins) / idx.size());
  }
  return cell;
}

}  // namespace

YuleWalkerFit yule_walker_var1(const Trajectory& traj) {
  validate(traj);
  if (traj.size() < 3) throw LengthError("Yule-Walker needs at least 3 observations");
  const auto c11 = empirical_ccvf(traj.x1, traj.x1, 1).values;
  const auto c22 = empirical_ccvf(traj.x2, traj.x2, 1).values;
  const auto c12 = empirical_ccvf(traj.x1, traj.x2, 1).values;  // E[x1(t) x2(t+h)]
  const auto c21 = empirical_ccvf(traj.x2, traj.x1, 1).values;  // E[x2(t) x1(t+h)]

  YuleWalkerFit fit;
  fit.n = traj.size();
  fit.gamma0 = {c11[0], c12[0], c12[0], c22[0]};
  // Gamma(1)[a][b] = E[x_a(t+1) x_b(t)]
  fit.gamma1 = {c11[1], c21[1], c12[1], c22[1]};
  const double det = fit.gamma0.determinant();
  if (!(std::fabs(det) > 1e-14 * (c11[0] * c22[0]))) {
    throw SingularMomentError("sample lag-0 covariance matrix is singular");
  }
  const Matrix2 phi = fit.gamma1 * fit.gamma0.inverse();
  fit.phi = TransitionMatrix::from_matrix(phi);
  Matrix2 resid = fit.gamma0 - phi * fit.gamma1.transposed();
  const double off = 0.5 * (resid.a12 + resid.a21);
  resid.a12 = off;
  resid.a21 = off;
  fit.residual_cov = resid;
  return fit;
}

Matrix2 yule_walker_standard_errors(const YuleWalkerFit& fit) {
  const Matrix2 inv = fit.gamma0.inverse();
  const double n = static_cast<double>(fit.n);
  Matrix2 se;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      se.at(a, b) = std::sqrt(std::max(0.0, fit.residual_cov.at(a, a) * inv.at(b, b) / n));
  return se;
}

Trajectory extract_residuals(const TransitionMatrix& phi, const Trajectory& traj) {
  validate(traj);
  if (traj.size() < 2) throw LengthError("residual extraction needs at least 2 observations");
  Trajectory out;
  out.x1.reserve(traj.size() - 1);
  out.x2.reserve(traj.size() - 1);
  for (std::size_t t = 1; t < traj.size(); ++t) {
    out.x1.push_back(traj.x1[t] - phi.phi11 * traj.x1[t - 1] - phi.phi12 * traj.x2[t - 1]);
    out.x2.push_back(traj.x2[t] - phi.phi21 * traj.x1[t - 1] - phi.phi22 * traj.x2[t - 1]);
  }
  return out;
}

double yule_walker_ar1(std::span<const double> series) {
  if (series.size() < 3) throw LengthError("AR(1) fit needs at least 3 observations");
  const auto c = empirical_acvf(series, 1).values;
  if (c[0] == 0.0) throw SingularMomentError("constant series has no autocorrelation");
  return c[1] / c[0];
}

GaussianFit fit_gaussian_zero_mean(std::span<const double> series) {
  if (series.size() < 2) throw LengthError("Gaussian fit needs at least 2 observations");
  double ss = 0.0;
  for (double z : series) ss += z * z;
  const double n = static_cast<double>(series.size());
  const double var = ss / n;
  if (!(var > 0.0)) throw NumericError("degenerate input: all values are zero");
  GaussianFit fit;
  fit.sigma = std::sqrt(var);
  fit.loglik = -0.5 * n * (std::log(2.0 * std::numbers::pi * var) + 1.0);
  return fit;
}

double t_locscale_loglik(std::span<const double> series, double mu, double lambda, double eta) {
  const double n = static_cast<double>(series.size());
  double tail = 0.0;
  for (double z : series) {
    const double u = (z - mu) / lambda;
    tail += std::log1p(u * u / eta);
  }
  return n * (numerics::log_gamma(0.5 * (eta + 1.0)) - numerics::log_gamma(0.5 * eta) -
              0.5 * std::log(eta * std::numbers::pi) - std::log(lambda)) -
         0.5 * (eta + 1.0) * tail;
}

StudentTFit fit_t_locscale(std::span<const double> series, bool fix_mu_at_zero) {
  if (series.size() < 10) throw LengthError("Student's t fit needs at least 10 observations");
  for (double z : series) {
    if (!std::isfinite(z)) throw ValidationError("Student's t fit: non-finite observation");
  }
  std::vector<double> data(series.begin(), series.end());
  const double mu0 = fix_mu_at_zero ? 0.0 : median_of(data);
  std::vector<double> dev(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) dev[i] = std::fabs(data[i] - mu0);
  const double mad = median_of(dev);
  if (!(mad > 0.0)) throw NumericError("degenerate input: zero median absolute deviation");
  const double lambda0 = mad / kT6UpperQuartile;
  const double eta0 = 6.0;

  auto unpack = [&](const std::vector<double>& x) {
    StudentTFit p;
    p.mu_fixed = fix_mu_at_zero;
    std::size_t i = 0;
    p.mu = fix_mu_at_zero ? 0.0 : x[i++];
    p.lambda = std::exp(x[i++]);
    p.eta = clamp_eta(x[i]);
    return p;
  };
  auto objective = [&](const std::vector<double>& x) {
    const StudentTFit p = unpack(x);
    const double ll = t_locscale_loglik(data, p.mu, p.lambda, p.eta);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
  };

  std::vector<double> start;
  std::vector<double> steps;
  if (!fix_mu_at_zero) {
    start.push_back(mu0);
    steps.push_back(0.1 * lambda0);
  }
  start.push_back(std::log(lambda0));
  steps.push_back(0.1);
  start.push_back(std::log(eta0));
  steps.push_back(0.3);

  SimplexResult result = nelder_mead(objective, start, steps, kSimplexIterationCap, kSimplexRelTol);
  int total_iterations = result.iterations;
  if (result.converged) {
    // Restart from the optimum with fresh steps; guards against a collapsed simplex.
    const double before = result.value;
    result = nelder_mead(objective, result.x, steps, kSimplexIterationCap, kSimplexRelTol);
    total_iterations += result.iterations;
    result.converged = result.converged && result.value <= before;
  }

  StudentTFit fit = unpack(result.x);
  fit.loglik = -result.value;
  fit.iterations = total_iterations;
  fit.effectively_gaussian = fit.eta >= kStudentTEtaCap * (1.0 - 1e-9);
  if (!result.converged) {
    throw StudentTFitError("Student's t fit did not converge within the iteration cap", fit);
  }
  return fit;
}

const char* to_string(TestName name) noexcept {
  switch (name) {
    case TestName::CorrTTest:
      return "corr-t";
    case TestName::Chi2Independence:
      return "chi2";
    case TestName::KSGoodness:
      return "ks";
  }
  return "unknown";
}

TestName test_name_from_string(const std::string& name) {
  if (name == "corr-t") return TestName::CorrTTest;
  if (name == "chi2") return TestName::Chi2Independence;
  if (name == "ks") return TestName::KSGoodness;
  throw ValidationError("unknown test name '" + name + "'");
}

TestResult corr_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw LengthError("series lengths differ");
  if (a.size() < 3) throw LengthError("correlation t test needs n >= 3");
  const double r = sample_correlation(a, b);
  const double dof = static_cast<double>(a.size()) - 2.0;
  TestResult out;
  out.name = TestName::CorrTTest;
  out.n = a.size();
  out.dof = dof;
  if (std::fabs(r) >= 1.0) {
    out.statistic = std::copysign(std::numeric_limits<double>::max(), r);
    out.p_value = 0.0;
    return out;
  }
  const double t = r * std::sqrt(dof) / std::sqrt(1.0 - r * r);
  out.statistic = t;
  // Two-sided tail: P(|T| > |t|) = I_{dof/(dof+t^2)}(dof/2, 1/2).
  out.p_value = t == 0.0 ? 1.0
                         : numerics::regularized_incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
  return out;
}

TestResult chi2_independence(std::span<const double> a, std::span<const double> b, int bins) {
  if (a.size() != b.size()) throw LengthError("series lengths differ");
  if (bins < 2) throw ValidationError("chi-square independence needs at least 2 bins");
  const std::size_t n = a.size();
  if (n < static_cast<std::size_t>(5 * bins * bins)) {
    throw LengthError("chi-square independence needs n >= 5 * bins^2 (" +
                      std::to_string(5 * bins * bins) + "), got " + std::to_string(n));
  }
  const auto ca = quantile_cells(a, bins);
  const auto cb = quantile_cells(b, bins);
  std::vector<double> table(static_cast<std::size_t>(bins * bins), 0.0);
  std::vector<double> rows(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> cols(static_cast<std::size_t>(bins), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    table[static_cast<std::size_t>(ca[t] * bins + cb[t])] += 1.0;
    rows[static_cast<std::size_t>(ca[t])] += 1.0;
    cols[static_cast<std::size_t>(cb[t])] += 1.0;
  }
  double stat = 0.0;
  for (int i = 0; i < bins; ++i)
    for (int j = 0; j < bins; ++j) {
      const double expected = rows[i] * cols[j] / static_cast<double>(n);
      const double diff = table[static_cast<std::size_t>(i * bins + j)] - expected;
      stat += diff * diff / expected;
    }
  TestResult out;
  out.name = TestName::Chi2Independence;
  out.statistic = stat;
  out.dof = static_cast<double>((bins - 1) * (bins - 1));
  out.n = n;
  out.p_value = numerics::regularized_gamma_q(0.5 * out.dof, 0.5 * stat);
  return out;
}

TestResult ks_test(std::span<const double> series, const std::function<double(double)>& cdf) {
  if (series.size() < 10) throw LengthError("KS test needs at least 10 observations");
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  TestResult out;
  out.name = TestName::KSGoodness;
  out.statistic = d;
  out.n = sorted.size();
  out.p_value = std::clamp(1.0 - numerics::kolmogorov_cdf(std::sqrt(n) * d), 0.0, 1.0);
  return out;
}

}  // namespace varprod
