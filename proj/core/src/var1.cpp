#include "varprod/var1.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "varprod/error.hpp"

namespace varprod {

namespace {

constexpr double kRepeatedGap = 1e-9;
// Below this eigenvalue gap the divided difference (nu2^j - nu1^j) / (nu2 - nu1)
// is summed term by term instead of formed directly, to avoid cancellation.
constexpr double kSummedGap = 5e-2;
constexpr int kMaxSeriesTerms = 5'000'000;
constexpr double kSeriesTol = 1e-12;

// Complete homogeneous symmetric polynomial h_{j-1}(a, b) = sum_k a^k b^(j-1-k),
// which equals (b^j - a^j) / (b - a) for a != b.
double divided_power_sum(double a, double b, int j) {
  if (j <= 0) return 0.0;
  double sum = 1.0;
  double apow = 1.0;
  for (int m = 1; m < j; ++m) {
    apow *= a;
    sum = b * sum + apow;
  }
  return sum;
}

// Coefficients (c0, c1) with Phi^j = c0 I + c1 Phi.
std::pair<double, double> power_coefficients(const Eigenvalues& ev, int j) {
  const double nu1 = ev.low;
  const double nu2 = ev.high;
  const double gap = nu2 - nu1;
  if (gap < kRepeatedGap) {
    const double nu = 0.5 * (nu1 + nu2);
    return {-(j - 1) * std::pow(nu, j), j * std::pow(nu, j - 1)};
  }
  if (gap < kSummedGap) {
    return {-nu1 * nu2 * divided_power_sum(nu1, nu2, j - 1), divided_power_sum(nu1, nu2, j)};
  }
  const double p1 = std::pow(nu1, j);
  const double p2 = std::pow(nu2, j);
  return {(nu2 * p1 - nu1 * p2) / gap, (p2 - p1) / gap};
}

void require_stable(const TransitionMatrix& phi) {
  switch (stability(phi)) {
    case StabilityStatus::Stable:
      return;
    case StabilityStatus::ComplexEigenvalues:
      throw ComplexEigenvalueError("transition matrix has complex eigenvalues");
    case StabilityStatus::UnitRootOrExplosive:
      throw InstabilityError("transition matrix has an eigenvalue with |nu| >= 1");
  }
}

// sum_j (Phi^j)_{a,.} Gamma (Phi^{j+h})_{b,.}^T
double lagged_series(const Var1Model& model, int row_a, int row_b, int h) {
  if (h < 0) throw DomainError("lag must be non-negative");
  validate(model);
  const Matrix2 gamma = residual_covariance(model.residual);
  const double scale = 4.0 * (1.0 + h) * (1.0 + h) * std::max(gamma.max_abs(), 1e-300);
  const int terms = series_truncation(model.phi, 2, scale, kSeriesTol);
  const auto powers = phi_powers(model.phi, terms + h);
  double sum = 0.0;
  for (int j = 0; j < terms; ++j) {
    const Matrix2& p = powers[j];
    const Matrix2& q = powers[j + h];
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) sum += p.at(row_a, k) * q.at(row_b, l) * gamma.at(k, l);
  }
  return sum;
}

}  // namespace

double TransitionMatrix::discriminant() const noexcept {
  const double d = phi11 - phi22;
  return std::fma(4.0 * phi12, phi21, d * d);
}

void validate(const Trajectory& traj) {
  if (traj.x1.size() != traj.x2.size()) {
    throw LengthError("trajectory components differ in length");
  }
  for (std::size_t t = 0; t < traj.x1.size(); ++t) {
    if (!std::isfinite(traj.x1[t]) || !std::isfinite(traj.x2[t])) {
      throw ValidationError("trajectory has a non-finite entry at index " + std::to_string(t));
    }
  }
}

Eigenvalues eigenvalues(const TransitionMatrix& phi) {
  double disc = phi.discriminant();
  if (disc < 0.0) {
    const double d = phi.phi11 - phi.phi22;
    const double magnitude = d * d + 4.0 * std::fabs(phi.phi12 * phi.phi21);
    if (disc < -64.0 * std::numeric_limits<double>::epsilon() * magnitude) {
      throw ComplexEigenvalueError("transition matrix has complex eigenvalues (discriminant " +
                                   std::to_string(disc) + ")");
    }
    disc = 0.0;
  }
  const double mid = 0.5 * (phi.phi11 + phi.phi22);
  const double half = 0.5 * std::sqrt(disc);
  return {mid - half, mid + half};
}

StabilityStatus stability(const TransitionMatrix& phi) noexcept {
  try {
    const Eigenvalues ev = eigenvalues(phi);
    if (std::fabs(ev.low) < 1.0 && std::fabs(ev.high) < 1.0) return StabilityStatus::Stable;
    return StabilityStatus::UnitRootOrExplosive;
  } catch (const ComplexEigenvalueError&) {
    return StabilityStatus::ComplexEigenvalues;
  }
}

const char* to_string(StabilityStatus status) noexcept {
  switch (status) {
    case StabilityStatus::Stable:
      return "stable";
    case StabilityStatus::UnitRootOrExplosive:
      return "unit-root-or-explosive";
    case StabilityStatus::ComplexEigenvalues:
      return "complex-eigenvalues";
  }
  return "unknown";
}

double spectral_radius(const TransitionMatrix& phi) {
  const Eigenvalues ev = eigenvalues(phi);
  return std::max(std::fabs(ev.low), std::fabs(ev.high));
}

Matrix2 phi_power(const TransitionMatrix& phi, int j) {
  if (j < 0) throw DomainError("phi_power requires j >= 0");
  if (j == 0) return Matrix2::identity();
  const auto [c0, c1] = power_coefficients(eigenvalues(phi), j);
  return c0 * Matrix2::identity() + c1 * phi.matrix();
}

std::vector<Matrix2> phi_powers(const TransitionMatrix& phi, int count) {
  std::vector<Matrix2> out;
  if (count <= 0) return out;
  const Eigenvalues ev = eigenvalues(phi);
  out.reserve(static_cast<std::size_t>(count));
  out.push_back(Matrix2::identity());
  for (int j = 1; j < count; ++j) {
    const auto [c0, c1] = power_coefficients(ev, j);
    out.push_back(c0 * Matrix2::identity() + c1 * phi.matrix());
  }
  return out;
}

int series_truncation(const TransitionMatrix& phi, int power, double scale, double tol) {
  if (!(tol > 0.0)) throw DomainError("series tolerance must be positive");
  require_stable(phi);
  const double rho = spectral_radius(phi);
  // Nilpotent or zero matrix: Phi^2 = 0 by Cayley-Hamilton.
  if (rho == 0.0) return 2;
  const double k = rho + phi.matrix().max_abs();
  auto term = [&](int j) {
    return scale * std::pow(j * std::pow(rho, j - 1) * k, power);
  };
  for (int j = 1; j < kMaxSeriesTerms; ++j) {
    const double ratio = std::pow((j + 1.0) / j * rho, power);
    if (ratio < 1.0 && term(j) / (1.0 - ratio) < tol) return j;
  }
  throw NumericError("series truncation exceeds " + std::to_string(kMaxSeriesTerms) +
                     " terms; spectral radius too close to 1");
}

void validate(const Var1Model& model) {
  validate(model.residual);
  if (model.residual.mu1 != 0.0 || model.residual.mu2 != 0.0) {
    throw ValidationError("VAR(1) residuals must be zero-mean (mu1 = mu2 = 0)");
  }
  if (!std::isfinite(model.mean_shift)) throw ValidationError("mean shift must be finite");
  require_stable(model.phi);
}

StationaryMoments stationary_moments(const Var1Model& model) {
  StationaryMoments out;
  out.sigma_x1_sq = lagged_series(model, 0, 0, 0);
  out.sigma_x2_sq = lagged_series(model, 1, 1, 0);
  out.gamma_x12 = lagged_series(model, 0, 1, 0);
  out.rho_x = out.gamma_x12 / std::sqrt(out.sigma_x1_sq * out.sigma_x2_sq);
  return out;
}

double acvf_component(const Var1Model& model, int component, int h) {
  if (component != 0 && component != 1) throw DomainError("component index must be 0 or 1");
  return lagged_series(model, component, component, h);
}

double ccvf_components(const Var1Model& model, int h) { return lagged_series(model, 0, 1, h); }

double ccvf_components_reversed(const Var1Model& model, int h) {
  return lagged_series(model, 1, 0, h);
}

Trajectory simulate(const Var1Model& model, std::size_t n, std::size_t burnin, RandomStream& rng) {
  validate(model);
  if (n == 0) throw DomainError("simulate requires n > 0");
  const ResidualSpec spec = model.residual;
  return simulate(model.phi, n, burnin, {0.0, 0.0}, [&spec, &rng] { return sample_pair(spec, rng); });
}

Trajectory simulate(const TransitionMatrix& phi, std::size_t n, std::size_t burnin,
                    std::pair<double, double> initial, const ResidualSource& residuals) {
  require_stable(phi);
  if (n == 0) throw DomainError("simulate requires n > 0");
  Trajectory out;
  out.x1.reserve(n);
  out.x2.reserve(n);
  double x1 = initial.first;
  double x2 = initial.second;
  for (std::size_t t = 0; t < burnin + n; ++t) {
    const auto [z1, z2] = residuals();
    const double next1 = phi.phi11 * x1 + phi.phi12 * x2 + z1;
    const double next2 = phi.phi21 * x1 + phi.phi22 * x2 + z2;
    x1 = next1;
    x2 = next2;
    if (t >= burnin) {
      out.x1.push_back(x1);
      out.x2.push_back(x2);
    }
  }
  return out;
}

}  // namespace varprod
