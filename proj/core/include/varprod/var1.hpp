#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "varprod/distributions.hpp"
#include "varprod/matrix2.hpp"
#include "varprod/random.hpp"

namespace varprod {

/// Coefficient matrix of X(t) = Phi X(t-1) + Z(t).
struct TransitionMatrix {
  double phi11 = 0.0;
  double phi12 = 0.0;
  double phi21 = 0.0;
  double phi22 = 0.0;

  static TransitionMatrix diagonal(double phi11, double phi22) { return {phi11, 0.0, 0.0, phi22}; }
  static TransitionMatrix from_matrix(const Matrix2& m) { return {m.a11, m.a12, m.a21, m.a22}; }
  Matrix2 matrix() const noexcept { return {phi11, phi12, phi21, phi22}; }
  /// (phi11 - phi22)^2 + 4 phi12 phi21; negative means complex eigenvalues.
  double discriminant() const noexcept;

  friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;
};

/// Bi-dimensional VAR(1) with i.i.d. residuals. `mean_shift` is added to the
/// first component only when forming the product series.
struct Var1Model {
  TransitionMatrix phi;
  ResidualSpec residual;
  double mean_shift = 0.0;
};

/// Time-indexed pair of component paths, x1[t] and x2[t] for t = 1..n.
struct Trajectory {
  std::vector<double> x1;
  std::vector<double> x2;

  std::size_t size() const noexcept { return x1.size(); }
};

/// Throws ValidationError unless both components have equal length and finite entries.
void validate(const Trajectory& traj);

struct Eigenvalues {
  double low = 0.0;   // nu1 <= nu2
  double high = 0.0;
};

/// Real eigenvalues in ascending order; ComplexEigenvalueError otherwise.
Eigenvalues eigenvalues(const TransitionMatrix& phi);

enum class StabilityStatus { Stable, UnitRootOrExplosive, ComplexEigenvalues };

StabilityStatus stability(const TransitionMatrix& phi) noexcept;
inline bool check_stability(const TransitionMatrix& phi) noexcept {
  return stability(phi) == StabilityStatus::Stable;
}
const char* to_string(StabilityStatus status) noexcept;

double spectral_radius(const TransitionMatrix& phi);

/// Phi^j from the eigenvalue closed forms (distinct or repeated eigenvalue).
Matrix2 phi_power(const TransitionMatrix& phi, int j);

/// Table of Phi^0 .. Phi^count-1.
std::vector<Matrix2> phi_powers(const TransitionMatrix& phi, int count);

/// Smallest J such that sum_{j >= J} ||Phi^j||_max^power * scale < tol, from the
/// bound ||Phi^j|| <= j rho^(j-1) (rho + ||Phi||) with rho the spectral radius.
int series_truncation(const TransitionMatrix& phi, int power, double scale, double tol);

/// Throws InstabilityError / ComplexEigenvalueError / ValidationError.
void validate(const Var1Model& model);

struct StationaryMoments {
  double sigma_x1_sq = 0.0;
  double sigma_x2_sq = 0.0;
  double gamma_x12 = 0.0;
  double rho_x = 0.0;
};

/// Stationary variances, covariance and correlation from the causal series.
StationaryMoments stationary_moments(const Var1Model& model);

/// E[X_i(t) X_i(t+h)] for component i in {0, 1}.
double acvf_component(const Var1Model& model, int component, int h);

/// E[X_1(t) X_2(t+h)].
double ccvf_components(const Var1Model& model, int h);

/// E[X_2(t) X_1(t+h)].
double ccvf_components_reversed(const Var1Model& model, int h);

inline constexpr std::size_t kDefaultBurnin = 1000;

/// Iterates X(t) = Phi X(t-1) + Z(t) from X(0) = (0, 0) for burnin + n steps
/// and returns the last n states.
Trajectory simulate(const Var1Model& model, std::size_t n, std::size_t burnin, RandomStream& rng);

using ResidualSource = std::function<std::pair<double, double>()>;

/// Same recursion with a caller-supplied start state and residual source.
Trajectory simulate(const TransitionMatrix& phi, std::size_t n, std::size_t burnin,
                    std::pair<double, double> initial, const ResidualSource& residuals);

}  // namespace varprod
