#include "varprod/random.hpp"

#include <cmath>

#include "varprod/error.hpp"

namespace varprod {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSubstreamSalt = 0x632be59bd9b4e019ULL;
constexpr double kTwoPow53Inv = 1.0 / 9007199254740992.0;
}  // namespace

std::uint64_t RandomStream::next_u64() noexcept {
  ++position_;
  return mix64(seed_ + position_ * kGoldenGamma);
}

double RandomStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double RandomStream::uniform_open() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * kTwoPow53Inv;
}

double RandomStream::standard_normal() noexcept {
  double u = 0.0;
  double v = 0.0;
  double s = 0.0;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  return u * std::sqrt(-2.0 * std::log(s) / s);
}

double RandomStream::gamma(double shape) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw DomainError("gamma sampler requires a finite positive shape");
  }
  if (shape < 1.0) {
    // Gamma(a) = Gamma(a + 1) * U^(1/a)
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::chi_square(double dof) {
  if (!(dof > 0.0) || !std::isfinite(dof)) {
    throw DomainError("chi-square sampler requires finite positive degrees of freedom");
  }
  if (dof == std::floor(dof) && dof <= 64.0) {
    const int k = static_cast<int>(dof);
    double sum = 0.0;
    for (int i = 0; i < k; ++i) {
      const double z = standard_normal();
      sum += z * z;
    }
    return sum;
  }
  return 2.0 * gamma(0.5 * dof);
}

RandomStream RandomStream::substream(std::uint64_t index) const noexcept {
  return RandomStream(mix64(seed_ ^ mix64(index + kSubstreamSalt)));
}

}  // namespace varprod
