#include "layergreen/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <quadmath.h>

#include "layergreen/error.hpp"

namespace layergreen::special {

BesselOrder BesselOrder::from_twice(int twice_nu) {
  if (twice_nu < 0) {
    throw DomainError("Bessel order must be non-negative, got 2*nu = " + std::to_string(twice_nu));
  }
  return BesselOrder(twice_nu);
}

BesselOrder BesselOrder::of(double nu) {
  const double twice = 2.0 * nu;
  if (!std::isfinite(nu) || nu < 0.0 || twice != std::round(twice) || twice > 1e6) {
    throw DomainError("Bessel order must be a non-negative multiple of 1/2, got " + std::to_string(nu));
  }
  return BesselOrder(static_cast<int>(twice));
}

namespace {

struct DoubleMath {
  static double log(double v) { return std::log(v); }
  static double exp(double v) { return std::exp(v); }
  static constexpr double kEulerGamma = std::numbers::egamma;
  static constexpr double kTiny = 1e-18;
};

struct QuadMath {
  static __float128 log(__float128 v) { return logq(v); }
  static __float128 exp(__float128 v) { return expq(v); }
  static constexpr __float128 kEulerGamma = 0.5772156649015328606065120900824024Q;
  static constexpr __float128 kTiny = 1e-36Q;
};

// K_0 = -(ln(z/2) + gamma) I_0 + sum_k H_k q^k / (k!)^2
// K_1 = 1/z + (ln(z/2) + gamma) I_1 - (z/4) sum_k (H_k + H_{k+1}) q^k / (k!(k+1)!)
// with q = z^2/4 and harmonic numbers H_k.
template <class T, class M>
void ascending_series(T z, T& k0, T& k1) {
  const T q = z * z / 4;
  const T log_term = M::log(z / 2) + M::kEulerGamma;

  T t = 1;  // q^k / (k!)^2
  T u = 1;  // q^k / (k!(k+1)!)
  T harmonic = 0;
  T i0 = 1;
  T s0 = 0;
  T i1 = 1;
  T s1 = 1;  // H_0 + H_1
  for (int k = 1; k < 400; ++k) {
    const T kk = k;
    t *= q / (kk * kk);
    u *= q / (kk * (kk + 1));
    harmonic += 1 / kk;
    const T harmonic_next = harmonic + 1 / (kk + 1);
    i0 += t;
    s0 += harmonic * t;
    i1 += u;
    s1 += (harmonic + harmonic_next) * u;
    if (t * harmonic < M::kTiny * s0 && u * harmonic_next < M::kTiny * s1 && t < M::kTiny * i0) {
      break;
    }
  }
  const T scale = M::exp(z);
  k0 = scale * (s0 - log_term * i0);
  k1 = scale * (1 / z + log_term * (z / 2) * i1 - (z / 4) * s1);
}

// e^z K_nu(z) ~ sqrt(pi/(2z)) sum_k a_k(nu) z^-k, truncated at the smallest term.
double asymptotic_scaled(double mu, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (8.0 * k * z);
    if (std::abs(next) >= std::abs(term)) {
      break;
    }
    sum += next;
    term = next;
    if (std::abs(term) < 1e-18 * std::abs(sum)) {
      break;
    }
  }
  return std::sqrt(std::numbers::pi / (2.0 * z)) * sum;
}

void check_argument(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw DomainError("Bessel K argument must be positive and finite, got " + std::to_string(z));
  }
}

void k01_scaled(double z, double& k0, double& k1) {
  if (z >= detail::kAsymptoticSwitch) {
    detail::k01_scaled_asymptotic(z, k0, k1);
  } else {
    detail::k01_scaled_series(z, k0, k1);
  }
}

// Scaled K_{n+1/2} as sqrt(pi/(2z)) * poly(1/(2z)).
double half_integer_poly(int n, double z) {
  double coeff = 1.0;
  double sum = 1.0;
  const double inv = 1.0 / (2.0 * z);
  double power = 1.0;
  for (int k = 1; k <= n; ++k) {
    coeff *= static_cast<double>(n + k) * static_cast<double>(n - k + 1) / k;
    power *= inv;
    sum += coeff * power;
  }
  return sum;
}

// Scaled K_n and K_{n+1} for integer n via upward recurrence.
void integer_pair(int n, double z, double& kn, double& kn1) {
  double prev = 0.0;
  double cur = 0.0;
  k01_scaled(z, prev, cur);
  for (int m = 1; m <= n; ++m) {
    const double next = prev + (2.0 * m / z) * cur;
    prev = cur;
    cur = next;
  }
  kn = prev;
  kn1 = cur;
}

}  // namespace

namespace detail {

void k01_scaled_series(double z, double& k0, double& k1) {
  check_argument(z);
  if (z <= kWideSeriesSwitch) {
    ascending_series<double, DoubleMath>(z, k0, k1);
    return;
  }
  __float128 wk0 = 0;
  __float128 wk1 = 0;
  ascending_series<__float128, QuadMath>(static_cast<__float128>(z), wk0, wk1);
  k0 = static_cast<double>(wk0);
  k1 = static_cast<double>(wk1);
}

void k01_scaled_asymptotic(double z, double& k0, double& k1) {
  check_argument(z);
  k0 = asymptotic_scaled(0.0, z);
  k1 = asymptotic_scaled(4.0, z);
}

}  // namespace detail

double bessel_k_scaled(BesselOrder nu, double z) {
  check_argument(z);
  if (nu.is_half_integer()) {
    const int n = nu.twice() / 2;
    return std::sqrt(std::numbers::pi / (2.0 * z)) * half_integer_poly(n, z);
  }
  double kn = 0.0;
  double kn1 = 0.0;
  integer_pair(nu.twice() / 2, z, kn, kn1);
  return kn;
}

double bessel_k_ratio(BesselOrder nu, double z) {
  check_argument(z);
  if (nu.is_half_integer()) {
    const int n = nu.twice() / 2;
    return half_integer_poly(n + 1, z) / half_integer_poly(n, z);
  }
  double kn = 0.0;
  double kn1 = 0.0;
  integer_pair(nu.twice() / 2, z, kn, kn1);
  return kn1 / kn;
}

}  // namespace layergreen::special
