#pragma once

// Exponentially scaled modified Bessel functions of the second kind,
// e^z K_nu(z), for integer and half-integer order.

namespace layergreen::special {

/// Order nu = k/2 with k a non-negative integer.
class BesselOrder {
 public:
  /// Order k/2.  Throws DomainError for k < 0.
  static BesselOrder from_twice(int twice_nu);
  /// Throws DomainError unless 2*nu is a non-negative integer.
  static BesselOrder of(double nu);

  [[nodiscard]] int twice() const noexcept { return twice_; }
  [[nodiscard]] double value() const noexcept { return 0.5 * twice_; }
  [[nodiscard]] bool is_half_integer() const noexcept { return (twice_ & 1) != 0; }

  friend bool operator==(BesselOrder, BesselOrder) = default;

 private:
  explicit BesselOrder(int twice_nu) : twice_(twice_nu) {}
  int twice_;
};

/// e^z K_nu(z) for z > 0.  Relative accuracy 1e-12 on [1e-8, 1e8].
double bessel_k_scaled(BesselOrder nu, double z);

/// K_{nu+1}(z) / K_nu(z) for z > 0, formed from scaled values.
double bessel_k_ratio(BesselOrder nu, double z);

namespace detail {

/// Below this argument integer orders use the ascending series; at or above
/// it, the asymptotic expansion truncated at its smallest term.
inline constexpr double kAsymptoticSwitch = 16.0;
/// Below this argument the ascending series runs in double precision; above
/// it (and below kAsymptoticSwitch) in __float128, which absorbs the e^{2z}
/// cancellation between the logarithmic and power-series parts.
inline constexpr double kWideSeriesSwitch = 2.0;

/// e^z K_0(z) and e^z K_1(z) from the ascending series (any z > 0).
void k01_scaled_series(double z, double& k0, double& k1);
/// e^z K_0(z) and e^z K_1(z) from the large-argument asymptotic expansion.
void k01_scaled_asymptotic(double z, double& k0, double& k1);

}  // namespace detail

}  // namespace layergreen::special
