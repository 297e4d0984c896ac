#pragma once

// The sawtooth psi(t) = {t} - 1/2, Vaaler's trigonometric approximation of
// it, and an explicit-constant Erdos-Turan discrepancy bound.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace pslab {

inline constexpr std::uint64_t kVaalerMaxH = 100'000;

double psi(double t);

/// e(t) = exp(2 pi i t).
std::complex<double> unit_phase(double t);

/// Coefficients with
///   |psi(t) - sum_{0<|h|<=H} c_h e(th)| <= sum_{|h|<=H} d_h e(th)  for all t.
///
/// c_h = -Phi(h/(H+1)) / (2 pi i h) with Phi(u) = pi u (1-u) cot(pi u) + u,
/// d_h = (1 - |h|/(H+1)) / (2H+2): the majorant is a Fejer kernel.
class VaalerKernel {
 public:
  explicit VaalerKernel(std::uint64_t H);

  std::uint64_t H() const { return H_; }
  /// c_h for 0 < |h| <= H.
  std::complex<double> c(std::int64_t h) const;
  /// d_h for |h| <= H.
  double d(std::int64_t h) const;

  /// The trigonometric polynomial sum c_h e(th) (real-valued).
  double approx(double t) const;
  /// The majorant sum d_h e(th) (real and nonnegative).
  double majorant(double t) const;

 private:
  std::uint64_t H_;
  std::vector<double> phi_;  // phi_[h-1] = Phi(h/(H+1)), h = 1..H
};

VaalerKernel vaaler_kernel(std::uint64_t H);

/// #{k : {t_k} <= beta} - K beta.
double discrepancy_lhs(std::span<const double> points, double beta);

/// K/(H+1) + 3 sum_{h<=H} (1/h) |sum_k e(h t_k)|.
double erdos_turan_rhs(std::span<const double> points, std::uint64_t H);

}  // namespace pslab
