#include "pslab/sawtooth.hpp"

#include <cmath>
#include <numbers>

#include "pslab/error.hpp"
#include "pslab/parallel.hpp"

namespace pslab {

double psi(double t) {
  const double frac = t - std::floor(t);
  return frac - 0.5;
}

std::complex<double> unit_phase(double t) {
  const double reduced = t - std::floor(t);
  const double angle = 2.0 * std::numbers::pi * reduced;
  return {std::cos(angle), std::sin(angle)};
}

VaalerKernel::VaalerKernel(std::uint64_t H) : H_(H) {
  if (H < 1 || H > kVaalerMaxH) throw GuardError("vaaler_kernel: H must lie in [1, 10^5]");
  phi_.reserve(H);
  const double scale = static_cast<double>(H + 1);
  for (std::uint64_t h = 1; h <= H; ++h) {
    const double u = static_cast<double>(h) / scale;
    const double pu = std::numbers::pi * u;
    phi_.push_back(pu * (1.0 - u) * std::cos(pu) / std::sin(pu) + u);
  }
}

std::complex<double> VaalerKernel::c(std::int64_t h) const {
  if (h == 0 || static_cast<std::uint64_t>(std::llabs(h)) > H_) {
    throw ValidationError("VaalerKernel::c: need 0 < |h| <= H");
  }
  const double phi = phi_[std::llabs(h) - 1];
  // -Phi / (2 pi i h) = i Phi / (2 pi h)
  return {0.0, phi / (2.0 * std::numbers::pi * static_cast<double>(h))};
}

double VaalerKernel::d(std::int64_t h) const {
  if (static_cast<std::uint64_t>(std::llabs(h)) > H_) {
    throw ValidationError("VaalerKernel::d: need |h| <= H");
  }
  const double scale = static_cast<double>(H_ + 1);
  return (1.0 - static_cast<double>(std::llabs(h)) / scale) / (2.0 * scale);
}

double VaalerKernel::approx(double t) const {
  // c_h e(th) + c_{-h} e(-th) = -Phi sin(2 pi h t) / (pi h)
  const double frac = t - std::floor(t);
  CompensatedSum<double> s;
  for (std::uint64_t h = 1; h <= H_; ++h) {
    const double hd = static_cast<double>(h);
    s.add(-phi_[h - 1] * std::sin(2.0 * std::numbers::pi * hd * frac) / (std::numbers::pi * hd));
  }
  return s.value();
}

double VaalerKernel::majorant(double t) const {
  const double frac = t - std::floor(t);
  CompensatedSum<double> s;
  s.add(d(0));
  for (std::uint64_t h = 1; h <= H_; ++h) {
    s.add(2.0 * d(static_cast<std::int64_t>(h)) *
          std::cos(2.0 * std::numbers::pi * static_cast<double>(h) * frac));
  }
  return s.value();
}

VaalerKernel vaaler_kernel(std::uint64_t H) { return VaalerKernel(H); }

double discrepancy_lhs(std::span<const double> points, double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw ValidationError("discrepancy_lhs: beta must lie in (0, 1)");
  if (points.empty()) throw ValidationError("discrepancy_lhs: points must be nonempty");
  std::uint64_t count = 0;
  for (double t : points) {
    if (t - std::floor(t) <= beta) ++count;
  }
  return static_cast<double>(count) - static_cast<double>(points.size()) * beta;
}

double erdos_turan_rhs(std::span<const double> points, std::uint64_t H) {
  if (points.empty()) throw ValidationError("erdos_turan_rhs: points must be nonempty");
  if (H < 1) throw ValidationError("erdos_turan_rhs: H must be >= 1");
  CompensatedSum<double> weighted;
  for (std::uint64_t h = 1; h <= H; ++h) {
    CompensatedComplexSum<double> s;
    for (double t : points) {
      const double ht = static_cast<double>(h) * (t - std::floor(t));
      s.add(unit_phase(ht));
    }
    weighted.add(std::abs(s.value()) / static_cast<double>(h));
  }
  return static_cast<double>(points.size()) / static_cast<double>(H + 1) + 3.0 * weighted.value();
}

}  // namespace pslab
