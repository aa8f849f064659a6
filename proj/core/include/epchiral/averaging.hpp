#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace epchiral {

using Vec3c = std::array<std::complex<double>, 3>;

// Molecular-frame dipoles (two bound-free, one bound-bound) and the three
// field amplitudes (polarization and phase included), plus the colors and
// bound-state energies.  Everything in atomic units.
struct MicroscopicParams {
  Vec3c d1E{}, d2E{}, d12{};
  Vec3c F1{}, F2{}, F3{};
  double omega1 = 0.0, omega2 = 0.0, omega3 = 0.0;
  double E1 = 0.0, E2 = 0.0;

  // Throws std::invalid_argument when the colors don't close the loop
  // (|omega1 - omega2 - omega3| > 1e-12 * omega1) or are non-positive.
  void validate() const;
};

std::complex<double> dot(const Vec3c& a, const Vec3c& b);  // bilinear, no conj
Vec3c cross(const Vec3c& a, const Vec3c& b);

// (a or conj(a)) . (b x c) per the flag.
std::complex<double> triple_product(const Vec3c& a, const Vec3c& b,
                                    const Vec3c& c, bool conjugate_first);

struct PseudoscalarDecomposition {
  std::complex<double> chi_m;  // conj(d1E) . (d2E x d12)
  std::complex<double> h3;     // conj(F1) . (F2 x F3)
  double phi_m = 0.0;          // arg(chi_m)
  double phi_l = 0.0;          // arg(h3)
  double averaged_value = 0.0;
};

PseudoscalarDecomposition decompose(const MicroscopicParams& micro);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// Haar-uniform rotations (unit quaternions), dipoles rotated jointly against
// fixed fields, sample value Re[(d1.F1)* (d2.F2) (d12.F3)].  Deterministic
// for a fixed (seed, samples, shards) triple; shards carry counter-derived
// seeds so they may run concurrently.
McEstimate mc_orientation_average(const MicroscopicParams& micro,
                                  std::int64_t samples, std::uint64_t seed,
                                  int shards = 1);

}  // namespace epchiral
