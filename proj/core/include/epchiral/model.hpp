#pragma once

#include <array>
#include <complex>
#include <optional>

#include "epchiral/averaging.hpp"

namespace epchiral {

using Complex = std::complex<double>;
using Vec2 = std::array<Complex, 2>;

enum class Handedness { Right, Left };

inline double handedness_sign(Handedness h) {
  return h == Handedness::Right ? 1.0 : -1.0;
}

// Knobs of the reduced two-level model: level widths gamma1/gamma2, detuning
// delta of the upper level, one-photon coupling omega12 (stored for the Right
// enantiomer; Left enters with the opposite sign), and the complex two-photon
// coupling raman.  Atomic units throughout.
struct EffectiveParams {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double delta = 0.0;
  double omega12 = 0.0;
  Complex raman{0.0, 0.0};
  Handedness handedness = Handedness::Right;

  double mean_decay() const { return 0.5 * (gamma1 + gamma2); }
  double half_difference() const { return 0.5 * (gamma1 - gamma2); }

  // Cyclic three-photon element reconstructed from the stored couplings;
  // flips sign with handedness along with omega12.
  Complex omega123() const;

  double scale() const;  // gamma1 + gamma2 + |delta| + |omega12|

  // Throws std::invalid_argument on negative widths, non-finite entries, or
  // |raman|^2 exceeding gamma1*gamma2 beyond round-off.
  void validate() const;
};

// raman defaults to the maximally interfering real value sqrt(gamma1*gamma2).
EffectiveParams make_params(double gamma1, double gamma2, double delta,
                            double omega12, Handedness h = Handedness::Right,
                            std::optional<Complex> raman = std::nullopt);

struct ComplexMatrix2 {
  Complex h11, h12, h21, h22;

  Complex trace() const { return h11 + h22; }
  Complex det() const { return h11 * h22 - h12 * h21; }
};

ComplexMatrix2 build_hamiltonian(const EffectiveParams& p);

// (h11 - h22)^2 + 4 h12 h21.  The squared eigenvalue splitting.
Complex discriminant(const ComplexMatrix2& m);
Complex discriminant(const EffectiveParams& p);

// Transpose contraction u1*v1 + u2*v2, no complex conjugation.
Complex c_product(const Vec2& u, const Vec2& v);

struct AdiabaticFrame {
  Complex gamma_plus, gamma_minus;
  Vec2 phi_plus, phi_minus;
  Complex theta;  // complex mixing angle; phi's derive from it when H = H^T
  bool at_ep = false;
};

// gamma_pm = tr/2 +- sqrt(discriminant)/2.  The square root takes the
// principal branch unless sqrt_reference is given, in which case the root
// closer to the reference wins (path-following callers feed the previous
// root through here).  Complex-symmetric matrices get the parallel-transport
// eigenvector form (c-orthonormal by construction); general matrices get
// biorthogonally scaled right eigenvectors.
AdiabaticFrame eigensystem(const ComplexMatrix2& m,
                           std::optional<Complex> sqrt_reference = std::nullopt);
AdiabaticFrame eigensystem(const EffectiveParams& p,
                           std::optional<Complex> sqrt_reference = std::nullopt);

EffectiveParams effective_from_microscopic(const MicroscopicParams& micro);

}  // namespace epchiral
