#include "epchiral/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace epchiral {

namespace {

constexpr Complex kI{0.0, 1.0};

bool finite2(const Complex& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

Vec2 apply(const ComplexMatrix2& m, const Vec2& v) {
  return {m.h11 * v[0] + m.h12 * v[1], m.h21 * v[0] + m.h22 * v[1]};
}

double entry_scale(const ComplexMatrix2& m) {
  return std::abs(m.h11) + std::abs(m.h12) + std::abs(m.h21) + std::abs(m.h22);
}

// Right eigenvector for eigenvalue g from the larger cofactor form,
// Hermitian-normalized (self-orthogonal vectors have no c-norm to use).
Vec2 eigvec_raw(const ComplexMatrix2& m, Complex g) {
  const Vec2 v1{m.h12, g - m.h11};
  const Vec2 v2{g - m.h22, m.h21};
  const double n1 = std::abs(v1[0]) + std::abs(v1[1]);
  const double n2 = std::abs(v2[0]) + std::abs(v2[1]);
  Vec2 v = n1 >= n2 ? v1 : v2;
  const double hn = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  if (hn == 0.0) return {1.0, 0.0};  // zero matrix
  return {v[0] / hn, v[1] / hn};
}

std::pair<Vec2, Vec2> vectors_from_theta(Complex theta) {
  const Complex ch = std::cos(0.5 * theta);
  const Complex sh = std::sin(0.5 * theta);
  return {Vec2{ch, sh}, Vec2{-sh, ch}};
}

}  // namespace

Complex EffectiveParams::omega123() const {
  const double s = handedness_sign(handedness);
  return std::conj(raman) * (-2.0 * s * omega12 / std::numbers::pi);
}

double EffectiveParams::scale() const {
  return gamma1 + gamma2 + std::abs(delta) + std::abs(omega12);
}

void EffectiveParams::validate() const {
  if (!std::isfinite(gamma1) || !std::isfinite(gamma2) ||
      !std::isfinite(delta) || !std::isfinite(omega12))
    throw std::invalid_argument("EffectiveParams: non-finite entry");
  if (gamma1 < 0.0 || gamma2 < 0.0)
    throw std::invalid_argument("EffectiveParams: negative width");
  if (!finite2(raman))
    throw std::invalid_argument("EffectiveParams: non-finite raman");
  if (std::norm(raman) > gamma1 * gamma2 * (1.0 + 1e-12) + 1e-300)
    throw std::invalid_argument(
        "EffectiveParams: |raman|^2 exceeds gamma1*gamma2");
}

EffectiveParams make_params(double gamma1, double gamma2, double delta,
                            double omega12, Handedness h,
                            std::optional<Complex> raman) {
  EffectiveParams p;
  p.gamma1 = gamma1;
  p.gamma2 = gamma2;
  p.delta = delta;
  p.omega12 = omega12;
  p.handedness = h;
  p.raman = raman ? *raman : Complex(std::sqrt(gamma1 * gamma2), 0.0);
  p.validate();
  return p;
}

ComplexMatrix2 build_hamiltonian(const EffectiveParams& p) {
  p.validate();
  const double s = handedness_sign(p.handedness);
  ComplexMatrix2 m;
  m.h11 = Complex(0.0, -0.5 * p.gamma1);
  m.h22 = Complex(p.delta, -0.5 * p.gamma2);
  m.h12 = -0.5 * kI * p.raman + s * p.omega12;
  m.h21 = -0.5 * kI * std::conj(p.raman) + s * p.omega12;
  return m;
}

Complex discriminant(const ComplexMatrix2& m) {
  const Complex d = m.h11 - m.h22;
  return d * d + 4.0 * m.h12 * m.h21;
}

Complex discriminant(const EffectiveParams& p) {
  return discriminant(build_hamiltonian(p));
}

Complex c_product(const Vec2& u, const Vec2& v) {
  return u[0] * v[0] + u[1] * v[1];
}

AdiabaticFrame eigensystem(const ComplexMatrix2& m,
                           std::optional<Complex> sqrt_reference) {
  if (!finite2(m.h11) || !finite2(m.h12) || !finite2(m.h21) || !finite2(m.h22))
    throw std::invalid_argument("eigensystem: non-finite matrix");
  const Complex tr = m.trace();
  const Complex d = discriminant(m);
  const double scale = entry_scale(m);

  AdiabaticFrame f;
  if (std::abs(d) <= 1e-20 * scale * scale) {
    // Coalesced: one eigenvalue, one (self-orthogonal) eigenvector.
    f.at_ep = true;
    f.gamma_plus = f.gamma_minus = 0.5 * tr;
    f.phi_plus = f.phi_minus = eigvec_raw(m, f.gamma_plus);
    f.theta = 0.0;
    return f;
  }

  Complex sq = std::sqrt(d);
  if (sqrt_reference &&
      std::abs(-sq - *sqrt_reference) < std::abs(sq - *sqrt_reference))
    sq = -sq;
  f.gamma_plus = 0.5 * (tr + sq);
  f.gamma_minus = 0.5 * (tr - sq);

  const Complex w = m.h22 - m.h11;
  Complex theta;
  if (w == Complex(0.0, 0.0))
    theta = 0.5 * std::numbers::pi;
  else
    theta = std::atan(-2.0 * m.h12 / w);

  const bool symmetric = std::abs(m.h12 - m.h21) <= 1e-14 * scale;
  if (symmetric) {
    // tan(theta) = -2 h12 / (h22 - h11); the pair is c-orthonormal by
    // construction.  theta vs theta+pi swaps the two vectors, so attach
    // them to the eigenvalues via the c-Rayleigh quotient.
    std::pair<Vec2, Vec2> pq = vectors_from_theta(theta);
    const Complex ray = c_product(pq.first, apply(m, pq.first));
    if (std::abs(ray - f.gamma_plus) > std::abs(ray - f.gamma_minus)) {
      theta += std::numbers::pi;
      pq = vectors_from_theta(theta);
    }
    f.phi_plus = pq.first;
    f.phi_minus = pq.second;
  } else {
    // c-normalize when the self-c-product allows it; otherwise leave the
    // Hermitian-normalized vector (biorthogonal partner implied).
    const auto scaled = [](Vec2 v) -> Vec2 {
      const Complex cn = c_product(v, v);
      if (std::abs(cn) > 1e-12) {
        const Complex s = std::sqrt(cn);
        return {v[0] / s, v[1] / s};
      }
      return v;
    };
    f.phi_plus = scaled(eigvec_raw(m, f.gamma_plus));
    f.phi_minus = scaled(eigvec_raw(m, f.gamma_minus));
  }
  f.theta = theta;
  return f;
}

AdiabaticFrame eigensystem(const EffectiveParams& p,
                           std::optional<Complex> sqrt_reference) {
  return eigensystem(build_hamiltonian(p), sqrt_reference);
}

EffectiveParams effective_from_microscopic(const MicroscopicParams& micro) {
  micro.validate();
  const Complex p1 = dot(micro.d1E, micro.F1);
  const Complex p2 = dot(micro.d2E, micro.F2);
  const Complex p3 = dot(micro.d12, micro.F3);
  EffectiveParams out;
  out.gamma1 = std::numbers::pi * std::norm(p1);
  out.gamma2 = std::numbers::pi * std::norm(p2);
  out.raman = std::numbers::pi * p1 * std::conj(p2);
  // One-photon coupling phases are folded into the Right convention; any
  // residual imaginary part belongs to the averaging pseudoscalars.
  out.omega12 = -0.5 * p3.real();
  out.delta = micro.E2 - micro.E1 - micro.omega3;
  out.handedness = Handedness::Right;
  out.validate();
  return out;
}

}  // namespace epchiral
