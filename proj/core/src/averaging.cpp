#include "epchiral/averaging.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace epchiral {

namespace {

// Isotropic average of one rank-3 rotation contraction.  Pinned empirically
// against mc_orientation_average (the triad case and random draws agree to
// Monte Carlo error), then hard-coded.
constexpr double kIsotropicTripleFactor = 1.0 / 6.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& g) { return (g() >> 11) * 0x1.0p-53; }

using Mat3 = std::array<std::array<double, 3>, 3>;

// Shoemake: uniform unit quaternion from three uniforms, then the standard
// quaternion-to-matrix map.
Mat3 haar_rotation(std::mt19937_64& g) {
  const double u1 = uniform01(g);
  const double u2 = uniform01(g);
  const double u3 = uniform01(g);
  const double s1 = std::sqrt(1.0 - u1), s2 = std::sqrt(u1);
  const double a1 = 2.0 * std::numbers::pi * u2;
  const double a2 = 2.0 * std::numbers::pi * u3;
  const double x = s1 * std::sin(a1), y = s1 * std::cos(a1);
  const double z = s2 * std::sin(a2), w = s2 * std::cos(a2);
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w)},
           {2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w)},
           {2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}}};
}

Vec3c rotate(const Mat3& r, const Vec3c& v) {
  Vec3c out{};
  for (int i = 0; i < 3; ++i)
    out[i] = r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2];
  return out;
}

}  // namespace

void MicroscopicParams::validate() const {
  if (!(omega1 > 0.0) || !(omega2 > 0.0) || !(omega3 > 0.0))
    throw std::invalid_argument("MicroscopicParams: colors must be positive");
  if (std::abs(omega1 - omega2 - omega3) > 1e-12 * omega1)
    throw std::invalid_argument(
        "MicroscopicParams: omega1 != omega2 + omega3 (loop not closed)");
}

std::complex<double> dot(const Vec3c& a, const Vec3c& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

Vec3c cross(const Vec3c& a, const Vec3c& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

std::complex<double> triple_product(const Vec3c& a, const Vec3c& b,
                                    const Vec3c& c, bool conjugate_first) {
  const Vec3c bc = cross(b, c);
  if (conjugate_first)
    return dot({std::conj(a[0]), std::conj(a[1]), std::conj(a[2])}, bc);
  return dot(a, bc);
}

PseudoscalarDecomposition decompose(const MicroscopicParams& micro) {
  micro.validate();
  PseudoscalarDecomposition out;
  out.chi_m = triple_product(micro.d1E, micro.d2E, micro.d12, true);
  out.h3 = triple_product(micro.F1, micro.F2, micro.F3, true);
  out.phi_m = std::arg(out.chi_m);
  out.phi_l = std::arg(out.h3);
  // Haar-averaging Re[(R d1.F1)* (R d2.F2) (R d12.F3)] contracts the two
  // pseudoscalars directly (no second conjugation); the oracle pins this
  // sign structure along with the 1/6.
  out.averaged_value = kIsotropicTripleFactor * (out.chi_m * out.h3).real();
  return out;
}

McEstimate mc_orientation_average(const MicroscopicParams& micro,
                                  std::int64_t samples, std::uint64_t seed,
                                  int shards) {
  micro.validate();
  if (samples < 1000)
    throw std::invalid_argument(
        "mc_orientation_average: need at least 1000 samples");
  if (shards < 1 || static_cast<std::int64_t>(shards) > samples)
    throw std::invalid_argument("mc_orientation_average: bad shard count");

  double sum = 0.0, sumsq = 0.0;
  const std::int64_t per = samples / shards;
  const std::int64_t extra = samples % shards;
  for (int k = 0; k < shards; ++k) {
    const std::int64_t n = per + (k < extra ? 1 : 0);
    std::mt19937_64 gen(splitmix64(
        seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k)));
    double ssum = 0.0, ssumsq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const Mat3 r = haar_rotation(gen);
      const std::complex<double> v = std::conj(dot(rotate(r, micro.d1E), micro.F1)) *
                                     dot(rotate(r, micro.d2E), micro.F2) *
                                     dot(rotate(r, micro.d12), micro.F3);
      ssum += v.real();
      ssumsq += v.real() * v.real();
    }
    sum += ssum;
    sumsq += ssumsq;
  }
  McEstimate est;
  const double n = static_cast<double>(samples);
  est.estimate = sum / n;
  const double var = (sumsq - n * est.estimate * est.estimate) / (n - 1.0);
  est.std_error = std::sqrt(std::max(var, 0.0) / n);
  return est;
}

}  // namespace epchiral
