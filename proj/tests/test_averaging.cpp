#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "epchiral/averaging.hpp"

using namespace epchiral;
using Complex = std::complex<double>;

namespace {

const Vec3c kX{Complex(1, 0), Complex(0, 0), Complex(0, 0)};
const Vec3c kY{Complex(0, 0), Complex(1, 0), Complex(0, 0)};
const Vec3c kZ{Complex(0, 0), Complex(0, 0), Complex(1, 0)};

// Right-handed dipole triad driven by a right-handed field triad; colors
// close the loop exactly (0.6 + 0.4 == 1.0 in binary).
MicroscopicParams canonical_micro() {
  MicroscopicParams m;
  m.d1E = kX;
  m.d2E = kY;
  m.d12 = kZ;
  m.F1 = kX;
  m.F2 = kY;
  m.F3 = kZ;
  m.omega1 = 1.0;
  m.omega2 = 0.6;
  m.omega3 = 0.4;
  m.E1 = 0.0;
  m.E2 = 0.6;
  return m;
}

double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * ((g() >> 11) * 0x1.0p-53);
}

Vec3c random_vec(std::mt19937_64& g) {
  Vec3c v;
  for (auto& c : v) c = Complex(uniform(g, -1, 1), uniform(g, -1, 1));
  return v;
}

Vec3c negated(const Vec3c& v) { return {-v[0], -v[1], -v[2]}; }

Vec3c z_mirrored(const Vec3c& v) { return {v[0], v[1], -v[2]}; }

using Mat3 = std::array<std::array<double, 3>, 3>;

// Rodrigues rotation about a unit axis.
Mat3 axis_rotation(double ax, double ay, double az, double angle) {
  const double n = std::sqrt(ax * ax + ay * ay + az * az);
  ax /= n;
  ay /= n;
  az /= n;
  const double c = std::cos(angle), s = std::sin(angle), v = 1.0 - c;
  return {{{c + ax * ax * v, ax * ay * v - az * s, ax * az * v + ay * s},
           {ay * ax * v + az * s, c + ay * ay * v, ay * az * v - ax * s},
           {az * ax * v - ay * s, az * ay * v + ax * s, c + az * az * v}}};
}

Vec3c rotated(const Mat3& r, const Vec3c& v) {
  Vec3c out{};
  for (int i = 0; i < 3; ++i)
    out[i] = r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2];
  return out;
}

}  // namespace

TEST_CASE("triple products follow the handed conventions") {
  CHECK(triple_product(kX, kY, kZ, false) == Complex(1, 0));
  CHECK(triple_product(kX, kY, kZ, true) == Complex(1, 0));
  CHECK(triple_product(kZ, kX, kY, true) == Complex(1, 0));
  CHECK(triple_product(kY, kX, kZ, true) == Complex(-1, 0));

  // Only the flagged slot is conjugated.
  const Vec3c ix{Complex(0, 1), Complex(0, 0), Complex(0, 0)};
  CHECK(triple_product(ix, kY, kZ, true) == Complex(0, -1));
  CHECK(triple_product(ix, kY, kZ, false) == Complex(0, 1));

  CHECK(dot(kX, kY) == Complex(0, 0));
  CHECK(dot(ix, ix) == Complex(-1, 0));  // bilinear, not sesquilinear

  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const Vec3c a = random_vec(rng), b = random_vec(rng);
    const Vec3c ab = cross(a, b), ba = cross(b, a);
    for (int k = 0; k < 3; ++k) CHECK(ab[k] == -ba[k]);
  }
}

TEST_CASE("canonical triads average to one sixth") {
  const PseudoscalarDecomposition d = decompose(canonical_micro());
  CHECK(d.chi_m == Complex(1, 0));
  CHECK(d.h3 == Complex(1, 0));
  CHECK(d.phi_m == 0.0);
  CHECK(d.phi_l == 0.0);
  CHECK(d.averaged_value == 1.0 / 6.0);
}

TEST_CASE("parity flips are exact sign flips") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 50; ++i) {
    MicroscopicParams m = canonical_micro();
    m.d1E = random_vec(rng);
    m.d2E = random_vec(rng);
    m.d12 = random_vec(rng);
    m.F1 = random_vec(rng);
    m.F2 = random_vec(rng);
    m.F3 = random_vec(rng);
    const PseudoscalarDecomposition base = decompose(m);

    // Swapping the enantiomer negates every dipole.
    MicroscopicParams mirror = m;
    mirror.d1E = negated(m.d1E);
    mirror.d2E = negated(m.d2E);
    mirror.d12 = negated(m.d12);
    const PseudoscalarDecomposition md = decompose(mirror);
    CHECK(md.chi_m == -base.chi_m);
    CHECK(md.h3 == base.h3);
    CHECK(md.averaged_value == -base.averaged_value);

    // Reversing one field arm flips the field pseudoscalar instead.
    MicroscopicParams arm = m;
    arm.F3 = negated(m.F3);
    const PseudoscalarDecomposition ad = decompose(arm);
    CHECK(ad.chi_m == base.chi_m);
    CHECK(ad.h3 == -base.h3);
    CHECK(ad.averaged_value == -base.averaged_value);

    // A mirror through the xy plane applied to all three fields is improper,
    // so it also flips the sign exactly.
    MicroscopicParams zm = m;
    zm.F1 = z_mirrored(m.F1);
    zm.F2 = z_mirrored(m.F2);
    zm.F3 = z_mirrored(m.F3);
    const PseudoscalarDecomposition zd = decompose(zm);
    CHECK(zd.h3 == -base.h3);
    CHECK(zd.averaged_value == -base.averaged_value);
  }

  // The sampled estimator inherits the same antisymmetry bit for bit: each
  // draw's value negates, so the mean negates and the spread is untouched.
  MicroscopicParams m = canonical_micro();
  std::mt19937_64 rng2(29);
  m.d1E = random_vec(rng2);
  m.d2E = random_vec(rng2);
  m.d12 = random_vec(rng2);
  MicroscopicParams mirror = m;
  mirror.d1E = negated(m.d1E);
  mirror.d2E = negated(m.d2E);
  mirror.d12 = negated(m.d12);
  const McEstimate a = mc_orientation_average(m, 20000, 404);
  const McEstimate b = mc_orientation_average(mirror, 20000, 404);
  CHECK(b.estimate == -a.estimate);
  CHECK(b.std_error == a.std_error);
}

TEST_CASE("joint rotations leave both pseudoscalars put") {
  // Exact case: a quarter turn about z maps the canonical triad onto
  // another exact basis triad.
  MicroscopicParams quarter = canonical_micro();
  quarter.d1E = kY;
  quarter.d2E = {Complex(-1, 0), Complex(0, 0), Complex(0, 0)};
  quarter.d12 = kZ;
  const PseudoscalarDecomposition qd = decompose(quarter);
  CHECK(qd.chi_m == Complex(1, 0));
  CHECK(qd.averaged_value == 1.0 / 6.0);

  std::mt19937_64 rng(31);
  const Mat3 r1 = axis_rotation(1, 2, 3, 0.7);
  const Mat3 r2 = axis_rotation(-1, 1, 0.5, 2.1);
  for (int i = 0; i < 50; ++i) {
    MicroscopicParams m = canonical_micro();
    m.d1E = random_vec(rng);
    m.d2E = random_vec(rng);
    m.d12 = random_vec(rng);
    m.F1 = random_vec(rng);
    m.F2 = random_vec(rng);
    m.F3 = random_vec(rng);
    const PseudoscalarDecomposition base = decompose(m);

    MicroscopicParams rm = m;
    rm.d1E = rotated(r1, m.d1E);
    rm.d2E = rotated(r1, m.d2E);
    rm.d12 = rotated(r1, m.d12);
    rm.F1 = rotated(r2, m.F1);
    rm.F2 = rotated(r2, m.F2);
    rm.F3 = rotated(r2, m.F3);
    const PseudoscalarDecomposition rd = decompose(rm);

    CHECK(std::abs(rd.chi_m - base.chi_m) <=
          1e-12 * (1.0 + std::abs(base.chi_m)));
    CHECK(std::abs(rd.h3 - base.h3) <= 1e-12 * (1.0 + std::abs(base.h3)));
    CHECK(rd.averaged_value == doctest::Approx(base.averaged_value)
                                   .scale(1)
                                   .epsilon(1e-12));
  }
}

TEST_CASE("the signal follows the relative pseudoscalar phase") {
  // Real dipole triad, so the molecular phase is zero and the response
  // must go as the cosine of the field phase alone.
  for (int k = 0; k <= 16; ++k) {
    const double phi = -std::numbers::pi + k * std::numbers::pi / 8.0;
    MicroscopicParams m = canonical_micro();
    const Complex ph = std::polar(1.0, phi);
    m.F3 = {Complex(0, 0), Complex(0, 0), ph};
    const PseudoscalarDecomposition d = decompose(m);
    CHECK(d.averaged_value == (1.0 / 6.0) * std::cos(phi));
    if (k != 0)  // arg() maps -pi to +pi; skip the wrap point
      CHECK(d.phi_l == doctest::Approx(phi).scale(1).epsilon(1e-12));
  }

  // Quadrature phase: every sampled orientation gives a purely imaginary
  // draw, so the estimator is identically zero, not merely small.
  MicroscopicParams q = canonical_micro();
  q.F3 = {Complex(0, 0), Complex(0, 0), Complex(0, 1)};
  const PseudoscalarDecomposition qd = decompose(q);
  CHECK(qd.averaged_value == 0.0);
  const McEstimate mc = mc_orientation_average(q, 2000, 99);
  CHECK(mc.estimate == 0.0);
  CHECK(mc.std_error == 0.0);
}

TEST_CASE("sampled averages agree with the closed form") {
  const MicroscopicParams m = canonical_micro();
  const McEstimate e = mc_orientation_average(m, 100000, 7);
  CHECK(e.std_error > 0.0);
  CHECK(std::abs(e.estimate - 1.0 / 6.0) <= 4.0 * e.std_error);

  const McEstimate sharded = mc_orientation_average(m, 100000, 7, 4);
  CHECK(std::abs(sharded.estimate - 1.0 / 6.0) <= 4.0 * sharded.std_error);
}

TEST_CASE("sampling is deterministic in the seed") {
  const MicroscopicParams m = canonical_micro();
  const McEstimate a = mc_orientation_average(m, 5000, 12345);
  const McEstimate b = mc_orientation_average(m, 5000, 12345);
  CHECK(a.estimate == b.estimate);
  CHECK(a.std_error == b.std_error);

  const McEstimate s1 = mc_orientation_average(m, 5000, 12345, 4);
  const McEstimate s2 = mc_orientation_average(m, 5000, 12345, 4);
  CHECK(s1.estimate == s2.estimate);
  CHECK(s1.std_error == s2.std_error);

  const McEstimate other = mc_orientation_average(m, 5000, 54321);
  CHECK(a.estimate != other.estimate);
}

TEST_CASE("the error bar shrinks like root n") {
  const MicroscopicParams m = canonical_micro();
  const McEstimate small = mc_orientation_average(m, 100000, 3);
  const McEstimate large = mc_orientation_average(m, 400000, 3);
  CHECK(large.std_error ==
        doctest::Approx(small.std_error / 2.0).epsilon(0.2));
}

TEST_CASE("unusable inputs are rejected up front") {
  const MicroscopicParams good = canonical_micro();
  CHECK_NOTHROW(mc_orientation_average(good, 1000, 1));
  CHECK_THROWS_AS(mc_orientation_average(good, 999, 1), std::invalid_argument);
  CHECK_THROWS_AS(mc_orientation_average(good, 1000, 1, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(mc_orientation_average(good, 1000, 1, 1001),
                  std::invalid_argument);

  MicroscopicParams open = good;
  open.omega3 = 0.3;  // 1.0 != 0.6 + 0.3
  CHECK_THROWS_AS(decompose(open), std::invalid_argument);
  CHECK_THROWS_AS(mc_orientation_average(open, 1000, 1),
                  std::invalid_argument);

  MicroscopicParams dark = good;
  dark.omega2 = 0.0;
  CHECK_THROWS_AS(decompose(dark), std::invalid_argument);
  MicroscopicParams neg = good;
  neg.omega1 = -1.0;
  neg.omega2 = -1.6;
  CHECK_THROWS_AS(decompose(neg), std::invalid_argument);
}
