#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "epchiral/ep_locator.hpp"

using namespace epchiral;

namespace {

double uniform(std::mt19937_64& g, double lo, double hi) {
  return lo + (hi - lo) * ((g() >> 11) * 0x1.0p-53);
}

double log_uniform(std::mt19937_64& g, double lo_exp, double hi_exp) {
  return std::pow(10.0, uniform(g, lo_exp, hi_exp));
}

double dist(const EPPoint& a, double de, double om) {
  return std::hypot(a.delta - de, a.omega12 - om);
}

}  // namespace

TEST_CASE("closed forms for the four-and-one widths") {
  const auto r = closed_form_eps(4, 1, Handedness::Right);
  CHECK(r[0].delta == 2.0);
  CHECK(r[0].omega12 == 0.75);
  CHECK(r[1].delta == -2.0);
  CHECK(r[1].omega12 == -0.75);
  CHECK(r[0].branch_index == 0);
  CHECK(r[1].branch_index == 1);
  CHECK(r[0].residual == 0.0);  // dyadic coordinates, the discriminant cancels exactly
  CHECK(r[1].residual == 0.0);
  CHECK(r[0].handedness == Handedness::Right);

  const auto l = closed_form_eps(4, 1, Handedness::Left);
  CHECK(l[0].delta == 2.0);
  CHECK(l[0].omega12 == -0.75);
  CHECK(l[1].delta == -2.0);
  CHECK(l[1].omega12 == 0.75);
}

TEST_CASE("closed-form pair structure over random widths") {
  std::mt19937_64 gen(201);
  for (int i = 0; i < 500; ++i) {
    const double g1 = log_uniform(gen, -5, 0);
    const double g2 = log_uniform(gen, -5, 0);
    const auto r = closed_form_eps(g1, g2, Handedness::Right);
    const auto l = closed_form_eps(g1, g2, Handedness::Left);

    // Point symmetry through the origin within one enantiomer.
    CHECK(r[1].delta == -r[0].delta);
    CHECK(r[1].omega12 == -r[0].omega12);

    // Mirror property between enantiomers: delta kept, omega12 flipped.
    CHECK(l[0].delta == r[0].delta);
    CHECK(l[0].omega12 == -r[0].omega12);

    // Sign pairing identity delta*(g1-g2) = 4*omega12*sqrt(g1 g2).
    const double lhs = r[0].delta * (g1 - g2);
    const double rhs = 4.0 * r[0].omega12 * std::sqrt(g1 * g2);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + g1 + g2));

    // Residuals below the refinement budget straight from the closed form.
    CHECK(r[0].residual <= 1e-12 * (g1 + g2) * (g1 + g2));
    CHECK(r[1].residual <= 1e-12 * (g1 + g2) * (g1 + g2));

    // The enantiomers' pairs sit |g1-g2|/2 apart along omega12, branch by branch.
    CHECK(std::abs(r[0].omega12 - l[0].omega12) ==
          doctest::Approx(0.5 * std::abs(g1 - g2)).epsilon(1e-12));
  }
}

TEST_CASE("degenerate width limits") {
  const auto equal_r = closed_form_eps(3, 3, Handedness::Right);
  const auto equal_l = closed_form_eps(3, 3, Handedness::Left);
  CHECK(equal_r[0].omega12 == 0.0);
  CHECK(equal_r[1].omega12 == 0.0);
  CHECK(equal_r[0].delta == equal_l[0].delta);
  CHECK(equal_r[0].omega12 == equal_l[0].omega12);

  const auto closed = closed_form_eps(5, 0, Handedness::Right);
  CHECK(closed[0].delta == 0.0);
  CHECK(closed[0].omega12 == 1.25);
  CHECK(closed[1].omega12 == -1.25);

  CHECK_THROWS_AS(closed_form_eps(0, 0, Handedness::Right), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_eps(-1, 1, Handedness::Right), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_eps(std::nan(""), 1, Handedness::Right),
                  std::invalid_argument);
}

TEST_CASE("refinement converges from a nearby guess") {
  EPPoint guess;
  guess.delta = -2.1;
  guess.omega12 = -0.7;
  guess.handedness = Handedness::Right;
  guess.branch_index = 1;
  const EPPoint ep = refine_ep(guess, 4, 1, Handedness::Right);
  CHECK(ep.delta == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(ep.omega12 == doctest::Approx(-0.75).epsilon(1e-9));
  CHECK(ep.residual <= 1e-12 * 25.0);
  CHECK(ep.branch_index == 1);
  CHECK(ep.handedness == Handedness::Right);
}

TEST_CASE("one-percent perturbations refine back") {
  std::mt19937_64 gen(202);
  for (int i = 0; i < 200; ++i) {
    const double g1 = log_uniform(gen, -4, 0);
    const double g2 = log_uniform(gen, -4, 0);
    const Handedness h = (i % 2) ? Handedness::Left : Handedness::Right;
    const auto cf = closed_form_eps(g1, g2, h);
    for (const EPPoint& truth : cf) {
      EPPoint guess = truth;
      const double bump = 0.01 * (std::abs(truth.delta) + std::abs(truth.omega12));
      const double ang = uniform(gen, 0, 6.28);
      guess.delta += bump * std::cos(ang);
      guess.omega12 += bump * std::sin(ang);
      const EPPoint ep = refine_ep(guess, g1, g2, h);
      CHECK(dist(ep, truth.delta, truth.omega12) <= 1e-10 * (g1 + g2));
      CHECK(ep.residual <= 1e-12 * (g1 + g2) * (g1 + g2));
    }
  }
}

TEST_CASE("far guesses fail instead of wandering off") {
  EPPoint guess;
  guess.delta = 100.0;
  guess.omega12 = 100.0;
  CHECK_THROWS_AS(refine_ep(guess, 4, 1, Handedness::Right), EpRefineError);
  try {
    refine_ep(guess, 4, 1, Handedness::Right);
  } catch (const EpRefineError& e) {
    CHECK(std::string(e.what()).size() > 0);
    CHECK(std::isfinite(e.best.delta));
    CHECK(std::isfinite(e.best.omega12));
    CHECK(std::isfinite(e.best.residual));
    // The best iterate stays near the guess, nowhere near the true pair.
    CHECK(dist(e.best, 100.0, 100.0) <= 2.0 * (4.0 + 1.0));
  }
}

TEST_CASE("loose tolerance accepts the guess as-is") {
  EPPoint guess;
  guess.delta = 2.05;
  guess.omega12 = 0.73;
  const EPPoint ep = refine_ep(guess, 4, 1, Handedness::Right, 1e3);
  CHECK(ep.delta == 2.05);
  CHECK(ep.omega12 == 0.73);
}

TEST_CASE("ratio sweep emits one row per branch and enantiomer") {
  const SweepTable t = ratio_sweep(6.2e-3, {0.0, 1.0, 2.25});
  REQUIRE(t.rows.size() == 12);

  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const SweepRow& row = t.rows[i];
    CHECK(row.converged);
    const std::size_t k = i / 4;  // ratio block
    CHECK(row.ratio == std::vector<double>{0.0, 1.0, 2.25}[k]);
    CHECK(row.gamma2 == row.ratio * 6.2e-3);
    CHECK(row.handedness == ((i % 4) < 2 ? Handedness::Right : Handedness::Left));
    CHECK(row.branch_index == static_cast<int>(i % 2));
  }

  // R=0: both enantiomers share the pair (0, +-g1/4).
  CHECK(t.rows[0].delta_ep == 0.0);
  CHECK(t.rows[0].omega12_ep == 1.55e-3);
  CHECK(t.rows[1].omega12_ep == -1.55e-3);
  CHECK(t.rows[2].omega12_ep == -1.55e-3);  // Left branch 0
  CHECK(t.rows[3].omega12_ep == 1.55e-3);

  // R=1: all entries on the omega12 = 0 axis.
  for (std::size_t i = 4; i < 8; ++i) {
    CHECK(t.rows[i].omega12_ep == 0.0);
    CHECK(std::abs(t.rows[i].delta_ep) == doctest::Approx(6.2e-3).epsilon(1e-12));
  }

  // R=2.25: enantiomers differ only in the omega12 sign.
  for (int b = 0; b < 2; ++b) {
    const SweepRow& right = t.rows[8 + b];
    const SweepRow& left = t.rows[10 + b];
    CHECK(right.delta_ep == left.delta_ep);
    CHECK(right.omega12_ep == -left.omega12_ep);
    CHECK(std::abs(right.delta_ep) == doctest::Approx(9.3e-3).epsilon(1e-9));
    CHECK(std::abs(right.omega12_ep) == doctest::Approx(1.9375e-3).epsilon(1e-9));
  }
}

TEST_CASE("ratio sweep input validation") {
  CHECK_THROWS_AS(ratio_sweep(0.0, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(ratio_sweep(1.0, {0.5, 0.5}), std::invalid_argument);   // duplicate
  CHECK_THROWS_AS(ratio_sweep(1.0, {-0.5, 0.5}), std::invalid_argument);  // negative
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(ratio_sweep(1.0, {inf}), std::invalid_argument);
  // An empty request is an empty table, and the sweep orders ratios itself.
  CHECK(ratio_sweep(1.0, {}).rows.empty());
  const SweepTable t = ratio_sweep(1.0, {1.0, 0.5});
  REQUIRE(t.rows.size() == 8);
  CHECK(t.rows.front().ratio == 0.5);
  CHECK(t.rows.back().ratio == 1.0);
}

TEST_CASE("eigengap grid layout and enantiomer symmetry") {
  const std::vector<GapNode> g = eigengap_map(4, 1, -3, 3, 7, -1, 1, 5);
  REQUIRE(g.size() == 35);
  // Row-major, first axis (delta) outer, both ascending.
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 5; ++j) {
      const GapNode& n = g[i * 5 + j];
      CHECK(n.v1 == -3.0 + i * 1.0);
      CHECK(n.v2 == -1.0 + j * 0.5);
    }
  // Right at (delta, omega) equals Left at (delta, -omega), node for node.
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 5; ++j)
      CHECK(g[i * 5 + j].log10_gap_right == g[i * 5 + (4 - j)].log10_gap_left);
}

TEST_CASE("grid node on the degenerate point reports minus infinity") {
  // delta in {0,1,2}, omega in {0,0.75}: the (2, 0.75) node is exact.
  const std::vector<GapNode> g = eigengap_map(4, 1, 0, 2, 3, 0, 0.75, 2);
  REQUIRE(g.size() == 6);
  const GapNode& ep = g[2 * 2 + 1];
  CHECK(ep.v1 == 2.0);
  CHECK(ep.v2 == 0.75);
  CHECK(std::isinf(ep.log10_gap_right));
  CHECK(ep.log10_gap_right < 0);
  CHECK(std::isfinite(ep.log10_gap_left));
}

TEST_CASE("gap minima sit next to the closed-form points") {
  const int nd = 31, no = 31;
  const std::vector<GapNode> g = eigengap_map(4, 1, -3, 3, nd, -1.5, 1.5, no);
  const auto it = std::min_element(
      g.begin(), g.end(),
      [](const GapNode& a, const GapNode& b) { return a.log10_gap_right < b.log10_gap_right; });
  const double step_d = 6.0 / (nd - 1), step_o = 3.0 / (no - 1);
  const auto cf = closed_form_eps(4, 1, Handedness::Right);
  const double off0 = std::max(std::abs(it->v1 - cf[0].delta) / step_d,
                               std::abs(it->v2 - cf[0].omega12) / step_o);
  const double off1 = std::max(std::abs(it->v1 - cf[1].delta) / step_d,
                               std::abs(it->v2 - cf[1].omega12) / step_o);
  CHECK(std::min(off0, off1) <= 1.0 + 1e-12);
}

TEST_CASE("equal widths erase the enantiomer contrast in the gap map") {
  const std::vector<GapNode> g = eigengap_map(2.5, 2.5, -2, 2, 9, -1, 1, 9);
  for (const GapNode& n : g) CHECK(n.log10_gap_right == n.log10_gap_left);
}

TEST_CASE("gap grid over width axes") {
  EffectiveParams base = make_params(4, 1, 0, 0);
  AxisSpec a1{Axis::Gamma1, 1, 5, 3};
  AxisSpec a2{Axis::Gamma2, 0.5, 1.5, 3};
  const std::vector<GapNode> g = gap_grid(base, a1, a2);
  REQUIRE(g.size() == 9);
  CHECK(g[0].v1 == 1.0);
  CHECK(g[8].v1 == 5.0);
  CHECK(g[8].v2 == 1.5);
  for (const GapNode& n : g) CHECK(std::isfinite(n.log10_gap_right));

  AxisSpec bad = a1;
  bad.count = 1;
  CHECK_THROWS_AS(gap_grid(base, bad, a2), std::invalid_argument);
  CHECK_THROWS_AS(gap_grid(base, a1, a1), std::invalid_argument);  // same axis twice
}

TEST_CASE("scaling probe separates branch points from linear crossings") {
  std::vector<double> eps;
  for (int k = 0; k < 13; ++k)
    eps.push_back(5.0 * std::pow(10.0, -6.0 + 2.0 * k / 12.0));

  const auto cf = closed_form_eps(4, 1, Handedness::Right);
  const EPPoint ep = refine_ep(cf[0], 4, 1, Handedness::Right);
  const double square_root =
      response_scaling_probe(ep, 4, 1, {0.6, 0.8}, eps);
  CHECK(square_root == doctest::Approx(0.5).epsilon(0.1));

  EPPoint origin;
  const double linear = response_scaling_probe(origin, 0, 0, {0.6, 0.8}, eps);
  CHECK(linear == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("doubling epsilon scales the gap by sqrt two near the branch point") {
  const auto cf = closed_form_eps(4, 1, Handedness::Right);
  const EPPoint ep = refine_ep(cf[0], 4, 1, Handedness::Right);
  const double e1 = 1e-5 * 5.0;
  const auto gap_at = [&](double eps) {
    const AdiabaticFrame f = eigensystem(
        make_params(4, 1, ep.delta + eps * 0.6, ep.omega12 + eps * 0.8));
    return std::abs(f.gamma_plus - f.gamma_minus);
  };
  const double ratio = gap_at(2.0 * e1) / gap_at(e1);
  CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));
}

TEST_CASE("scaling probe input validation") {
  const auto cf = closed_form_eps(4, 1, Handedness::Right);
  const EPPoint ep = refine_ep(cf[0], 4, 1, Handedness::Right);
  CHECK_THROWS_AS(response_scaling_probe(ep, 4, 1, {0, 0}, {1e-6, 1e-4}),
                  std::invalid_argument);
  CHECK_THROWS_AS(response_scaling_probe(ep, 4, 1, {0.6, 0.8}, {1e-6}),
                  std::invalid_argument);
  CHECK_THROWS_AS(response_scaling_probe(ep, 4, 1, {0.6, 0.8}, {1e-5, 2e-5}),
                  std::invalid_argument);  // under two decades
  CHECK_THROWS_AS(response_scaling_probe(ep, 4, 1, {0.6, 0.8}, {-1e-6, 1e-4}),
                  std::invalid_argument);
  // A ladder buried under the noise floor cannot be fit.
  CHECK_THROWS_AS(response_scaling_probe(ep, 4, 1, {0.6, 0.8}, {1e-40, 1e-37, 1e-35}),
                  NumericalError);
}
