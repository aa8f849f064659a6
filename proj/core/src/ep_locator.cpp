#include "epchiral/ep_locator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace epchiral {

namespace {

double log_gap(const EffectiveParams& p) {
  const double gap = std::sqrt(std::abs(discriminant(p)));
  if (gap == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log10(gap);
}

double axis_value(const AxisSpec& s, int i) {
  return s.lo + (s.hi - s.lo) * (static_cast<double>(i) / (s.count - 1));
}

void set_axis(EffectiveParams& p, Axis axis, double v, bool& width_changed) {
  switch (axis) {
    case Axis::Gamma1: p.gamma1 = v; width_changed = true; break;
    case Axis::Gamma2: p.gamma2 = v; width_changed = true; break;
    case Axis::Delta: p.delta = v; break;
    case Axis::Omega12: p.omega12 = v; break;
  }
}

}  // namespace

std::array<EPPoint, 2> closed_form_eps(double gamma1, double gamma2,
                                       Handedness h) {
  if (!std::isfinite(gamma1) || !std::isfinite(gamma2) || gamma1 < 0.0 ||
      gamma2 < 0.0)
    throw std::invalid_argument(
        "closed_form_eps: widths must be finite and non-negative");
  if (gamma1 == 0.0 && gamma2 == 0.0)
    throw std::invalid_argument(
        "closed_form_eps: both widths vanish (Hermitian limit, no EPs)");
  const double s = handedness_sign(h);
  const double d0 = std::sqrt(gamma1 * gamma2);
  const double o0 = s * 0.25 * (gamma1 - gamma2);
  std::array<EPPoint, 2> out{EPPoint{d0, o0, h, 0.0, 0},
                             EPPoint{-d0, -o0, h, 0.0, 1}};
  for (EPPoint& p : out)
    p.residual =
        std::abs(discriminant(make_params(gamma1, gamma2, p.delta, p.omega12, h)));
  return out;
}

EPPoint refine_ep(const EPPoint& guess, double gamma1, double gamma2,
                  Handedness h, double tolerance) {
  if (!std::isfinite(gamma1) || !std::isfinite(gamma2) || gamma1 < 0.0 ||
      gamma2 < 0.0)
    throw std::invalid_argument("refine_ep: bad widths");
  if (!std::isfinite(guess.delta) || !std::isfinite(guess.omega12))
    throw std::invalid_argument("refine_ep: non-finite guess");
  const double gsum = gamma1 + gamma2;
  if (gsum <= 0.0)
    throw std::invalid_argument("refine_ep: both widths vanish");
  const double tol = tolerance < 0.0 ? 1e-12 * gsum * gsum : tolerance;

  const double s = handedness_sign(h);
  const double r = std::sqrt(gamma1 * gamma2);
  const double gt = 0.5 * (gamma1 - gamma2);
  const auto disc = [&](double dd, double oo) {
    return discriminant(make_params(gamma1, gamma2, dd, oo, h));
  };

  // Strictly local refinement: iterates stay inside a ball around the guess,
  // so far-off starts fail instead of wandering to a distant root.
  const double ball = gsum;
  const double cx = guess.delta, cy = guess.omega12;
  const auto confine = [&](double& x, double& y) {
    const double dx = x - cx, dy = y - cy;
    const double dist = std::hypot(dx, dy);
    if (dist > ball) {
      x = cx + dx * (ball / dist);
      y = cy + dy * (ball / dist);
    }
  };

  EPPoint best = guess;
  best.residual = std::abs(disc(cx, cy));
  const auto note = [&](double xx, double yy, double res) {
    if (res < best.residual) {
      best.delta = xx;
      best.omega12 = yy;
      best.residual = res;
    }
  };

  double x = cx, y = cy;
  for (int it = 0; it < 50; ++it) {
    const Complex f = disc(x, y);
    const double res = std::abs(f);
    note(x, y, res);
    if (res <= tol) return EPPoint{x, y, h, res, guess.branch_index};
    // d(disc)/d(delta) = 2 (delta + i gt); d(disc)/d(omega) = 8 omega - 4 i s r
    const double a = 2.0 * x, c = 2.0 * gt;
    const double b = 8.0 * y, d = -4.0 * s * r;
    const double det = a * d - b * c;
    if (std::abs(det) <= 1e-14 * (std::abs(a * d) + std::abs(b * c)) + 1e-300)
      break;  // Jacobian degenerate: hand over to the simplex
    x += (-f.real() * d + f.imag() * b) / det;
    y += (-f.imag() * a + f.real() * c) / det;
    confine(x, y);
  }

  // Nelder-Mead on |disc|^2, same locality ball (outside = +inf).
  const auto cost = [&](double xx, double yy) {
    if (std::hypot(xx - cx, yy - cy) > ball)
      return std::numeric_limits<double>::infinity();
    const double res = std::abs(disc(xx, yy));
    note(xx, yy, res);
    return res * res;
  };
  struct Pt {
    double x, y, f;
  };
  const double step = 0.05 * gsum;
  std::array<Pt, 3> sp{Pt{best.delta, best.omega12, cost(best.delta, best.omega12)},
                       Pt{best.delta + step, best.omega12, 0.0},
                       Pt{best.delta, best.omega12 + step, 0.0}};
  sp[1].f = cost(sp[1].x, sp[1].y);
  sp[2].f = cost(sp[2].x, sp[2].y);
  for (int it = 0; it < 500 && best.residual > tol; ++it) {
    std::sort(sp.begin(), sp.end(),
              [](const Pt& p, const Pt& q) { return p.f < q.f; });
    const double mx = 0.5 * (sp[0].x + sp[1].x);
    const double my = 0.5 * (sp[0].y + sp[1].y);
    const double rx = mx + (mx - sp[2].x), ry = my + (my - sp[2].y);
    const double fr = cost(rx, ry);
    if (fr < sp[0].f) {
      const double ex = mx + 2.0 * (mx - sp[2].x), ey = my + 2.0 * (my - sp[2].y);
      const double fe = cost(ex, ey);
      sp[2] = fe < fr ? Pt{ex, ey, fe} : Pt{rx, ry, fr};
    } else if (fr < sp[1].f) {
      sp[2] = Pt{rx, ry, fr};
    } else {
      const double kx = mx + 0.5 * (sp[2].x - mx), ky = my + 0.5 * (sp[2].y - my);
      const double fk = cost(kx, ky);
      if (fk < sp[2].f) {
        sp[2] = Pt{kx, ky, fk};
      } else {
        for (int i = 1; i < 3; ++i) {
          sp[i].x = sp[0].x + 0.5 * (sp[i].x - sp[0].x);
          sp[i].y = sp[0].y + 0.5 * (sp[i].y - sp[0].y);
          sp[i].f = cost(sp[i].x, sp[i].y);
        }
      }
    }
  }
  if (best.residual <= tol)
    return EPPoint{best.delta, best.omega12, h, best.residual,
                   guess.branch_index};
  EPPoint carried = best;
  carried.branch_index = guess.branch_index;
  throw EpRefineError(
      "refine_ep: no convergence within 50 Newton + 500 simplex iterations",
      carried);
}

SweepTable ratio_sweep(double gamma1, const std::vector<double>& ratios) {
  if (!std::isfinite(gamma1) || !(gamma1 > 0.0))
    throw std::invalid_argument("ratio_sweep: gamma1 must be positive");
  std::vector<double> rs = ratios;
  for (double ratio : rs)
    if (!std::isfinite(ratio) || ratio < 0.0)
      throw std::invalid_argument(
          "ratio_sweep: ratios must be finite and non-negative");
  std::sort(rs.begin(), rs.end());
  if (std::adjacent_find(rs.begin(), rs.end()) != rs.end())
    throw std::invalid_argument("ratio_sweep: duplicate ratio");

  SweepTable table;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (double ratio : rs) {
    const double g2 = ratio * gamma1;
    for (Handedness h : {Handedness::Right, Handedness::Left}) {
      for (const EPPoint& p : closed_form_eps(gamma1, g2, h)) {
        SweepRow row;
        row.ratio = ratio;
        row.gamma2 = g2;
        row.handedness = h;
        row.branch_index = p.branch_index;
        try {
          const EPPoint refined = refine_ep(p, gamma1, g2, h);
          row.delta_ep = refined.delta;
          row.omega12_ep = refined.omega12;
        } catch (const EpRefineError&) {
          row.delta_ep = nan;
          row.omega12_ep = nan;
          row.converged = false;
        }
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

std::vector<GapNode> gap_grid(const EffectiveParams& base, const AxisSpec& a1,
                              const AxisSpec& a2) {
  if (a1.count < 2 || a2.count < 2)
    throw std::invalid_argument("gap_grid: axis counts must be >= 2");
  if (!std::isfinite(a1.lo) || !std::isfinite(a1.hi) || !std::isfinite(a2.lo) ||
      !std::isfinite(a2.hi))
    throw std::invalid_argument("gap_grid: ranges must be finite");
  if (a1.axis == a2.axis)
    throw std::invalid_argument("gap_grid: axes must differ");

  std::vector<GapNode> nodes;
  nodes.reserve(static_cast<std::size_t>(a1.count) * a2.count);
  for (int i = 0; i < a1.count; ++i) {
    for (int j = 0; j < a2.count; ++j) {
      EffectiveParams p = base;
      bool width_changed = false;
      set_axis(p, a1.axis, axis_value(a1, i), width_changed);
      set_axis(p, a2.axis, axis_value(a2, j), width_changed);
      if (width_changed)  // keep the matched coupling on width axes
        p.raman = Complex(std::sqrt(p.gamma1 * p.gamma2), 0.0);
      GapNode node;
      node.v1 = axis_value(a1, i);
      node.v2 = axis_value(a2, j);
      p.handedness = Handedness::Right;
      node.log10_gap_right = log_gap(p);
      p.handedness = Handedness::Left;
      node.log10_gap_left = log_gap(p);
      nodes.push_back(node);
    }
  }
  return nodes;
}

std::vector<GapNode> eigengap_map(double gamma1, double gamma2, double delta_lo,
                                  double delta_hi, int delta_count,
                                  double omega_lo, double omega_hi,
                                  int omega_count) {
  const EffectiveParams base = make_params(gamma1, gamma2, 0.0, 0.0);
  return gap_grid(base, AxisSpec{Axis::Delta, delta_lo, delta_hi, delta_count},
                  AxisSpec{Axis::Omega12, omega_lo, omega_hi, omega_count});
}

double response_scaling_probe(const EPPoint& ep, double gamma1, double gamma2,
                              const std::array<double, 2>& direction,
                              const std::vector<double>& epsilons) {
  if (!std::isfinite(gamma1) || !std::isfinite(gamma2) || gamma1 < 0.0 ||
      gamma2 < 0.0)
    throw std::invalid_argument("response_scaling_probe: bad widths");
  const double dn = std::hypot(direction[0], direction[1]);
  if (!std::isfinite(dn) || !(dn > 0.0))
    throw std::invalid_argument("response_scaling_probe: zero direction");
  const double ux = direction[0] / dn, uy = direction[1] / dn;
  if (epsilons.size() < 2)
    throw std::invalid_argument(
        "response_scaling_probe: need at least two epsilons");
  double emin = std::numeric_limits<double>::infinity(), emax = 0.0;
  for (double e : epsilons) {
    if (!std::isfinite(e) || !(e > 0.0))
      throw std::invalid_argument(
          "response_scaling_probe: epsilons must be positive");
    emin = std::min(emin, e);
    emax = std::max(emax, e);
  }
  if (emax < 100.0 * emin * (1.0 - 1e-9))  // slack: pow-of-ten ladders round
    throw std::invalid_argument(
        "response_scaling_probe: ladder must span at least two decades");

  const double noise =
      1e-13 * (gamma1 + gamma2 + std::abs(ep.delta) + std::abs(ep.omega12) + emax);
  std::vector<double> lx, ly;
  for (double e : epsilons) {
    const EffectiveParams p = make_params(
        gamma1, gamma2, ep.delta + e * ux, ep.omega12 + e * uy, ep.handedness);
    const double gap = std::sqrt(std::abs(discriminant(p)));
    if (gap > noise) {
      lx.push_back(std::log10(e));
      ly.push_back(std::log10(gap));
    }
  }
  if (lx.size() < 2)
    throw NumericalError(
        "response_scaling_probe: gap stays below the noise floor");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(lx.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

}  // namespace epchiral
