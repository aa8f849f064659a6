#include "epchiral/loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace epchiral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite2(const Vec2& v) {
  return std::isfinite(v[0].real()) && std::isfinite(v[0].imag()) &&
         std::isfinite(v[1].real()) && std::isfinite(v[1].imag());
}

void check_c0(const Vec2& c0, const char* who) {
  if (!finite2(c0))
    throw std::invalid_argument(std::string(who) +
                                ": non-finite initial state");
  if (std::norm(c0[0]) + std::norm(c0[1]) == 0.0)
    throw std::invalid_argument(std::string(who) + ": zero initial state");
}

void check_path(const EncirclementPath& path) {
  if (!std::isfinite(path.loop_time) || !(path.loop_time > 0.0))
    throw std::invalid_argument("loop: loop_time must be positive");
  if (!std::isfinite(path.radius) || path.radius < 0.0)
    throw std::invalid_argument("loop: radius must be non-negative");
  if (!std::isfinite(path.center_delta) || !std::isfinite(path.center_omega))
    throw std::invalid_argument("loop: non-finite center");
}

// Unchecked circle evaluation; stage times can sit an ulp past loop_time.
std::pair<double, double> circle_at(const EncirclementPath& path, double t) {
  const double tt =
      path.direction == Direction::Reversed ? path.loop_time - t : t;
  const double ph = kTwoPi * tt / path.loop_time;
  return {path.center_delta + path.radius * std::sin(ph),
          path.center_omega + path.radius * std::cos(ph)};
}

// Widths and coupling are fixed along a path; only (delta, omega12) move.
struct PathHam {
  Complex h11;        // -i gamma1 / 2
  Complex h22_width;  // -i gamma2 / 2
  Complex r12, r21;   // -(i/2) raman, -(i/2) conj(raman)
  double s = 1.0;

  ComplexMatrix2 at(double delta, double omega) const {
    const Complex off(s * omega, 0.0);
    return ComplexMatrix2{h11, r12 + off, r21 + off,
                          Complex(delta, 0.0) + h22_width};
  }
};

PathHam path_ham(const EffectiveParams& p) {
  p.validate();
  const Complex half_i(0.0, 0.5);
  return PathHam{Complex(0.0, -0.5 * p.gamma1), Complex(0.0, -0.5 * p.gamma2),
                 -half_i * p.raman, -half_i * std::conj(p.raman),
                 handedness_sign(p.handedness)};
}

template <int N>
using State = std::array<Complex, N>;

// The integration variable is u = c * exp(+(i/2) int tr dt): subtracting the
// shared trace keeps |u| within the slow/fast splitting instead of the raw
// e^{-Gamma t} envelope, so relative error control survives long loops.
State<2> traceless_rhs(const PathHam& ham, double delta, double omega,
                       const State<2>& u) {
  const ComplexMatrix2 H = ham.at(delta, omega);
  const Complex half_w = 0.5 * (H.h11 - H.h22);
  const Complex mi(0.0, -1.0);
  return {mi * (half_w * u[0] + H.h12 * u[1]),
          mi * (H.h21 * u[0] - half_w * u[1])};
}

constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695,
                           393.0 / 640,       -92097.0 / 339200,
                           187.0 / 2100,      1.0 / 40};

template <int N>
bool finite_state(const State<N>& y) {
  for (const Complex& z : y)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

// Dormand-Prince 5(4), integrating y from t0 to t1 with the step size carried
// across segments in h.
template <int N, typename Rhs>
void dp54_segment(const Rhs& rhs, double t0, double t1, State<N>& y,
                  double rel_tol, double abs_tol, double& h, double duration) {
  double t = t0;
  while (t < t1) {
    if (!(h > 0.0)) h = t1 - t0;
    double step = std::min(h, t1 - t);
    for (;;) {
      if (step < 1e-14 * duration)
        throw NumericalError("propagate: step size underflow");
      const bool last = step == t1 - t;

      std::array<State<N>, 7> k;
      k[0] = rhs(t, y);
      State<N> y5 = y;
      for (int i = 1; i < 7; ++i) {
        State<N> yi = y;
        for (int j = 0; j < i; ++j) {
          if (kA[i][j] == 0.0) continue;
          const double w = step * kA[i][j];
          for (int n = 0; n < N; ++n) yi[n] += w * k[j][n];
        }
        if (i == 6) y5 = yi;  // row 6 of the tableau is the order-5 solution
        k[i] = rhs(t + kC[i] * step, yi);
      }
      State<N> y4 = y;
      for (int j = 0; j < 7; ++j) {
        if (kB4[j] == 0.0) continue;
        const double w = step * kB4[j];
        for (int n = 0; n < N; ++n) y4[n] += w * k[j][n];
      }

      double sum = 0.0;
      for (int n = 0; n < N; ++n) {
        const double e = std::abs(y5[n] - y4[n]);
        const double sc =
            abs_tol + rel_tol * std::max(std::abs(y[n]), std::abs(y5[n]));
        sum += (e / sc) * (e / sc);
      }
      double err = std::sqrt(sum / N);
      if (!finite_state<N>(y5)) err = std::numeric_limits<double>::infinity();

      double fac = 5.0;
      if (err > 0.0)
        fac = std::isfinite(err)
                  ? std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0)
                  : 0.2;
      if (err <= 1.0) {
        t = last ? t1 : t + step;
        y = y5;
        h = step * fac;
        break;
      }
      step *= fac;
    }
  }
  if (!finite_state<N>(y))
    throw NumericalError("propagate: state became non-finite");
}

double sample_time(int k, int samples, double duration) {
  if (k == samples - 1) return duration;
  return duration * static_cast<double>(k) / (samples - 1);
}

void check_tols(double rel_tol, double abs_tol, int samples) {
  if (!std::isfinite(rel_tol) || !(rel_tol > 0.0) || !std::isfinite(abs_tol) ||
      !(abs_tol > 0.0))
    throw std::invalid_argument("propagate: tolerances must be positive");
  if (samples < 2)
    throw std::invalid_argument("propagate: need at least two samples");
}

void push_sample(Trajectory& traj, double t, const Vec2& c) {
  traj.times.push_back(t);
  traj.bare_amplitudes.push_back(c);
  traj.raw_norm.push_back(std::norm(c[0]) + std::norm(c[1]));
}

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

struct TrackEval {
  Complex tr, sq;  // trace and principal sqrt(discriminant)
};

// Continuous branch continuation over [t0, t1]: nearest-of-+-sqrt matching,
// valid only while neither eigenvalue moves more than half the local gap;
// bisect otherwise.
template <typename Eval>
Complex track_interval(const Eval& ev, double t0, const Complex& sqc0,
                       const TrackEval& e0, double t1, const TrackEval& e1,
                       int depth) {
  const Complex chosen =
      std::norm(e1.sq - sqc0) <= std::norm(-e1.sq - sqc0) ? e1.sq : -e1.sq;
  const Complex dtr_half = 0.5 * (e1.tr - e0.tr);
  const Complex dsq_half = 0.5 * (chosen - sqc0);
  const double half_gap =
      0.5 * std::min(std::abs(e0.sq), std::abs(e1.sq));
  if (std::max(std::abs(dtr_half + dsq_half), std::abs(dtr_half - dsq_half)) <=
      half_gap)
    return chosen;
  if (depth >= 20)
    throw NumericalError(
        "track_branches: matching stayed ambiguous at full bisection depth");
  const double tm = 0.5 * (t0 + t1);
  const TrackEval em = ev(tm);
  const Complex sqm = track_interval(ev, t0, sqc0, e0, tm, em, depth + 1);
  return track_interval(ev, tm, sqm, em, t1, e1, depth + 1);
}

EffectiveParams params_at(const EffectiveParams& base, double delta,
                          double omega) {
  EffectiveParams p = base;
  p.delta = delta;
  p.omega12 = omega;
  return p;
}

}  // namespace

std::pair<double, double> path_point(const EncirclementPath& path, double t) {
  check_path(path);
  if (!std::isfinite(t) || t < 0.0 || t > path.loop_time)
    throw std::invalid_argument("path_point: t outside [0, loop_time]");
  double tt = path.direction == Direction::Reversed ? path.loop_time - t : t;
  if (tt == path.loop_time) tt = 0.0;  // close the loop exactly
  const double ph = kTwoPi * tt / path.loop_time;
  return {path.center_delta + path.radius * std::sin(ph),
          path.center_omega + path.radius * std::cos(ph)};
}

Trajectory propagate(const EffectiveParams& params_base,
                     const EncirclementPath& path, const Vec2& c0,
                     double rel_tol, double abs_tol, int samples) {
  check_path(path);
  check_tols(rel_tol, abs_tol, samples);
  check_c0(c0, "propagate");
  const PathHam ham = path_ham(params_base);
  const double T = path.loop_time;
  const double gbar = params_base.mean_decay();

  // int_0^t delta dt' for the circle is closed-form; the sign of the
  // oscillatory part follows the traversal direction.
  const auto delta_integral = [&](double t) {
    const double osc =
        path.radius * (T / kTwoPi) * (1.0 - std::cos(kTwoPi * t / T));
    return path.center_delta * t +
           (path.direction == Direction::AsWritten ? osc : -osc);
  };
  const auto rhs = [&](double t, const State<2>& u) {
    const auto [d, o] = circle_at(path, t);
    return traceless_rhs(ham, d, o, u);
  };

  Trajectory traj;
  traj.times.reserve(samples);
  traj.bare_amplitudes.reserve(samples);
  traj.raw_norm.reserve(samples);

  State<2> u{c0[0], c0[1]};
  push_sample(traj, 0.0, c0);
  double h = T / 1024.0;
  for (int k = 1; k < samples; ++k) {
    const double t0 = sample_time(k - 1, samples, T);
    const double t1 = sample_time(k, samples, T);
    dp54_segment<2>(rhs, t0, t1, u, rel_tol, abs_tol, h, T);
    const Complex f =
        std::exp(Complex(-0.5 * gbar * t1, -0.5 * delta_integral(t1)));
    push_sample(traj, t1, Vec2{u[0] * f, u[1] * f});
  }
  return traj;
}

Trajectory propagate_on(const EffectiveParams& params_base, const PathFn& fn,
                        double duration, const Vec2& c0, double rel_tol,
                        double abs_tol, int samples) {
  if (!fn) throw std::invalid_argument("propagate_on: empty path function");
  if (!std::isfinite(duration) || !(duration > 0.0))
    throw std::invalid_argument("propagate_on: duration must be positive");
  check_tols(rel_tol, abs_tol, samples);
  check_c0(c0, "propagate_on");
  const PathHam ham = path_ham(params_base);
  const double gbar = params_base.mean_decay();

  // Third component accumulates int delta dt for the phase reconstruction.
  const auto rhs = [&](double t, const State<3>& y) -> State<3> {
    const auto [d, o] = fn(t);
    const State<2> du = traceless_rhs(ham, d, o, State<2>{y[0], y[1]});
    return {du[0], du[1], Complex(d, 0.0)};
  };

  Trajectory traj;
  traj.times.reserve(samples);
  traj.bare_amplitudes.reserve(samples);
  traj.raw_norm.reserve(samples);

  State<3> y{c0[0], c0[1], Complex(0.0, 0.0)};
  push_sample(traj, 0.0, c0);
  double h = duration / 1024.0;
  for (int k = 1; k < samples; ++k) {
    const double t0 = sample_time(k - 1, samples, duration);
    const double t1 = sample_time(k, samples, duration);
    dp54_segment<3>(rhs, t0, t1, y, rel_tol, abs_tol, h, duration);
    const Complex f =
        std::exp(Complex(-0.5 * gbar * t1, -0.5 * y[2].real()));
    push_sample(traj, t1, Vec2{y[0] * f, y[1] * f});
  }
  return traj;
}

Trajectory propagate_fixed_rk4(const EffectiveParams& params_base,
                               const EncirclementPath& path, const Vec2& c0,
                               long steps, int samples) {
  check_path(path);
  if (samples < 2)
    throw std::invalid_argument("propagate_fixed_rk4: need at least two samples");
  if (steps < 1)
    throw std::invalid_argument("propagate_fixed_rk4: need at least one step");
  check_c0(c0, "propagate_fixed_rk4");
  const PathHam ham = path_ham(params_base);
  const double T = path.loop_time;
  const double gbar = params_base.mean_decay();
  const auto delta_integral = [&](double t) {
    const double osc =
        path.radius * (T / kTwoPi) * (1.0 - std::cos(kTwoPi * t / T));
    return path.center_delta * t +
           (path.direction == Direction::AsWritten ? osc : -osc);
  };
  const auto rhs = [&](double t, const State<2>& u) {
    const auto [d, o] = circle_at(path, t);
    return traceless_rhs(ham, d, o, u);
  };
  const long per_segment = (steps + samples - 2) / (samples - 1);

  Trajectory traj;
  State<2> u{c0[0], c0[1]};
  push_sample(traj, 0.0, c0);
  for (int k = 1; k < samples; ++k) {
    const double t0 = sample_time(k - 1, samples, T);
    const double t1 = sample_time(k, samples, T);
    const double hh = (t1 - t0) / per_segment;
    for (long m = 0; m < per_segment; ++m) {
      const double t = t0 + hh * m;
      const State<2> k1 = rhs(t, u);
      State<2> ym{u[0] + 0.5 * hh * k1[0], u[1] + 0.5 * hh * k1[1]};
      const State<2> k2 = rhs(t + 0.5 * hh, ym);
      ym = {u[0] + 0.5 * hh * k2[0], u[1] + 0.5 * hh * k2[1]};
      const State<2> k3 = rhs(t + 0.5 * hh, ym);
      ym = {u[0] + hh * k3[0], u[1] + hh * k3[1]};
      const State<2> k4 = rhs(t + hh, ym);
      for (int n = 0; n < 2; ++n)
        u[n] += (hh / 6.0) * (k1[n] + 2.0 * k2[n] + 2.0 * k3[n] + k4[n]);
    }
    if (!finite_state<2>(u))
      throw NumericalError("propagate_fixed_rk4: state became non-finite");
    const Complex f =
        std::exp(Complex(-0.5 * gbar * t1, -0.5 * delta_integral(t1)));
    push_sample(traj, t1, Vec2{u[0] * f, u[1] * f});
  }
  return traj;
}

int BranchTracking::label_at(double t) const {
  int parity = 1;
  for (double c : cross_times) {
    if (c <= t)
      parity = -parity;
    else
      break;
  }
  return parity;
}

BranchTracking track_branches(const EffectiveParams& params_base,
                              const EncirclementPath& path, int min_samples) {
  check_path(path);
  if (min_samples < 2)
    throw std::invalid_argument("track_branches: need at least two samples");
  const PathHam ham = path_ham(params_base);
  const double T = path.loop_time;
  const double g1 = params_base.gamma1, g2 = params_base.gamma2;

  const auto ev = [&](double t) -> TrackEval {
    const auto [d, o] = circle_at(path, t);
    const ComplexMatrix2 H = ham.at(d, o);
    const Complex w = H.h11 - H.h22;
    const Complex disc = w * w + 4.0 * H.h12 * H.h21;
    const double scale = g1 + g2 + std::abs(d) + std::abs(o);
    if (std::abs(disc) <= 1e-20 * scale * scale)
      throw NumericalError(
          "track_branches: path passes through an eigenvalue coalescence");
    return TrackEval{H.h11 + H.h22, std::sqrt(disc)};
  };

  BranchTracking out;
  TrackEval prev = ev(0.0);
  Complex sqc = prev.sq;  // start on the principal branch
  int parity = 1;
  double t_prev = 0.0;
  for (int j = 1; j <= min_samples; ++j) {
    const double t = j == min_samples
                         ? T
                         : T * static_cast<double>(j) / min_samples;
    const TrackEval cur = ev(t);
    const Complex sqn = track_interval(ev, t_prev, sqc, prev, t, cur, 0);
    const int pnew =
        std::norm(sqn - cur.sq) <= std::norm(sqn + cur.sq) ? 1 : -1;
    if (pnew != parity) {
      // The principal label exchanges where the discriminant crosses its
      // cut; pin the time down on the sign of Im(disc) = Im(sq^2).
      double lo = t_prev, hi = t;
      const int slo = sign_of((prev.sq * prev.sq).imag());
      const int shi = sign_of((cur.sq * cur.sq).imag());
      if (slo != 0 && shi != 0 && slo != shi) {
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          const TrackEval em = ev(mid);
          if (sign_of((em.sq * em.sq).imag()) == slo)
            lo = mid;
          else
            hi = mid;
        }
      }
      out.cross_times.push_back(0.5 * (lo + hi));
      parity = pnew;
    }
    prev = cur;
    sqc = sqn;
    t_prev = t;
  }
  out.swap = parity == -1;
  return out;
}

std::pair<Complex, Complex> project_adiabatic(const Vec2& c,
                                              const AdiabaticFrame& frame,
                                              int continuity_label) {
  if (continuity_label != 1 && continuity_label != -1)
    throw std::invalid_argument(
        "project_adiabatic: continuity label must be +1 or -1");
  if (frame.at_ep)
    throw std::invalid_argument(
        "project_adiabatic: coalesced frame has no biorthogonal projection");
  const Complex ap = c_product(frame.phi_plus, c);
  const Complex am = c_product(frame.phi_minus, c);
  if (continuity_label == 1) return {ap, am};
  return {am, ap};
}

std::vector<Vec2> gauge_transform(const Trajectory& trajectory,
                                  const EffectiveParams& params_base,
                                  const EncirclementPath& path) {
  params_base.validate();
  check_path(path);
  const std::size_t n = trajectory.times.size();
  if (n == 0 || trajectory.bare_amplitudes.size() != n)
    throw std::invalid_argument("gauge_transform: malformed trajectory");
  const double gbar = params_base.mean_decay();

  std::vector<Vec2> out(n);
  double integral = 0.0;
  double d_prev = path_point(path, trajectory.times[0]).first;
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) {
      const double d_cur = path_point(path, trajectory.times[i]).first;
      integral += 0.5 * (d_prev + d_cur) *
                  (trajectory.times[i] - trajectory.times[i - 1]);
      d_prev = d_cur;
    }
    const Complex f = std::exp(
        Complex(0.5 * gbar * trajectory.times[i], -0.5 * integral));
    out[i] = Vec2{trajectory.bare_amplitudes[i][0] * f,
                  trajectory.bare_amplitudes[i][1] * f};
  }
  return out;
}

EncirclementResult run_encirclement(const EffectiveParams& params_base,
                                    const EncirclementPath& path,
                                    InitialState initial,
                                    std::optional<Vec2> c0, double rel_tol,
                                    double abs_tol, int samples,
                                    int min_track_samples) {
  params_base.validate();
  check_path(path);
  const BranchTracking tracking =
      track_branches(params_base, path, min_track_samples);

  const auto [d0, o0] = path_point(path, 0.0);
  const AdiabaticFrame f0 = eigensystem(params_at(params_base, d0, o0));
  if (f0.at_ep)
    throw NumericalError("run_encirclement: loop starts on a coalescence");
  // "plus" = the longer-lived of the two states at t = 0.
  const int anchor =
      f0.gamma_plus.imag() >= f0.gamma_minus.imag() ? 1 : -1;

  Vec2 start;
  switch (initial) {
    case InitialState::PlusState:
      start = anchor == 1 ? f0.phi_plus : f0.phi_minus;
      break;
    case InitialState::MinusState:
      start = anchor == 1 ? f0.phi_minus : f0.phi_plus;
      break;
    case InitialState::Custom:
      if (!c0)
        throw std::invalid_argument(
            "run_encirclement: Custom initial state needs c0");
      if (!finite2(*c0) || std::norm((*c0)[0]) + std::norm((*c0)[1]) == 0.0)
        throw std::invalid_argument("run_encirclement: degenerate c0");
      start = *c0;
      break;
  }

  EncirclementResult res;
  res.trajectory = propagate(params_base, path, start, rel_tol, abs_tol, samples);
  Trajectory& traj = res.trajectory;
  traj.branch_cross_times = tracking.cross_times;
  traj.adiabatic_amplitudes.resize(traj.times.size());
  traj.branch_labels.resize(traj.times.size());

  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const int label = anchor * tracking.label_at(t);
    const auto [dd, oo] = path_point(path, t);
    const AdiabaticFrame frame = eigensystem(params_at(params_base, dd, oo));
    if (frame.at_ep)
      throw NumericalError("run_encirclement: sample sits on a coalescence");
    const auto [ap, am] =
        project_adiabatic(traj.bare_amplitudes[i], frame, label);
    traj.adiabatic_amplitudes[i] = Vec2{ap, am};
    traj.branch_labels[i] = label;
  }

  const Vec2& a_fin = traj.adiabatic_amplitudes.back();
  res.final_pop_plus_raw = std::norm(a_fin[0]);
  res.final_pop_minus_raw = std::norm(a_fin[1]);
  const double total = res.final_pop_plus_raw + res.final_pop_minus_raw;
  if (total == 0.0)
    throw NumericalError("run_encirclement: final state vanished");
  res.final_pop_plus_norm = res.final_pop_plus_raw / total;
  res.final_pop_minus_norm = res.final_pop_minus_raw / total;
  res.eigenvalue_swap = tracking.swap;
  res.dominant_final_state = res.final_pop_plus_norm >= res.final_pop_minus_norm
                                 ? AdiabaticLabel::Plus
                                 : AdiabaticLabel::Minus;
  return res;
}

std::vector<LoopSweepRow> loop_time_sweep(const EffectiveParams& params_base,
                                          const EncirclementPath& path_template,
                                          const std::vector<double>& loop_times,
                                          InitialState initial) {
  if (loop_times.empty())
    throw std::invalid_argument("loop_time_sweep: no loop times");
  for (std::size_t i = 0; i < loop_times.size(); ++i) {
    if (!std::isfinite(loop_times[i]) || !(loop_times[i] > 0.0))
      throw std::invalid_argument("loop_time_sweep: loop times must be positive");
    if (i > 0 && loop_times[i] <= loop_times[i - 1])
      throw std::invalid_argument(
          "loop_time_sweep: loop times must be strictly ascending");
  }
  if (initial == InitialState::Custom)
    throw std::invalid_argument("loop_time_sweep: custom states not supported");

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<LoopSweepRow> rows;
  rows.reserve(loop_times.size() * 4);
  for (double T : loop_times) {
    for (Handedness h : {Handedness::Right, Handedness::Left}) {
      for (Direction dir : {Direction::AsWritten, Direction::Reversed}) {
        LoopSweepRow row;
        row.loop_time = T;
        row.enantiomer = h;
        row.direction = dir;
        EffectiveParams p = params_base;
        p.handedness = h;
        EncirclementPath path = path_template;
        path.loop_time = T;
        path.direction = dir;
        try {
          const EncirclementResult res = run_encirclement(p, path, initial);
          row.pop_plus_norm = res.final_pop_plus_norm;
          row.pop_minus_norm = res.final_pop_minus_norm;
          row.pop_plus_raw = res.final_pop_plus_raw;
          row.pop_minus_raw = res.final_pop_minus_raw;
          row.eigenvalue_swap = res.eigenvalue_swap;
          row.dominant = res.dominant_final_state;
        } catch (const std::exception& e) {
          row.ok = false;
          row.status = e.what();
          row.pop_plus_norm = row.pop_minus_norm = nan;
          row.pop_plus_raw = row.pop_minus_raw = nan;
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace epchiral
