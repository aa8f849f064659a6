#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "epchiral/errors.hpp"
#include "epchiral/model.hpp"

namespace epchiral {

enum class Direction { AsWritten, Reversed };

// Circular loop in the (delta, omega12) plane,
//   delta(t) = center_delta + radius*sin(2 pi t / T),
//   omega(t) = center_omega + radius*cos(2 pi t / T),
// which runs clockwise with delta horizontal; Reversed evaluates at T - t.
// With radius = -center_omega the loop starts (and closes) at omega12 = 0.
struct EncirclementPath {
  double center_delta = 0.0;
  double center_omega = 0.0;
  double radius = 0.0;
  double loop_time = 0.0;
  Direction direction = Direction::AsWritten;
};

// Throws std::invalid_argument outside 0 <= t <= loop_time.
std::pair<double, double> path_point(const EncirclementPath& path, double t);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec2> bare_amplitudes;
  std::vector<Vec2> adiabatic_amplitudes;  // (a_plus, a_minus) per sample
  std::vector<int> branch_labels;          // +1/-1, see run_encirclement
  std::vector<double> branch_cross_times;
  std::vector<double> raw_norm;  // |c1|^2 + |c2|^2
};

// Integrates i dc/dt = H(t) c in the bare basis with an adaptive embedded
// Dormand-Prince 5(4) pair, H rebuilt from the path at every stage; only
// delta and omega12 vary along the path, the widths stay fixed.  Returns
// equally spaced samples (endpoints included).  Throws NumericalError on
// step-size underflow or a non-finite state.
Trajectory propagate(const EffectiveParams& params_base,
                     const EncirclementPath& path, const Vec2& c0,
                     double rel_tol = 1e-10, double abs_tol = 1e-12,
                     int samples = 2048);

using PathFn = std::function<std::pair<double, double>(double)>;

// Same integrator over an arbitrary (delta, omega12)(t), for mirrored or
// otherwise non-circular paths.
Trajectory propagate_on(const EffectiveParams& params_base, const PathFn& fn,
                        double duration, const Vec2& c0, double rel_tol = 1e-10,
                        double abs_tol = 1e-12, int samples = 2048);

// Fixed-step classical RK4 reference for convergence checks.
Trajectory propagate_fixed_rk4(const EffectiveParams& params_base,
                               const EncirclementPath& path, const Vec2& c0,
                               long steps, int samples = 2048);

struct BranchTracking {
  std::vector<double> cross_times;  // principal/continuity label exchanges
  bool swap = false;                // one full loop exchanges the labels

  // +1 until the first cross, alternating afterwards.
  int label_at(double t) const;
};

// Follows sqrt(discriminant) continuously along the path (nearest-distance
// matching, bisecting intervals where the eigenvalue motion exceeds half the
// local gap) and records where the continuous branch leaves the principal
// one.  Throws NumericalError when the path meets an EP or matching stays
// ambiguous at full bisection depth.
BranchTracking track_branches(const EffectiveParams& params_base,
                              const EncirclementPath& path,
                              int min_samples = 4096);

// a_pm = c_product(phi_pm, c), with the roles of the frame's phi vectors
// swapped when continuity_label = -1, so populations stay continuous across
// branch cuts.  Throws std::invalid_argument on an at_ep frame.
std::pair<Complex, Complex> project_adiabatic(const Vec2& c,
                                              const AdiabaticFrame& frame,
                                              int continuity_label);

// Diagnostic view: c(t) times exp(mean_decay*t/2 - (i/2)*int_0^t delta dt'),
// the detuning integral by trapezoid over the stored samples.  Normalized
// populations are unchanged by this scalar factor.
std::vector<Vec2> gauge_transform(const Trajectory& trajectory,
                                  const EffectiveParams& params_base,
                                  const EncirclementPath& path);

enum class InitialState { PlusState, MinusState, Custom };
enum class AdiabaticLabel { Plus, Minus };

struct EncirclementResult {
  Trajectory trajectory;
  double final_pop_plus_norm = 0.0;
  double final_pop_minus_norm = 0.0;
  double final_pop_plus_raw = 0.0;
  double final_pop_minus_raw = 0.0;
  bool eigenvalue_swap = false;
  AdiabaticLabel dominant_final_state = AdiabaticLabel::Plus;
};

// Full experiment: propagate + track_branches + per-sample projection.
// "Plus" is anchored at t = 0 to the longer-lived eigenstate (the one with
// the larger Im gamma) and follows continuity from there; branch_labels
// store +1 where that state coincides with the principal-branch plus.
// PlusState starts in phi_plus(0), MinusState in phi_minus(0), Custom in c0.
EncirclementResult run_encirclement(const EffectiveParams& params_base,
                                    const EncirclementPath& path,
                                    InitialState initial,
                                    std::optional<Vec2> c0 = std::nullopt,
                                    double rel_tol = 1e-10,
                                    double abs_tol = 1e-12, int samples = 2048,
                                    int min_track_samples = 4096);

struct LoopSweepRow {
  double loop_time = 0.0;
  Handedness enantiomer = Handedness::Right;
  Direction direction = Direction::AsWritten;
  double pop_plus_norm = 0.0;
  double pop_minus_norm = 0.0;
  double pop_plus_raw = 0.0;
  double pop_minus_raw = 0.0;
  bool eigenvalue_swap = false;
  AdiabaticLabel dominant = AdiabaticLabel::Plus;
  bool ok = true;
  std::string status = "ok";
};

// One row per (loop time, enantiomer, direction), times ascending, Right
// before Left, AsWritten before Reversed.  Per-row failures are flagged in
// status; the sweep keeps going.
std::vector<LoopSweepRow> loop_time_sweep(const EffectiveParams& params_base,
                                          const EncirclementPath& path_template,
                                          const std::vector<double>& loop_times,
                                          InitialState initial);

}  // namespace epchiral
