#pragma once

#include <array>
#include <string>
#include <vector>

#include "epchiral/errors.hpp"
#include "epchiral/model.hpp"

namespace epchiral {

struct EPPoint {
  double delta = 0.0;
  double omega12 = 0.0;
  Handedness handedness = Handedness::Right;
  double residual = 0.0;  // |discriminant| there
  int branch_index = 0;   // 0 carries delta = +sqrt(gamma1*gamma2)
};

struct EpRefineError : NumericalError {
  EPPoint best;
  EpRefineError(const std::string& what, const EPPoint& b)
      : NumericalError(what), best(b) {}
};

// The degenerate pair for the matched coupling raman = sqrt(gamma1*gamma2):
//   Right: (+sqrt(g1 g2), +(g1-g2)/4) and the origin-reflected partner;
//   Left:  omega12 sign flipped.
// Sign pairing satisfies delta*(g1-g2) = 4*omega12*sqrt(g1 g2).
// Throws std::invalid_argument when both widths vanish.
std::array<EPPoint, 2> closed_form_eps(double gamma1, double gamma2,
                                       Handedness h);

// Newton on (Re d, Im d) over (delta, omega12) with the analytic Jacobian;
// falls back to simplex descent on |d|^2 when the Jacobian degenerates.
// tolerance < 0 selects the default 1e-12*(gamma1+gamma2)^2.  Throws
// EpRefineError (best iterate attached) after 50 Newton + 500 simplex
// iterations without convergence.
EPPoint refine_ep(const EPPoint& guess, double gamma1, double gamma2,
                  Handedness h, double tolerance = -1.0);

struct SweepRow {
  double ratio = 0.0;
  double gamma2 = 0.0;
  Handedness handedness = Handedness::Right;
  int branch_index = 0;
  double delta_ep = 0.0;
  double omega12_ep = 0.0;
  bool converged = true;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// Closed-form EPs validated by refine_ep for gamma2 = ratio*gamma1, both
// enantiomers and branches per ratio.  Refinement failures flag the row
// instead of aborting.
SweepTable ratio_sweep(double gamma1, const std::vector<double>& ratios);

enum class Axis { Gamma1, Gamma2, Delta, Omega12 };

struct AxisSpec {
  Axis axis = Axis::Delta;
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;  // >= 2
};

struct GapNode {
  double v1 = 0.0, v2 = 0.0;  // coordinates along the two axes
  double log10_gap_right = 0.0;
  double log10_gap_left = 0.0;  // -inf marks exact degeneracy
};

// log10|gamma_+ - gamma_-| for both enantiomers over any two of the four
// knobs; the rest come from base.  Row-major, first axis outer, ascending.
std::vector<GapNode> gap_grid(const EffectiveParams& base, const AxisSpec& a1,
                              const AxisSpec& a2);

// The (delta, omega12) specialization with matched raman.
std::vector<GapNode> eigengap_map(double gamma1, double gamma2, double delta_lo,
                                  double delta_hi, int delta_count,
                                  double omega_lo, double omega_hi,
                                  int omega_count);

// Least-squares slope of log10(gap) vs log10(eps) when stepping away from ep
// along the given unit direction.  The ladder must span at least two decades.
// Throws NumericalError when the gap never rises above the noise floor.
double response_scaling_probe(const EPPoint& ep, double gamma1, double gamma2,
                              const std::array<double, 2>& direction,
                              const std::vector<double>& epsilons);

}  // namespace epchiral
