#ifndef XRWA_PROPAGATE_HPP
#define XRWA_PROPAGATE_HPP

#include <functional>
#include <vector>

#include "xrwa/drive.hpp"
#include "xrwa/su2.hpp"

namespace xrwa {

using HamiltonianFn = std::function<PauliVector(double)>;

enum class Scheme { MidpointExponential, CommutatorFree4 };

struct PropagationSpec {
    double t_start = 0.0;
    double t_end = 0.0;
    int steps_per_tc = 256;  // >= 16
    double tc = 2.0 * 3.14159265358979323846;
    Scheme scheme = Scheme::CommutatorFree4;
};

// Ordered product of per-step exponentials for U(t_end, t_start).
// Midpoint is 2nd order in the step, the commutator-free scheme 4th order.
// t_end < t_start propagates backwards.
Unitary2 propagate_product(const HamiltonianFn& h_fn, const PropagationSpec& spec);

// Stepping engine exposing intermediate states: applies steps from `t_from`
// to `t_to` onto `u`, with step size at most tc/steps_per_tc.
void propagate_onto(const HamiltonianFn& h_fn, double t_from, double t_to,
                    int steps_per_tc, double tc, Scheme scheme, Unitary2& u);

// Three lowest Magnus terms on [t0, t0 + duration] by nested Gauss-Legendre
// quadrature, with the 1/duration prefactors.
struct MagnusTerms {
    PauliVector h0, h1, h2;
};

MagnusTerms magnus_terms(const HamiltonianFn& h_fn, double t0, double duration,
                         int quad_points = 32);

// Closed-form sigma_x rotation angle of the RWA evolution for a Gaussian
// envelope, integrated over [t0, t0 + t] with t0 = beta0/(2 omega):
//   (A sigma / 4) sqrt(pi/2) [ erf((t0 + t)/(sqrt2 sigma)) - erf(t0/(sqrt2 sigma)) ].
double magnus_lowest_rwa(const Envelope& env, double t, double beta0, double omega);

// Rotation vector of the propagator from t_i = beta0/(2 omega) to t.
RotationVector n_of(const HamiltonianFn& h_fn, double t, double beta0,
                    const PropagationSpec& spec, double omega);

// Trajectory version: n at each of the (sorted or unsorted) requested times,
// with branch continuity maintained along the sweep.
std::vector<RotationVector> n_trajectory(const HamiltonianFn& h_fn,
                                         const std::vector<double>& times,
                                         double beta0, const PropagationSpec& spec,
                                         double omega);

// Pick the log branch closest to a previous sample (handles alpha growing
// through pi).  Candidates are n + 2 pi k nhat.
RotationVector continue_branch(const RotationVector& principal, const Vec3& previous);

struct StroboscopicReport {
    double beta0 = 0.0;
    std::vector<double> times;
    std::vector<double> deviations;  // ||U_eff - U_exact||_2 at each time
    double max_deviation = 0.0;
};

// Stroboscopic-agreement check: compares effective (order-`order` series) and exact
// rotating-frame propagators from t_i = t0 + k_start tc at the stroboscopic
// times t_i + k tc, k = 1..k_max.
StroboscopicReport verify_stroboscopic(const Envelope& env, const DriveConfig& cfg,
                                       double beta0, int k_max, int order,
                                       int k_start = 0, int steps_per_tc = 256);

}  // namespace xrwa

#endif
