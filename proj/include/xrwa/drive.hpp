#ifndef XRWA_DRIVE_HPP
#define XRWA_DRIVE_HPP

#include <array>
#include <functional>
#include <stdexcept>
#include <vector>

#include "xrwa/su2.hpp"

namespace xrwa {

// Analytic drive envelope H1(t) with exact derivatives up to order 5.
struct Envelope {
    enum class Kind { Gaussian, Constant };
    Kind kind = Kind::Constant;
    double A = 0.0;      // peak amplitude (both kinds)
    double sigma = 1.0;  // width (Gaussian only)

    static Envelope gaussian(double amplitude, double width);
    static Envelope constant(double amplitude);

    // k-th derivative of H1 at t, 0 <= k <= 5.
    double deriv(double t, int k) const;
    double operator()(double t) const { return deriv(t, 0); }

    bool is_constant() const { return kind == Kind::Constant; }
};

struct DriveConfig {
    double omega = 0.5;  // drive angular frequency, > 0
    double delta = 0.0;  // detuning
    double phi = 0.0;    // phase offset

    double tc() const { return 3.14159265358979323846 / omega; }
};

// Rotating-frame Hamiltonian:
//   h = H1/4 [ (cos phi + cos(2 w t + phi)), (sin phi - sin(2 w t + phi)), 0 ]
//       + (0, 0, delta/2)
PauliVector h_rot(const DriveConfig& cfg, const Envelope& env, double t);

// RWA Hamiltonian: h = H1/4 (cos phi, sin phi, 0) + (0, 0, delta/2).
PauliVector h_rwa(const DriveConfig& cfg, const Envelope& env, double t);

// Bloch-Siegert-improved Hamiltonian (resonant, phi = 0):
//   h = (H1/4, 0, -H1^2/(32 w)).
PauliVector h_bs_improved(const Envelope& env, double t, double omega);

// One monomial term of the effective-Hamiltonian series:
//   coeff * prod_k H1^(k)(t)^dpow[k] / omega^order * trig(m beta0)  on `axis`.
// The tables below transcribe the printed listings term by term so that
// tests can diff them against the source coefficients.
struct EffTerm {
    int order;                 // power of 1/omega
    int axis;                  // 0 = x, 1 = y, 2 = z
    double num, den;           // rational coefficient num/den
    int m;                     // harmonic in beta0
    bool is_sin;               // sin(m beta0) instead of cos(m beta0)
    std::array<int, 6> dpow;   // powers of H1, H1', ..., H1^(5)
};

const std::vector<EffTerm>& eff_terms_generic();   // orders 0..5
const std::vector<EffTerm>& eff_terms_constant();  // orders 0..7, H1 only

constexpr int kMaxEffOrderGeneric = 5;
constexpr int kMaxEffOrderConstant = 7;

// Effective Hamiltonian summed through `order` (resonant, phi = 0).
// Dispatches to the constant-envelope listing when the envelope is constant
// (which also admits orders 6 and 7); generic envelopes cap at order 5.
PauliVector h_eff(const Envelope& env, double t, double beta0, int order, double omega);

// The two listings evaluated explicitly, for cross-checks.
PauliVector h_eff_generic(const Envelope& env, double t, double beta0, int order, double omega);
PauliVector h_eff_constant(double H1, double beta0, int order, double omega);

// Time-reversal symmetry S: (t, beta0) -> (-t, -beta0).  For a symmetric
// envelope, h_x and h_z must be S-even and h_y S-odd.
struct SymmetryReport {
    double max_violation = 0.0;
    double t_worst = 0.0, beta0_worst = 0.0;
    int axis_worst = 0;
};

SymmetryReport symmetry_check(const std::function<PauliVector(double, double)>& h_fn,
                              const std::vector<double>& t_samples,
                              const std::vector<double>& beta0_samples);

}  // namespace xrwa

#endif
