#ifndef XRWA_ERRORANALYSIS_HPP
#define XRWA_ERRORANALYSIS_HPP

#include <string>
#include <vector>

#include "xrwa/drive.hpp"
#include "xrwa/su2.hpp"

namespace xrwa {

// How the three componentwise errors are combined: sum of absolute values
// ("very conservative, constant maximum errors") or root-sum-square.
enum class ErrorPolicy { Conservative, Quadrature };

struct ErrorBudget {
    Vec3 delta_n{};                // componentwise max over the sample grid
    double delta_alpha = 0.0;      // sum_i n_i dn_i / alpha, bounded over grid
    double delta_nhat_norm = 0.0;  // dn/alpha + dalpha |n|/alpha^2
    double delta_alpha_dot = 0.0;  // delta_alpha / t_c
    double delta_nhat_dot = 0.0;   // delta_nhat_norm / t_c
    double delta_Q = 0.0;          // simplified-integrand bound on Q_I
    double delta_Q_II = 0.0;       // delta_Q / t_c (simplified Q_II bound)
};

enum class Verdict { NotSignificant, Marginal, Significant };

std::string to_string(Verdict v);
std::string to_string(ErrorPolicy p);

// Raw comparison data between the effective and exact propagators, sampled
// at the stroboscopic times t_i + k t_c inside [t_lo, t_hi] over a uniform
// beta0 grid.  That is where the effective description is supposed to agree;
// between those times the two n-vectors differ by the micromotion, which is
// not an error of the scheme.  The k = 0 point (alpha = 0, radius t_c/8) is
// excluded from the alpha statistics.
struct ErrorSamples {
    Vec3 delta_n{};
    std::vector<double> alphas;    // |n_eff| at retained sample points
    double norm_err_sum = 0.0;     // sum over samples of ||n_eff| - |n_exact||
    int beta0_points = 0;
    double tc = 0.0;
    double excluded_radius = 0.0;
};

ErrorSamples collect_error_samples(const Envelope& env, const DriveConfig& cfg,
                                   int order, double t_lo, double t_hi,
                                   int beta0_points = 16,
                                   int steps_per_tc = 256);

// Componentwise max |n_eff - n_exact|; convenience over collect_error_samples.
Vec3 measure_delta_n(const Envelope& env, const DriveConfig& cfg, int order,
                     double t_lo, double t_hi, int beta0_points = 16,
                     int steps_per_tc = 256);

// First-order propagation chain.  delta_Q integrates the pointwise norm
// error over t (one stroboscopic sample per Magnus interval, weight t_c,
// integrand dn/t_c) and averages over the gauge angle beta0:
// dQ = (1 / N_beta0) * sum ||n_eff| - |n_exact||.
ErrorBudget propagate_errors(const ErrorSamples& samples, ErrorPolicy policy);

// SIGNIFICANT when improvement > 5 (delta_Q + quad_uncertainty), MARGINAL
// when >= 1x (ties toward MARGINAL), NOT_SIGNIFICANT otherwise.
Verdict significance(double improvement, const ErrorBudget& budget,
                     double quad_uncertainty = 0.0);

}  // namespace xrwa

#endif
