#include "xrwa/erroranalysis.hpp"

#include <cmath>
#include <stdexcept>

#include "xrwa/propagate.hpp"

namespace xrwa {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::Significant: return "SIGNIFICANT";
        case Verdict::Marginal: return "MARGINAL";
        default: return "NOT_SIGNIFICANT";
    }
}

std::string to_string(ErrorPolicy p) {
    return p == ErrorPolicy::Conservative ? "conservative" : "quadrature";
}

ErrorSamples collect_error_samples(const Envelope& env, const DriveConfig& cfg,
                                   int order, double t_lo, double t_hi,
                                   int beta0_points, int steps_per_tc) {
    if (beta0_points < 1 || t_hi <= t_lo) {
        throw std::invalid_argument("collect_error_samples: bad grid");
    }
    const double tc = cfg.tc();
    ErrorSamples out;
    out.beta0_points = beta0_points;
    out.tc = tc;
    out.excluded_radius = tc / 8.0;

    for (int j = 0; j < beta0_points; ++j) {
        const double beta0 = 2.0 * kPi * j / beta0_points;
        const double t_i = beta0 / (2.0 * cfg.omega);
        const HamiltonianFn h_ex = [&env, &cfg](double t) {
            return h_rot(cfg, env, t);
        };
        const HamiltonianFn h_ef = [&env, &cfg, beta0, order](double t) {
            return h_eff(env, t, beta0, order, cfg.omega);
        };
        const int k_min = static_cast<int>(std::ceil((t_lo - t_i) / tc - 1e-12));
        const int k_max = static_cast<int>(std::floor((t_hi - t_i) / tc + 1e-12));

        for (const int dir : {+1, -1}) {
            Unitary2 u_ex = Unitary2::identity();
            Unitary2 u_ef = Unitary2::identity();
            Vec3 prev_ex{}, prev_ef{};
            const int k_end = dir > 0 ? k_max : -k_min;
            for (int kk = 1; kk <= k_end; ++kk) {
                const int k = dir * kk;
                const double ta = t_i + (k - dir) * tc;
                const double tb = t_i + k * tc;
                propagate_onto(h_ex, ta, tb, steps_per_tc, tc,
                               Scheme::CommutatorFree4, u_ex);
                propagate_onto(h_ef, ta, tb, steps_per_tc, tc,
                               Scheme::CommutatorFree4, u_ef);
                const Vec3 n_ex = continue_branch(log_su2(u_ex), prev_ex).n;
                const Vec3 n_ef = continue_branch(log_su2(u_ef), prev_ef).n;
                prev_ex = n_ex;
                prev_ef = n_ef;
                for (int i = 0; i < 3; ++i) {
                    out.delta_n[i] =
                        std::max(out.delta_n[i], std::abs(n_ef[i] - n_ex[i]));
                }
                out.norm_err_sum += std::abs(n_ef.norm() - n_ex.norm());
                out.alphas.push_back(n_ef.norm());
            }
        }
    }
    return out;
}

Vec3 measure_delta_n(const Envelope& env, const DriveConfig& cfg, int order,
                     double t_lo, double t_hi, int beta0_points,
                     int steps_per_tc) {
    return collect_error_samples(env, cfg, order, t_lo, t_hi, beta0_points,
                                 steps_per_tc)
        .delta_n;
}

ErrorBudget propagate_errors(const ErrorSamples& s, ErrorPolicy policy) {
    ErrorBudget b;
    b.delta_n = s.delta_n;
    const Vec3& d = s.delta_n;
    const double combined =
        policy == ErrorPolicy::Conservative
            ? std::abs(d.x) + std::abs(d.y) + std::abs(d.z)
            : d.norm();
    // |n_i / alpha| <= 1 bounds the projection in Delta alpha.
    b.delta_alpha = combined;
    // alphas already exclude the k = 0 neighborhood where alpha = 0.
    double alpha_min = 0.0;
    for (double a : s.alphas) {
        if (a > 0.0 && (alpha_min == 0.0 || a < alpha_min)) alpha_min = a;
    }
    if (combined > 0.0 && alpha_min > 0.0) {
        b.delta_nhat_norm = combined / alpha_min + b.delta_alpha / alpha_min;
    }
    if (s.tc > 0.0) {
        b.delta_alpha_dot = b.delta_alpha / s.tc;
        b.delta_nhat_dot = b.delta_nhat_norm / s.tc;
        b.delta_Q = s.norm_err_sum / s.beta0_points;
        b.delta_Q_II = b.delta_Q / s.tc;
    }
    return b;
}

Verdict significance(double improvement, const ErrorBudget& budget,
                     double quad_uncertainty) {
    const double bound = budget.delta_Q + quad_uncertainty;
    if (improvement <= 0.0) return Verdict::NotSignificant;
    if (improvement > 5.0 * bound) return Verdict::Significant;
    if (improvement >= bound) return Verdict::Marginal;
    return Verdict::NotSignificant;
}

}  // namespace xrwa
