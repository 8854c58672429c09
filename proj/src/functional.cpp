#include "xrwa/functional.hpp"

#include <cmath>
#include <stdexcept>

#include "xrwa/quadrature.hpp"

namespace xrwa {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSmallAlpha = 1e-6;
}

IntegrandKind integrand_kind_from_string(const std::string& s) {
    if (s == "fI") return IntegrandKind::fI;
    if (s == "fI-simple") return IntegrandKind::fI_simplified;
    if (s == "fII") return IntegrandKind::fII;
    if (s == "fII-simple") return IntegrandKind::fII_simplified;
    if (s == "fII-simple-sq") return IntegrandKind::fII_simplified_squared;
    throw std::invalid_argument("unknown integrand: " + s);
}

std::string to_string(IntegrandKind k) {
    switch (k) {
        case IntegrandKind::fI: return "fI";
        case IntegrandKind::fI_simplified: return "fI-simple";
        case IntegrandKind::fII: return "fII";
        case IntegrandKind::fII_simplified: return "fII-simple";
        default: return "fII-simple-sq";
    }
}

double integrand_fI(const Vec3& n, const Vec3& n_dot) {
    const double alpha = n.norm();
    if (alpha < kSmallAlpha) {
        return n_dot.norm();
    }
    const Vec3 nhat = n / alpha;
    const double alpha_dot = nhat.dot(n_dot);
    const Vec3 nhat_dot = (n_dot - alpha_dot * nhat) / alpha;
    const double s = std::sin(alpha);
    return std::sqrt(alpha_dot * alpha_dot + nhat_dot.norm2() * s * s);
}

double integrand_fI_simplified(const Vec3& n_dot) { return n_dot.norm(); }

namespace {

struct FIIParts {
    double alpha, alpha_dot, alpha_ddot;
    Vec3 nhat, nhat_dot, nhat_ddot;
    double a, b, c, d;
    KinematicFrame frame;
};

FIIParts fii_parts(const Vec3& n, const Vec3& n_dot, const Vec3& n_ddot) {
    FIIParts p;
    p.alpha = n.norm();
    p.nhat = n / p.alpha;
    p.alpha_dot = p.nhat.dot(n_dot);
    p.alpha_ddot =
        (n_dot.dot(n_dot) + n.dot(n_ddot) - p.alpha_dot * p.alpha_dot) / p.alpha;
    p.nhat_dot = (n_dot - p.alpha_dot * p.nhat) / p.alpha;
    p.nhat_ddot =
        (n_ddot - p.alpha_ddot * p.nhat - 2.0 * p.alpha_dot * p.nhat_dot) / p.alpha;
    p.frame = unit_kinematics(p.nhat, p.nhat_dot, p.nhat_ddot);
    const double s2 = std::sin(2.0 * p.alpha);
    const double c2 = std::cos(2.0 * p.alpha);
    const double nv = p.frame.n_v;
    p.a = 0.5 * s2;
    p.b = 0.5 * (1.0 - c2);
    p.c = p.alpha_dot * nv * (c2 + 1.0);
    p.d = p.alpha_dot * nv * s2;
    return p;
}

}  // namespace

double integrand_fII(const Vec3& n, const Vec3& n_dot, const Vec3& n_ddot) {
    if (n.norm() < kSmallAlpha) {
        return n_ddot.norm();
    }
    const FIIParts p = fii_parts(n, n_dot, n_ddot);
    Vec3 hdot = p.a * p.nhat_ddot + p.b * p.nhat.cross(p.nhat_ddot) +
                p.alpha_ddot * p.nhat;
    if (!p.frame.degenerate) {
        hdot += p.c * p.frame.nhat_v - p.d * p.frame.nhat_perp;
    }
    return hdot.norm();
}

double integrand_fII_expanded(const Vec3& n, const Vec3& n_dot, const Vec3& n_ddot) {
    if (n.norm() < kSmallAlpha) {
        return n_ddot.norm();
    }
    const FIIParts p = fii_parts(n, n_dot, n_ddot);
    const Vec3 cx = p.nhat.cross(p.nhat_ddot);
    double sq = p.a * p.a * p.nhat_ddot.norm2() + p.b * p.b * cx.norm2() +
                p.alpha_ddot * p.alpha_ddot;
    if (!p.frame.degenerate) {
        sq += p.c * p.c + p.d * p.d;
        sq += 2.0 * (p.a * p.c * p.nhat_ddot.dot(p.frame.nhat_v) -
                     p.a * p.d * p.nhat_ddot.dot(p.frame.nhat_perp) +
                     p.b * p.c * cx.dot(p.frame.nhat_v) -
                     p.b * p.d * cx.dot(p.frame.nhat_perp));
    }
    sq += 2.0 * p.a * p.alpha_ddot * p.nhat_ddot.dot(p.nhat);
    return std::sqrt(std::max(0.0, sq));
}

double integrand_fII_simplified(const Vec3& n_ddot, bool squared) {
    const double m = n_ddot.norm();
    return squared ? m * m : m;
}

Vec3 PropagatedNSource::n(double t, double beta0) {
    auto [track_it, inserted] = tracks_.try_emplace(beta0);
    Track& track = track_it->second;
    const double t_i = beta0 / (2.0 * omega_);
    if (inserted) {
        track.h_fn = family_(beta0);
        track.points.emplace(t_i, Checkpoint{Unitary2::identity(), Vec3{}});
    }
    // Nearest stored checkpoint in time.
    auto after = track.points.lower_bound(t);
    auto nearest = after;
    if (after == track.points.end()) {
        nearest = std::prev(after);
    } else if (after != track.points.begin()) {
        auto before = std::prev(after);
        nearest = (t - before->first <= after->first - t) ? before : after;
    }
    if (nearest->first == t) {
        return nearest->second.n;
    }
    Unitary2 u = nearest->second.u;
    propagate_onto(track.h_fn, nearest->first, t, spec_.steps_per_tc, spec_.tc,
                   spec_.scheme, u);
    const RotationVector n = continue_branch(log_su2(u), nearest->second.n);
    track.points.emplace(t, Checkpoint{u, n.n});
    return n.n;
}

void NSource::derivatives(double, double, Vec3&, Vec3&, Vec3&) {
    throw std::logic_error("NSource: derivatives not provided");
}

namespace {

double eval_integrand(IntegrandKind kind, NSource& src, double t, double beta0,
                      double h) {
    if (src.has_derivatives()) {
        Vec3 n0, nd, ndd;
        src.derivatives(t, beta0, n0, nd, ndd);
        switch (kind) {
            case IntegrandKind::fI: return integrand_fI(n0, nd);
            case IntegrandKind::fI_simplified: return integrand_fI_simplified(nd);
            case IntegrandKind::fII: return integrand_fII(n0, nd, ndd);
            default:
                return integrand_fII_simplified(
                    ndd, kind == IntegrandKind::fII_simplified_squared);
        }
    }
    switch (kind) {
        case IntegrandKind::fI: {
            const Vec3 np = src.n(t + h, beta0);
            const Vec3 nm = src.n(t - h, beta0);
            const Vec3 n0 = src.n(t, beta0);
            return integrand_fI(n0, (np - nm) / (2.0 * h));
        }
        case IntegrandKind::fI_simplified: {
            const Vec3 np = src.n(t + h, beta0);
            const Vec3 nm = src.n(t - h, beta0);
            return integrand_fI_simplified((np - nm) / (2.0 * h));
        }
        case IntegrandKind::fII: {
            const Vec3 np = src.n(t + h, beta0);
            const Vec3 nm = src.n(t - h, beta0);
            const Vec3 n0 = src.n(t, beta0);
            return integrand_fII(n0, (np - nm) / (2.0 * h),
                                 (np - 2.0 * n0 + nm) / (h * h));
        }
        default: {
            const Vec3 np = src.n(t + h, beta0);
            const Vec3 nm = src.n(t - h, beta0);
            const Vec3 n0 = src.n(t, beta0);
            return integrand_fII_simplified(
                (np - 2.0 * n0 + nm) / (h * h),
                kind == IntegrandKind::fII_simplified_squared);
        }
    }
}

}  // namespace

double functional_Q_value(IntegrandKind kind, NSource& source,
                          const QuadratureGrid& grid) {
    if (grid.beta0_points < 16) {
        throw std::invalid_argument("beta0_points must be >= 16");
    }
    const GaussLegendre& gl = gauss_legendre(grid.t_order);
    const double panel_w = (grid.t_hi - grid.t_lo) / grid.t_panels;
    const double beta0_w = 2.0 * kPi / grid.beta0_points;

    double total = 0.0;
    for (int j = 0; j < grid.beta0_points; ++j) {
        const double beta0 = beta0_w * j;
        double q_t = 0.0;
        for (int p = 0; p < grid.t_panels; ++p) {
            const double a = grid.t_lo + p * panel_w;
            for (int i = 0; i < grid.t_order; ++i) {
                const double t = a + 0.5 * panel_w * (1.0 + gl.nodes[i]);
                const double w = 0.5 * panel_w * gl.weights[i];
                q_t += w * eval_integrand(kind, source, t, beta0, grid.fd_step);
            }
        }
        total += beta0_w * q_t;
    }
    return total;
}

FunctionalValue functional_Q(IntegrandKind kind, NSource& source,
                             const QuadratureGrid& grid, bool compute_uncertainty) {
    FunctionalValue out;
    out.grid = grid;
    out.value = functional_Q_value(kind, source, grid);
    if (compute_uncertainty) {
        QuadratureGrid fine = grid;
        fine.beta0_points *= 2;
        fine.t_panels *= 2;
        const double refined = functional_Q_value(kind, source, fine);
        out.quad_uncertainty = std::abs(refined - out.value);
    }
    return out;
}

}  // namespace xrwa
