// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Uses the reference drive throughout: A = 0.002, sigma = 4 pi,
// omega = 1/2, gate duration 12 sigma.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <vector>

#include "xrwa/drive.hpp"
#include "xrwa/erroranalysis.hpp"
#include "xrwa/functional.hpp"
#include "xrwa/propagate.hpp"
#include "xrwa/su2.hpp"
#include "xrwa/variational.hpp"

using namespace xrwa;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSigma = 4.0 * kPi;
constexpr double kA = 0.002;
constexpr double kOmega = 0.5;
constexpr double kGate = 12.0 * kSigma;

int failures = 0;

void report(int criterion, bool pass, const char* fmt, ...) {
    if (!pass) ++failures;
    std::printf("CRITERION %d: %s — ", criterion, pass ? "PASS" : "FAIL");
    va_list args;
    va_start(args, fmt);
    std::vprintf(fmt, args);
    va_end(args);
    std::printf("\n");
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

PropagatedNSource effective_source(const Envelope& env, int order) {
    PropagationSpec spec;
    spec.tc = kPi / kOmega;
    return PropagatedNSource(
        [env, order](double beta0) -> HamiltonianFn {
            return [env, order, beta0](double t) {
                return h_eff(env, t, beta0, order, kOmega);
            };
        },
        spec, kOmega);
}

QuadratureGrid full_grid() {
    QuadratureGrid g;
    g.t_lo = -kGate;
    g.t_hi = kGate;
    g.t_panels = 48;
    g.beta0_points = 24;
    return g;
}

// 1. Stroboscopic agreement.
void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const Envelope env = Envelope::gaussian(kA, kSigma);
    DriveConfig cfg;
    double worst = 0.0;
    const int k_half = 24;  // 12 sigma = 24 t_c
    for (double beta0 : {0.0, kPi / 2.0, kPi}) {
        const StroboscopicReport rep =
            verify_stroboscopic(env, cfg, beta0, 2 * k_half, 5, -k_half);
        worst = std::max(worst, rep.max_deviation);
    }
    const double wall = seconds_since(t0);
    report(1, worst <= 1e-6 && wall <= 120.0,
           "max ||U_eff - U_exact||_2 = %.3e (<= 1e-6), %.1f s", worst, wall);
}

// 2. Functional reproduction.
void criterion2() {
    const auto t0 = std::chrono::steady_clock::now();
    const Envelope env = Envelope::gaussian(kA, kSigma);
    PropagatedNSource src = effective_source(env, 5);
    const FunctionalValue q =
        functional_Q(IntegrandKind::fI, src, full_grid(), true);
    const double ref = 0.0991166116;
    const double leading = 2.0 * kPi * kA * kSigma * std::sqrt(2.0 * kPi) / 4.0;
    const double dev_paper = std::abs(q.value - ref);
    const double dev_leading = std::abs(q.value - leading) / leading;
    const double wall = seconds_since(t0);
    report(2, dev_paper <= 1e-4 && dev_leading <= 3e-3 && wall <= 300.0,
           "Q = %.10f, |Q - 0.0991166116| = %.2e (<= 1e-4, stretch 1e-6 %s), "
           "vs leading 0.098963: %.2e rel (<= 3e-3), %.1f s",
           q.value, dev_paper, dev_paper <= 1e-6 ? "met" : "not met",
           dev_leading, wall);
}

// 3. Refutation experiment (shared error bound computed once).
void criterion3(const ErrorBudget& budget) {
    const auto t0 = std::chrono::steady_clock::now();
    const Envelope env = Envelope::gaussian(kA, kSigma);
    PropagatedNSource src = effective_source(env, 5);

    double improvements[2] = {0.0, 0.0};
    Verdict verdicts[2] = {Verdict::NotSignificant, Verdict::NotSignificant};
    for (int run = 0; run < 2; ++run) {
        const int mn = run + 1;
        VariationalProblem prob;
        prob.kind = IntegrandKind::fI;
        prob.grid = full_grid();
        prob.base = &src;
        prob.shape = TrialParams::zero(mn, mn, kSigma, kOmega);
        prob.symmetry = true;
        MinimizeConfig cfg;
        cfg.max_iters = 120;
        const MinimizeResult res = minimize(prob, cfg, prob.shape);
        improvements[run] = res.improvement;
        verdicts[run] = significance(res.improvement, budget);
    }
    const double wall = seconds_since(t0);
    const bool pass = improvements[0] >= 5e-7 && improvements[1] >= 1.5e-6 &&
                      improvements[0] >= 5.0 * budget.delta_Q &&
                      improvements[1] >= 5.0 * budget.delta_Q &&
                      verdicts[0] == Verdict::Significant &&
                      verdicts[1] == Verdict::Significant && wall <= 1800.0;
    report(3, pass,
           "improvement M=N=1: %.3e (>= 5e-7), M=N=2: %.3e (>= 1.5e-6), "
           "bound dQ = %.3e, verdicts %s/%s, %.0f s",
           improvements[0], improvements[1], budget.delta_Q,
           to_string(verdicts[0]).c_str(), to_string(verdicts[1]).c_str(),
           wall);
}

// 4. Error budget reproduction.
void criterion4(const ErrorSamples& samples, const ErrorBudget& budget) {
    const Vec3 ref{1.84e-8, 1.74e-8, 1.09e-8};
    // One-sided below: the reference values stem from an A^3-truncated
    // comparison propagator, so an error smaller than the table is a pass.
    bool dn_ok = true;
    for (int i = 0; i < 3; ++i) {
        dn_ok = dn_ok && samples.delta_n[i] <= 3.0 * ref[i];
    }
    const bool dq_ok =
        budget.delta_Q <= 2.0 * 1.06e-7 && budget.delta_Q >= 1.06e-7 / 2.0;
    report(4, dn_ok && dq_ok,
           "delta_n = (%.2e, %.2e, %.2e) vs (1.84e-8, 1.74e-8, 1.09e-8) "
           "within 3x: %s; dQ_I = %.3e vs 1.06e-7 within 2x: %s",
           samples.delta_n.x, samples.delta_n.y, samples.delta_n.z,
           dn_ok ? "yes" : "no", budget.delta_Q, dq_ok ? "yes" : "no");
}

// 5. Constant-drive degeneracy.
void criterion5() {
    const Envelope env = Envelope::constant(kA);
    const double T = 8.0 * kPi;
    AnalyticNSource src(
        [&](double t, double b) {
            return (t - b / (2.0 * kOmega)) * h_eff(env, t, b, 5, kOmega);
        },
        [&](double t, double b) { return h_eff(env, t, b, 5, kOmega); },
        [](double, double) { return Vec3{}; });
    QuadratureGrid grid;
    grid.t_lo = 0.0;
    grid.t_hi = T;
    grid.t_panels = 4;
    grid.beta0_points = 16;

    const double c_tilde = h_eff(env, 0.0, 0.0, 5, kOmega).norm();
    const double q1 = functional_Q_value(IntegrandKind::fI, src, grid);
    const double rel = std::abs(q1 - 2.0 * kPi * T * c_tilde) / q1;
    const double q2 = functional_Q_value(IntegrandKind::fII, src, grid);
    double beta0_spread = 0.0;
    for (double b = 0.0; b < 2.0 * kPi; b += 0.05) {
        beta0_spread = std::max(
            beta0_spread, std::abs(h_eff(env, 0.0, b, 5, kOmega).norm() - c_tilde));
    }
    const double a4 = std::pow(kA, 4);
    report(5, rel <= 1e-10 && q2 <= 1e-12 && beta0_spread <= a4,
           "Q(fI) vs 2 pi T c: %.2e rel (<= 1e-10), Q(fII) = %.2e (<= 1e-12), "
           "beta0 spread of |h_eff| = %.2e (<= A^4 = %.2e)",
           rel, q2, beta0_spread, a4);
}

// 6. Property suites.
void criterion6() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(9001);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const auto rvec = [&](double s) { return Vec3{d(rng) * s, d(rng) * s, d(rng) * s}; };
    bool ok = true;
    char detail[256] = "all bounds met";

    // SU(2) round trip <= 1e-11.
    for (int i = 0; i < 200 && ok; ++i) {
        Vec3 n = rvec(1.0);
        n = n / std::max(n.norm(), 1e-9) * (1e-3 + 3.0 * std::abs(d(rng)));
        if (n.norm() >= kPi - 1e-3) continue;
        if ((log_su2(exp_su2(n)).n - n).norm() > 1e-11) {
            ok = false;
            std::snprintf(detail, sizeof(detail), "su2 round trip");
        }
    }
    // dexp vs finite differences <= 1e-7 relative.
    for (int i = 0; i < 50 && ok; ++i) {
        const Vec3 c0 = rvec(0.8), c1 = rvec(0.5);
        const auto n_of = [&](double t) { return c0 + c1 * std::sin(t); };
        const double t = d(rng), h = 1e-6;
        const Vec3 nd = (n_of(t + h) - n_of(t - h)) / (2.0 * h);
        const Vec3 hv = dexp_hamiltonian(RotationVector(n_of(t)), nd);
        const Unitary2 u = exp_su2(n_of(t));
        const Unitary2 du = exp_su2(n_of(t + h)) - exp_su2(n_of(t - h));
        const std::complex<double> io(0.0, 1.0 / (2.0 * h));
        const Unitary2 ud = u.dagger();
        const Vec3 fd{std::real(io * (du.a * ud.b + du.b * ud.d)),
                      -std::imag(io * (du.a * ud.b + du.b * ud.d)),
                      std::real(io * (du.a * ud.a + du.b * ud.c))};
        if ((hv - fd).norm() > 1e-7 * std::max(1.0, hv.norm())) {
            ok = false;
            std::snprintf(detail, sizeof(detail), "dexp vs fd");
        }
    }
    // fI == positive eigenvalue of dexp <= 1e-12.
    for (int i = 0; i < 200 && ok; ++i) {
        const Vec3 n = rvec(1.4), nd = rvec(1.0);
        const double a = integrand_fI(n, nd);
        const double b = positive_eigenvalue(dexp_hamiltonian(RotationVector(n), nd));
        if (std::abs(a - b) > 1e-12 * std::max(1.0, b)) {
            ok = false;
            std::snprintf(detail, sizeof(detail), "fI vs dexp eigenvalue");
        }
    }
    // Magnus h1 = h2 = 0 for commuting families <= 1e-12.
    {
        const Vec3 axis = rvec(1.0);
        const MagnusTerms m = magnus_terms(
            [&](double t) { return axis * std::cos(0.7 * t); }, 0.3, 5.0);
        if (m.h1.norm() > 1e-12 || m.h2.norm() > 1e-12) {
            ok = false;
            std::snprintf(detail, sizeof(detail), "magnus commuting family");
        }
    }
    // Generic/constant listing agreement <= 1e-15.
    {
        const Envelope env = Envelope::constant(kA);
        for (int order = 0; order <= 5; ++order) {
            for (double b = 0.0; b < 2 * kPi; b += 0.5) {
                if ((h_eff_generic(env, 0.7, b, order, kOmega) -
                     h_eff_constant(kA, b, order, kOmega))
                        .norm() > 1e-15) {
                    ok = false;
                    std::snprintf(detail, sizeof(detail), "listing agreement");
                }
            }
        }
    }
    // S-symmetry of h_rot and h_eff <= 1e-14.
    {
        const Envelope env = Envelope::gaussian(kA, kSigma);
        DriveConfig cfg;
        std::vector<double> ts, bs;
        for (int i = 0; i < 10; ++i) ts.push_back(-30.0 + 6.7 * i);
        for (int i = 0; i < 8; ++i) bs.push_back(2.0 * kPi * i / 8.0);
        const SymmetryReport rot = symmetry_check(
            [&](double t, double) { return h_rot(cfg, env, t); }, ts, bs);
        const SymmetryReport eff = symmetry_check(
            [&](double t, double b) { return h_eff(env, t, b, 5, kOmega); }, ts,
            bs);
        if (rot.max_violation > 1e-14 || eff.max_violation > 1e-14) {
            ok = false;
            std::snprintf(detail, sizeof(detail), "S-symmetry");
        }
    }
    // Trial-function stroboscopic zeros <= 1e-13.
    {
        TrialParams p = TrialParams::zero(2, 2, kSigma);
        p.phi = 1e-7;
        p.c = 0.2;
        for (double& v : p.a) v = d(rng);
        for (double& v : p.bp) v = d(rng);
        for (int k = -24; k <= 24 && ok; ++k) {
            const double b = 1.1;
            if (trial_delta_n(b + 2.0 * kPi * k, b, p).norm() > 1e-13) {
                ok = false;
                std::snprintf(detail, sizeof(detail), "trial stroboscopic zeros");
            }
        }
    }
    // Outer-factor derivative formulas vs finite differences <= 1e-7.
    for (int i = 0; i < 50 && ok; ++i) {
        TrialParams p = TrialParams::zero(0, 0, kSigma);
        p.phi = 1e-7 * d(rng);
        p.c = 0.4 * d(rng);
        const double t = 30.0 * d(rng), b = kPi * (d(rng) + 1.0), h = 1e-5;
        const OuterFactor o = outer_factor(t, b, p);
        const double fp = (outer_factor(t + h, b, p).f -
                           outer_factor(t - h, b, p).f) /
                          (2.0 * h);
        if (std::abs(o.fp - fp) > 1e-7 * std::max(1.0, std::abs(o.fp))) {
            ok = false;
            std::snprintf(detail, sizeof(detail), "outer factor derivatives");
        }
    }
    const double wall = seconds_since(t0);
    report(6, ok && wall <= 60.0, "%s, %.1f s", detail, wall);
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    // The error budget backs both criterion 3 (significance) and 4.
    const Envelope env = Envelope::gaussian(kA, kSigma);
    DriveConfig cfg;
    const ErrorSamples samples =
        collect_error_samples(env, cfg, 5, -kGate, kGate, 16, 256);
    const ErrorBudget budget =
        propagate_errors(samples, ErrorPolicy::Conservative);
    criterion3(budget);
    criterion4(samples, budget);
    criterion5();
    criterion6();
    return failures == 0 ? 0 : 1;
}
