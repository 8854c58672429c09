#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "xrwa/drive.hpp"
#include "xrwa/variational.hpp"

using namespace xrwa;

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSigma = 4.0 * kPi;

std::mt19937 rng(424242);

TrialParams random_params(int M, int N) {
    TrialParams p = TrialParams::zero(M, N, kSigma);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    p.phi = 1e-7 * d(rng);
    p.c = 0.3 * d(rng);
    for (auto* blk : {&p.a, &p.ap, &p.b, &p.bp}) {
        for (double& v : *blk) v = d(rng);
    }
    return p;
}
}  // namespace

TEST_CASE("flatten / unflatten round trip") {
    const TrialParams p = random_params(2, 3);
    const std::vector<double> v = p.flatten();
    REQUIRE(v.size() == 2 + 12 * 3 * 4);
    const TrialParams q = TrialParams::unflatten(v, p);
    CHECK(q.phi == doctest::Approx(p.phi).epsilon(1e-14));
    CHECK(q.c == p.c);
    CHECK(q.a == p.a);
    CHECK(q.ap == p.ap);
    CHECK(q.b == p.b);
    CHECK(q.bp == p.bp);
    // phi is stored scaled by eta in the flat vector.
    CHECK(v[0] == doctest::Approx(p.eta * p.phi).epsilon(1e-14));
}

TEST_CASE("outer factor vanishes at every stroboscopic time") {
    for (int rep = 0; rep < 20; ++rep) {
        const TrialParams p = random_params(1, 1);
        std::uniform_real_distribution<double> bd(0.0, 2.0 * kPi);
        const double beta0 = bd(rng);
        for (int k = -24; k <= 24; ++k) {
            const double t = beta0 + 2.0 * kPi * k;  // t_i + k t_c at omega=1/2
            CHECK(std::abs(outer_factor(t, beta0, p).f) <= 1e-13);
            CHECK(trial_delta_n(t, beta0, p).norm() <= 1e-13);
        }
    }
}

TEST_CASE("outer factor derivatives match finite differences") {
    const double h = 1e-5;
    for (int rep = 0; rep < 50; ++rep) {
        const TrialParams p = random_params(0, 0);
        std::uniform_real_distribution<double> td(-30.0, 30.0), bd(0.0, 2.0 * kPi);
        const double t = td(rng), b = bd(rng);
        const OuterFactor o = outer_factor(t, b, p);
        const double fp_fd =
            (outer_factor(t + h, b, p).f - outer_factor(t - h, b, p).f) / (2.0 * h);
        const double fpp_fd = (outer_factor(t + h, b, p).f - 2.0 * o.f +
                               outer_factor(t - h, b, p).f) /
                              (h * h);
        CHECK(std::abs(o.fp - fp_fd) <= 1e-7 * std::max(1.0, std::abs(o.fp)));
        CHECK(std::abs(o.fpp - fpp_fd) <= 1e-5 * std::max(1.0, std::abs(o.fpp)));
    }
}

TEST_CASE("trial perturbation is 2 pi periodic in beta0") {
    const TrialParams p = random_params(2, 2);
    for (double t : {-11.0, 0.3, 7.9}) {
        for (double b : {0.0, 1.7, 5.5}) {
            const Vec3 d =
                trial_delta_n(t, b, p) - trial_delta_n(t, b + 2.0 * kPi, p);
            CHECK(d.norm() <= 1e-12);
        }
    }
}

TEST_CASE("zero coefficients give zero perturbation") {
    TrialParams p = TrialParams::zero(1, 2, kSigma);
    p.phi = 3e-7;
    p.c = 0.2;
    CHECK(trial_delta_n(1.234, 0.77, p).norm() == 0.0);
}

TEST_CASE("symmetry mask zeroes the right blocks") {
    const TrialParams p = random_params(1, 1);
    const TrialParams m = apply_symmetry_mask(p);
    for (int mm = 0; mm <= 1; ++mm) {
        for (int n = 0; n <= 1; ++n) {
            for (int i : {0, 2}) {  // S-odd components keep a', b
                CHECK(m.a[p.idx(i, mm, n)] == 0.0);
                CHECK(m.bp[p.idx(i, mm, n)] == 0.0);
                CHECK(m.ap[p.idx(i, mm, n)] == p.ap[p.idx(i, mm, n)]);
                CHECK(m.b[p.idx(i, mm, n)] == p.b[p.idx(i, mm, n)]);
            }
            CHECK(m.ap[p.idx(1, mm, n)] == 0.0);  // S-even component keeps a, b'
            CHECK(m.b[p.idx(1, mm, n)] == 0.0);
            CHECK(m.a[p.idx(1, mm, n)] == p.a[p.idx(1, mm, n)]);
            CHECK(m.bp[p.idx(1, mm, n)] == p.bp[p.idx(1, mm, n)]);
        }
    }
    // Idempotent, and zero maps to zero.
    const TrialParams z = apply_symmetry_mask(TrialParams::zero(1, 1, kSigma));
    for (double v : z.a) CHECK(v == 0.0);
    for (double v : z.ap) CHECK(v == 0.0);
}

TEST_CASE("masked perturbation has the required S-parity") {
    TrialParams p = random_params(2, 2);
    p.phi = 0.0;  // S-compatible phase
    const TrialParams m = apply_symmetry_mask(p);
    for (double t : {0.9, 4.1, -13.0}) {
        for (double b : {0.4, 2.2, 5.0}) {
            const Vec3 fwd = trial_delta_n(t, b, m);
            const Vec3 rev = trial_delta_n(-t, -b, m);
            CHECK(std::abs(fwd.x + rev.x) <= 1e-12);
            CHECK(std::abs(fwd.z + rev.z) <= 1e-12);
            CHECK(std::abs(fwd.y - rev.y) <= 1e-12);
        }
    }
}

TEST_CASE("free-coordinate mask matches the block structure") {
    const TrialParams like = TrialParams::zero(1, 1, kSigma);
    const std::vector<bool> free = symmetry_free_mask(like);
    REQUIRE(free.size() == 2 + 12 * 4);
    CHECK(free[0]);
    CHECK(free[1]);
    int live = 0;
    for (std::size_t i = 2; i < free.size(); ++i) live += free[i] ? 1 : 0;
    CHECK(live == 6 * 4);  // half of the 12 blocks survive
}

TEST_CASE("objective at zero parameters is the unperturbed Q") {
    const Envelope env = Envelope::gaussian(0.002, kSigma);
    PropagationSpec spec;
    PropagatedNSource base(
        [env](double beta0) -> HamiltonianFn {
            return [env, beta0](double t) {
                return h_eff(env, t, beta0, 5, 0.5);
            };
        },
        spec, 0.5);

    VariationalProblem prob;
    prob.base = &base;
    prob.shape = TrialParams::zero(1, 1, kSigma);
    prob.grid.t_lo = -4.0 * kPi;
    prob.grid.t_hi = 4.0 * kPi;
    prob.grid.t_panels = 4;
    prob.grid.beta0_points = 16;

    const std::vector<double> zero = prob.shape.flatten();
    const double q0 = objective(zero, prob);
    const double q0_again = functional_Q_value(prob.kind, base, prob.grid);
    CHECK(q0 == doctest::Approx(q0_again).epsilon(1e-12));

    // A tiny perturbation moves the objective by a finite, small amount.
    std::vector<double> x = zero;
    x[2] = 1e-6;
    const double q1 = objective(x, prob);
    CHECK(q1 != q0);
    CHECK(std::abs(q1 - q0) < 1e-4);
}

TEST_CASE("minimizer improves a short run and tracks best-so-far") {
    const Envelope env = Envelope::gaussian(0.002, kSigma);
    PropagationSpec spec;
    PropagatedNSource base(
        [env](double beta0) -> HamiltonianFn {
            return [env, beta0](double t) {
                return h_eff(env, t, beta0, 5, 0.5);
            };
        },
        spec, 0.5);

    VariationalProblem prob;
    prob.base = &base;
    prob.shape = TrialParams::zero(0, 0, kSigma);
    prob.symmetry = true;
    prob.grid.t_lo = -4.0 * kPi;
    prob.grid.t_hi = 4.0 * kPi;
    prob.grid.t_panels = 4;
    prob.grid.beta0_points = 16;

    MinimizeConfig cfg;
    cfg.max_iters = 8;
    const MinimizeResult res = minimize(prob, cfg, prob.shape);
    CHECK(res.improvement >= 0.0);
    CHECK(res.Q_final.value <= res.Q_start.value);
    CHECK(res.evaluations > 0);

    // The simplex alternative also never worsens the start.
    MinimizeConfig scfg;
    scfg.algorithm = MinimizeAlgorithm::Simplex;
    scfg.max_iters = 5;
    const MinimizeResult sres = minimize(prob, scfg, prob.shape);
    CHECK(sres.improvement >= 0.0);
}
