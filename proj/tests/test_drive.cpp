#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "xrwa/drive.hpp"

using namespace xrwa;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("Gaussian envelope derivatives match finite differences") {
    const Envelope env = Envelope::gaussian(0.002, 4.0 * kPi);
    const double h = 1e-4;
    for (double t : {-20.0, -3.7, 0.0, 1.0, 9.3, 30.0}) {
        for (int k = 0; k + 1 <= 5; ++k) {
            const double fd =
                (env.deriv(t + h, k) - env.deriv(t - h, k)) / (2.0 * h);
            const double scale = std::max(std::abs(env.deriv(t, k + 1)), 1e-12);
            CHECK(std::abs(env.deriv(t, k + 1) - fd) < 1e-6 * scale + 1e-14);
        }
    }
    CHECK(env(0.0) == 0.002);
}

TEST_CASE("constant envelope has vanishing derivatives") {
    const Envelope env = Envelope::constant(0.002);
    CHECK(env.deriv(3.0, 0) == 0.002);
    for (int k = 1; k <= 5; ++k) CHECK(env.deriv(3.0, k) == 0.0);
    CHECK(env.is_constant());
}

TEST_CASE("rotating-frame Hamiltonian components") {
    DriveConfig cfg;  // omega = 1/2, delta = 0, phi = 0
    const Envelope env = Envelope::constant(0.4);
    // At t = 0: h = H1/4 (2, 0, 0).
    const PauliVector h0 = h_rot(cfg, env, 0.0);
    CHECK((h0 - Vec3{0.2, 0.0, 0.0}).norm() < 1e-15);
    // At 2 w t = pi/2: h = H1/4 (1, -1, 0).
    const PauliVector h1 = h_rot(cfg, env, kPi / 2.0);
    CHECK((h1 - Vec3{0.1, -0.1, 0.0}).norm() < 1e-12);

    cfg.delta = 0.06;
    CHECK(h_rot(cfg, env, 0.0).z == doctest::Approx(0.03).epsilon(1e-14));
    cfg.delta = 0.0;
    cfg.phi = 0.7;
    const PauliVector hp = h_rot(cfg, env, 0.0);
    CHECK(hp.x == doctest::Approx(0.1 * 2.0 * std::cos(0.7)).epsilon(1e-13));
    CHECK(hp.y == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("RWA Hamiltonian is the envelope times the fixed axis") {
    DriveConfig cfg;
    const Envelope env = Envelope::gaussian(0.002, 4.0 * kPi);
    const PauliVector h = h_rwa(cfg, env, 3.0);
    CHECK((h - Vec3{env(3.0) / 4.0, 0.0, 0.0}).norm() < 1e-18);
}

TEST_CASE("Bloch-Siegert improved Hamiltonian") {
    const Envelope env = Envelope::constant(0.1);
    const PauliVector h = h_bs_improved(env, 0.0, 0.5);
    CHECK(h.x == doctest::Approx(0.025).epsilon(1e-14));
    CHECK(h.z == doctest::Approx(-0.01 / 16.0).epsilon(1e-12));
}

TEST_CASE("effective series order 0 is the RWA term") {
    const Envelope env = Envelope::gaussian(0.002, 4.0 * kPi);
    for (double t : {-5.0, 0.0, 7.7}) {
        for (double b : {0.0, 1.1, 4.4}) {
            const PauliVector h = h_eff(env, t, b, 0, 0.5);
            CHECK((h - Vec3{env(t) / 4.0, 0.0, 0.0}).norm() < 1e-18);
        }
    }
}

TEST_CASE("generic and constant listings agree for a constant envelope") {
    const Envelope env = Envelope::constant(0.002);
    double worst = 0.0;
    for (int order = 0; order <= kMaxEffOrderGeneric; ++order) {
        for (double b = 0.0; b < 2.0 * kPi; b += 0.393) {
            const PauliVector g = h_eff_generic(env, 1.3, b, order, 0.5);
            const PauliVector c = h_eff_constant(0.002, b, order, 0.5);
            worst = std::max(worst, (g - c).norm());
        }
    }
    CHECK(worst <= 1e-15);
}

TEST_CASE("h_eff dispatches to the constant listing and admits orders 6, 7") {
    const Envelope env = Envelope::constant(0.01);
    const PauliVector a = h_eff(env, 2.0, 0.3, 7, 0.5);
    const PauliVector b = h_eff_constant(0.01, 0.3, 7, 0.5);
    CHECK((a - b).norm() == 0.0);
    CHECK_THROWS(h_eff(Envelope::gaussian(0.01, 1.0), 0.0, 0.0, 6, 0.5));
}

TEST_CASE("term listings respect declared order ranges") {
    for (const EffTerm& t : eff_terms_generic()) {
        CHECK(t.order >= 0);
        CHECK(t.order <= kMaxEffOrderGeneric);
        CHECK(t.den != 0.0);
    }
    for (const EffTerm& t : eff_terms_constant()) {
        CHECK(t.order <= kMaxEffOrderConstant);
        for (int k = 1; k < 6; ++k) CHECK(t.dpow[k] == 0);  // H1 only
    }
}

TEST_CASE("S-symmetry of h_rot and h_eff") {
    DriveConfig cfg;
    const Envelope env = Envelope::gaussian(0.002, 4.0 * kPi);
    std::vector<double> ts, bs;
    for (int i = 1; i <= 12; ++i) ts.push_back(-30.0 + 5.3 * i);
    for (int i = 0; i < 8; ++i) bs.push_back(2.0 * kPi * i / 8.0);

    const SymmetryReport rot = symmetry_check(
        [&](double t, double) { return h_rot(cfg, env, t); }, ts, bs);
    CHECK(rot.max_violation <= 1e-14);

    for (int order : {0, 2, 5}) {
        const SymmetryReport eff = symmetry_check(
            [&](double t, double b) { return h_eff(env, t, b, order, 0.5); },
            ts, bs);
        CHECK(eff.max_violation <= 1e-14);
    }
}

TEST_CASE("constant-envelope |h_eff| is beta0-independent") {
    const Envelope env = Envelope::constant(0.002);
    for (int order : {3, 5, 7}) {
        double lo = 1e300, hi = 0.0;
        for (double b = 0.0; b < 2.0 * kPi; b += 0.1) {
            const double m = h_eff(env, 0.0, b, order, 0.5).norm();
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        CHECK(hi - lo < 1e-2 * std::pow(0.002, 4));
    }
}
