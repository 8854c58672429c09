#include "xrwa/drive.hpp"

#include <cmath>

namespace xrwa {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Envelope Envelope::gaussian(double amplitude, double width) {
    if (amplitude <= 0.0 || width <= 0.0) {
        throw std::invalid_argument("gaussian envelope requires A > 0 and sigma > 0");
    }
    Envelope e;
    e.kind = Kind::Gaussian;
    e.A = amplitude;
    e.sigma = width;
    return e;
}

Envelope Envelope::constant(double amplitude) {
    Envelope e;
    e.kind = Kind::Constant;
    e.A = amplitude;
    return e;
}

double Envelope::deriv(double t, int k) const {
    if (k < 0 || k > 5) {
        throw std::invalid_argument("envelope derivative order must be in [0, 5]");
    }
    if (kind == Kind::Constant) {
        return k == 0 ? A : 0.0;
    }
    const double u = t / sigma;
    const double g = A * std::exp(-0.5 * u * u);
    // d^k/dt^k e^{-t^2/2s^2} = (-1)^k He_k(t/s) e^{-t^2/2s^2} / s^k
    // with He_k the probabilists' Hermite polynomials.
    double p;
    switch (k) {
        case 0: p = 1.0; break;
        case 1: p = -u; break;
        case 2: p = u * u - 1.0; break;
        case 3: p = -(u * u * u - 3.0 * u); break;
        case 4: p = (u * u * (u * u - 6.0) + 3.0); break;
        default: p = -(u * u * u * u * u - 10.0 * u * u * u + 15.0 * u); break;
    }
    double sk = 1.0;
    for (int i = 0; i < k; ++i) sk *= sigma;
    return g * p / sk;
}

PauliVector h_rot(const DriveConfig& cfg, const Envelope& env, double t) {
    const double h1 = env(t);
    const double ph = 2.0 * cfg.omega * t + cfg.phi;
    return {h1 / 4.0 * (std::cos(cfg.phi) + std::cos(ph)),
            h1 / 4.0 * (std::sin(cfg.phi) - std::sin(ph)),
            cfg.delta / 2.0};
}

PauliVector h_rwa(const DriveConfig& cfg, const Envelope& env, double t) {
    const double h1 = env(t);
    return {h1 / 4.0 * std::cos(cfg.phi), h1 / 4.0 * std::sin(cfg.phi), cfg.delta / 2.0};
}

PauliVector h_bs_improved(const Envelope& env, double t, double omega) {
    const double h1 = env(t);
    return {h1 / 4.0, 0.0, -h1 * h1 / (32.0 * omega)};
}

namespace {

// Shorthand for building the term tables.  dpow lists powers of
// H1, H1', H1'', H1''', H1^(4), H1^(5).
EffTerm T(int order, int axis, double num, double den, int m, bool is_sin,
          std::array<int, 6> dpow) {
    return EffTerm{order, axis, num, den, m, is_sin, dpow};
}

constexpr int X = 0, Y = 1, Z = 2;
constexpr bool SIN = true, COS = false;

std::vector<EffTerm> build_generic() {
    std::vector<EffTerm> v;
    // order 0: H_RWA = H1/4 sigma_x
    v.push_back(T(0, X, 1, 4, 0, COS, {1, 0, 0, 0, 0, 0}));
    // order 1
    v.push_back(T(1, Z, 1, 32, 0, COS, {2, 0, 0, 0, 0, 0}));
    v.push_back(T(1, Z, -2, 32, 1, COS, {2, 0, 0, 0, 0, 0}));
    v.push_back(T(1, X, 1, 8, 1, SIN, {0, 1, 0, 0, 0, 0}));
    v.push_back(T(1, Y, 1, 8, 1, COS, {0, 1, 0, 0, 0, 0}));
    // order 2
    v.push_back(T(2, X, -2, 256, 0, COS, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, X, 2, 256, 1, COS, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, X, -1, 256, 2, COS, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, Y, 2, 256, 1, SIN, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, Y, 1, 256, 2, SIN, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, Z, 3, 32, 1, SIN, {1, 1, 0, 0, 0, 0}));
    v.push_back(T(2, X, 1, 16, 1, COS, {0, 0, 1, 0, 0, 0}));
    v.push_back(T(2, Y, -1, 16, 1, SIN, {0, 0, 1, 0, 0, 0}));
    // order 3
    v.push_back(T(3, Z, 1, 2048, 0, COS, {4, 0, 0, 0, 0, 0}));
    v.push_back(T(3, Z, -2, 2048, 1, COS, {4, 0, 0, 0, 0, 0}));
    v.push_back(T(3, Z, -3, 2048, 2, COS, {4, 0, 0, 0, 0, 0}));
    v.push_back(T(3, X, -12, 1024, 1, SIN, {2, 1, 0, 0, 0, 0}));
    v.push_back(T(3, X, 9, 1024, 2, SIN, {2, 1, 0, 0, 0, 0}));
    v.push_back(T(3, Y, -8, 1024, 0, COS, {2, 1, 0, 0, 0, 0}));
    v.push_back(T(3, Y, 36, 1024, 1, COS, {2, 1, 0, 0, 0, 0}));
    v.push_back(T(3, Y, 9, 1024, 2, COS, {2, 1, 0, 0, 0, 0}));
    v.push_back(T(3, Z, 1, 128, 0, COS, {0, 2, 0, 0, 0, 0}));
    v.push_back(T(3, Z, 6, 128, 1, COS, {0, 2, 0, 0, 0, 0}));
    v.push_back(T(3, Z, -1, 64, 0, COS, {1, 0, 1, 0, 0, 0}));
    v.push_back(T(3, Z, 4, 64, 1, COS, {1, 0, 1, 0, 0, 0}));
    v.push_back(T(3, X, -1, 32, 1, SIN, {0, 0, 0, 1, 0, 0}));
    v.push_back(T(3, Y, -1, 32, 1, COS, {0, 0, 0, 1, 0, 0}));
    // order 4
    v.push_back(T(4, X, -9, 16384, 0, COS, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, X, 5, 16384, 1, COS, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, X, -1, 16384, 2, COS, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, X, -1, 16384, 3, COS, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, Y, 5, 16384, 1, SIN, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, Y, 4, 16384, 2, SIN, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, Y, 1, 16384, 3, SIN, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, Z, 90, 8192, 1, SIN, {3, 1, 0, 0, 0, 0}));
    v.push_back(T(4, Z, 45, 8192, 2, SIN, {3, 1, 0, 0, 0, 0}));
    v.push_back(T(4, X, -20, 2048, 1, COS, {1, 2, 0, 0, 0, 0}));
    v.push_back(T(4, X, 15, 2048, 2, COS, {1, 2, 0, 0, 0, 0}));
    v.push_back(T(4, Y, -100, 2048, 1, SIN, {1, 2, 0, 0, 0, 0}));
    v.push_back(T(4, Y, -15, 2048, 2, SIN, {1, 2, 0, 0, 0, 0}));
    v.push_back(T(4, X, 40, 4096, 0, COS, {2, 0, 1, 0, 0, 0}));
    v.push_back(T(4, X, -40, 4096, 1, COS, {2, 0, 1, 0, 0, 0}));
    v.push_back(T(4, X, 25, 4096, 2, COS, {2, 0, 1, 0, 0, 0}));
    v.push_back(T(4, Y, -120, 4096, 1, SIN, {2, 0, 1, 0, 0, 0}));
    v.push_back(T(4, Y, -25, 4096, 2, SIN, {2, 0, 1, 0, 0, 0}));
    v.push_back(T(4, Z, -5, 64, 1, SIN, {0, 1, 1, 0, 0, 0}));
    v.push_back(T(4, Z, -5, 128, 1, SIN, {1, 0, 0, 1, 0, 0}));
    v.push_back(T(4, X, -1, 64, 1, COS, {0, 0, 0, 0, 1, 0}));
    v.push_back(T(4, Y, 1, 64, 1, SIN, {0, 0, 0, 0, 1, 0}));
    // order 5
    v.push_back(T(5, Z, -9, 786432, 0, COS, {6, 0, 0, 0, 0, 0}));
    v.push_back(T(5, Z, 18, 786432, 1, COS, {6, 0, 0, 0, 0, 0}));
    v.push_back(T(5, Z, -60, 786432, 2, COS, {6, 0, 0, 0, 0, 0}));
    v.push_back(T(5, Z, -10, 786432, 3, COS, {6, 0, 0, 0, 0, 0}));
    v.push_back(T(5, X, -285, 196608, 1, SIN, {4, 1, 0, 0, 0, 0}));
    v.push_back(T(5, X, 150, 196608, 2, SIN, {4, 1, 0, 0, 0, 0}));
    v.push_back(T(5, X, 55, 196608, 3, SIN, {4, 1, 0, 0, 0, 0}));
    v.push_back(T(5, Y, -297, 196608, 0, COS, {4, 1, 0, 0, 0, 0}));
    v.push_back(T(5, Y, 825, 196608, 1, COS, {4, 1, 0, 0, 0, 0}));
    v.push_back(T(5, Y, 330, 196608, 2, COS, {4, 1, 0, 0, 0, 0}));
    v.push_back(T(5, Y, 55, 196608, 3, COS, {4, 1, 0, 0, 0, 0}));
    v.push_back(T(5, Z, -104, 32768, 0, COS, {2, 2, 0, 0, 0, 0}));
    v.push_back(T(5, Z, 1000, 32768, 1, COS, {2, 2, 0, 0, 0, 0}));
    v.push_back(T(5, Z, 285, 32768, 2, COS, {2, 2, 0, 0, 0, 0}));
    v.push_back(T(5, X, 40, 8192, 1, SIN, {0, 3, 0, 0, 0, 0}));
    v.push_back(T(5, X, -15, 8192, 2, SIN, {0, 3, 0, 0, 0, 0}));
    v.push_back(T(5, Y, -24, 8192, 0, COS, {0, 3, 0, 0, 0, 0}));
    v.push_back(T(5, Y, -200, 8192, 1, COS, {0, 3, 0, 0, 0, 0}));
    v.push_back(T(5, Y, -15, 8192, 2, COS, {0, 3, 0, 0, 0, 0}));
    v.push_back(T(5, Z, -48, 16384, 0, COS, {3, 0, 1, 0, 0, 0}));
    v.push_back(T(5, Z, 195, 16384, 1, COS, {3, 0, 1, 0, 0, 0}));
    v.push_back(T(5, Z, 75, 16384, 2, COS, {3, 0, 1, 0, 0, 0}));
    v.push_back(T(5, X, 160, 8192, 1, SIN, {1, 1, 1, 0, 0, 0}));
    v.push_back(T(5, X, -95, 8192, 2, SIN, {1, 1, 1, 0, 0, 0}));
    v.push_back(T(5, Y, 72, 8192, 0, COS, {1, 1, 1, 0, 0, 0}));
    v.push_back(T(5, Y, -800, 8192, 1, COS, {1, 1, 1, 0, 0, 0}));
    v.push_back(T(5, Y, -95, 8192, 2, COS, {1, 1, 1, 0, 0, 0}));
    v.push_back(T(5, Z, 1, 512, 0, COS, {0, 0, 2, 0, 0, 0}));
    v.push_back(T(5, Z, -20, 512, 1, COS, {0, 0, 2, 0, 0, 0}));
    v.push_back(T(5, X, 80, 16384, 1, SIN, {2, 0, 0, 1, 0, 0}));
    v.push_back(T(5, X, -65, 16384, 2, SIN, {2, 0, 0, 1, 0, 0}));
    v.push_back(T(5, Y, 64, 16384, 0, COS, {2, 0, 0, 1, 0, 0}));
    v.push_back(T(5, Y, -400, 16384, 1, COS, {2, 0, 0, 1, 0, 0}));
    v.push_back(T(5, Y, -65, 16384, 2, COS, {2, 0, 0, 1, 0, 0}));
    v.push_back(T(5, Z, -1, 256, 0, COS, {0, 1, 0, 1, 0, 0}));
    v.push_back(T(5, Z, -15, 256, 1, COS, {0, 1, 0, 1, 0, 0}));
    v.push_back(T(5, Z, 1, 256, 0, COS, {1, 0, 0, 0, 1, 0}));
    v.push_back(T(5, Z, -6, 256, 1, COS, {1, 0, 0, 0, 1, 0}));
    v.push_back(T(5, X, 1, 128, 1, SIN, {0, 0, 0, 0, 0, 1}));
    v.push_back(T(5, Y, 1, 128, 1, COS, {0, 0, 0, 0, 0, 1}));
    return v;
}

std::vector<EffTerm> build_constant() {
    std::vector<EffTerm> v;
    v.push_back(T(0, X, 1, 4, 0, COS, {1, 0, 0, 0, 0, 0}));
    // order 1
    v.push_back(T(1, Z, 1, 32, 0, COS, {2, 0, 0, 0, 0, 0}));
    v.push_back(T(1, Z, -2, 32, 1, COS, {2, 0, 0, 0, 0, 0}));
    // order 2
    v.push_back(T(2, X, -2, 256, 0, COS, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, X, 2, 256, 1, COS, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, X, -1, 256, 2, COS, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, Y, 2, 256, 1, SIN, {3, 0, 0, 0, 0, 0}));
    v.push_back(T(2, Y, 1, 256, 2, SIN, {3, 0, 0, 0, 0, 0}));
    // order 3
    v.push_back(T(3, Z, 1, 2048, 0, COS, {4, 0, 0, 0, 0, 0}));
    v.push_back(T(3, Z, -2, 2048, 1, COS, {4, 0, 0, 0, 0, 0}));
    v.push_back(T(3, Z, -3, 2048, 2, COS, {4, 0, 0, 0, 0, 0}));
    // order 4
    v.push_back(T(4, X, -9, 16384, 0, COS, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, X, 5, 16384, 1, COS, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, X, -1, 16384, 2, COS, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, X, -1, 16384, 3, COS, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, Y, 5, 16384, 1, SIN, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, Y, 4, 16384, 2, SIN, {5, 0, 0, 0, 0, 0}));
    v.push_back(T(4, Y, 1, 16384, 3, SIN, {5, 0, 0, 0, 0, 0}));
    // order 5
    v.push_back(T(5, Z, -9, 786432, 0, COS, {6, 0, 0, 0, 0, 0}));
    v.push_back(T(5, Z, 18, 786432, 1, COS, {6, 0, 0, 0, 0, 0}));
    v.push_back(T(5, Z, -60, 786432, 2, COS, {6, 0, 0, 0, 0, 0}));
    v.push_back(T(5, Z, -10, 786432, 3, COS, {6, 0, 0, 0, 0, 0}));
    // order 6
    v.push_back(T(6, X, -1224, 37748736, 0, COS, {7, 0, 0, 0, 0, 0}));
    v.push_back(T(6, X, 252, 37748736, 1, COS, {7, 0, 0, 0, 0, 0}));
    v.push_back(T(6, X, 84, 37748736, 2, COS, {7, 0, 0, 0, 0, 0}));
    v.push_back(T(6, X, -120, 37748736, 3, COS, {7, 0, 0, 0, 0, 0}));
    v.push_back(T(6, X, -15, 37748736, 4, COS, {7, 0, 0, 0, 0, 0}));
    v.push_back(T(6, Y, 252, 37748736, 1, SIN, {7, 0, 0, 0, 0, 0}));
    v.push_back(T(6, Y, 336, 37748736, 2, SIN, {7, 0, 0, 0, 0, 0}));
    v.push_back(T(6, Y, 160, 37748736, 3, SIN, {7, 0, 0, 0, 0, 0}));
    v.push_back(T(6, Y, 15, 37748736, 4, SIN, {7, 0, 0, 0, 0, 0}));
    // order 7
    v.push_back(T(7, Z, -5076, 1811939328, 0, COS, {8, 0, 0, 0, 0, 0}));
    v.push_back(T(7, Z, 10152, 1811939328, 1, COS, {8, 0, 0, 0, 0, 0}));
    v.push_back(T(7, Z, -4368, 1811939328, 2, COS, {8, 0, 0, 0, 0, 0}));
    v.push_back(T(7, Z, -1540, 1811939328, 3, COS, {8, 0, 0, 0, 0, 0}));
    v.push_back(T(7, Z, -105, 1811939328, 4, COS, {8, 0, 0, 0, 0, 0}));
    return v;
}

PauliVector eval_terms(const std::vector<EffTerm>& terms,
                       const std::array<double, 6>& h1d, double beta0,
                       int order, double omega) {
    PauliVector out;
    for (const EffTerm& term : terms) {
        if (term.order > order) continue;
        double val = term.num / term.den;
        for (int k = 0; k < 6; ++k) {
            for (int p = 0; p < term.dpow[k]; ++p) val *= h1d[k];
        }
        for (int p = 0; p < term.order; ++p) val /= omega;
        const double arg = term.m * beta0;
        val *= term.is_sin ? std::sin(arg) : std::cos(arg);
        switch (term.axis) {
            case X: out.x += val; break;
            case Y: out.y += val; break;
            default: out.z += val; break;
        }
    }
    return out;
}

}  // namespace

const std::vector<EffTerm>& eff_terms_generic() {
    static const std::vector<EffTerm> terms = build_generic();
    return terms;
}

const std::vector<EffTerm>& eff_terms_constant() {
    static const std::vector<EffTerm> terms = build_constant();
    return terms;
}

PauliVector h_eff_generic(const Envelope& env, double t, double beta0, int order,
                          double omega) {
    if (order < 0 || order > kMaxEffOrderGeneric) {
        throw std::invalid_argument("generic effective series order must be in [0, 5]");
    }
    std::array<double, 6> h1d;
    for (int k = 0; k < 6; ++k) h1d[k] = env.deriv(t, k);
    return eval_terms(eff_terms_generic(), h1d, beta0, order, omega);
}

PauliVector h_eff_constant(double H1, double beta0, int order, double omega) {
    if (order < 0 || order > kMaxEffOrderConstant) {
        throw std::invalid_argument("constant effective series order must be in [0, 7]");
    }
    const std::array<double, 6> h1d{H1, 0.0, 0.0, 0.0, 0.0, 0.0};
    return eval_terms(eff_terms_constant(), h1d, beta0, order, omega);
}

PauliVector h_eff(const Envelope& env, double t, double beta0, int order, double omega) {
    if (env.is_constant()) {
        return h_eff_constant(env.A, beta0, order, omega);
    }
    return h_eff_generic(env, t, beta0, order, omega);
}

SymmetryReport symmetry_check(const std::function<PauliVector(double, double)>& h_fn,
                              const std::vector<double>& t_samples,
                              const std::vector<double>& beta0_samples) {
    SymmetryReport rep;
    for (double t : t_samples) {
        for (double b : beta0_samples) {
            const PauliVector h = h_fn(t, b);
            const PauliVector hs = h_fn(-t, -b);
            const double dx = std::abs(hs.x - h.x);
            const double dy = std::abs(hs.y + h.y);
            const double dz = std::abs(hs.z - h.z);
            const double worst = std::max({dx, dy, dz});
            if (worst > rep.max_violation) {
                rep.max_violation = worst;
                rep.t_worst = t;
                rep.beta0_worst = b;
                rep.axis_worst = (worst == dx) ? 0 : (worst == dy ? 1 : 2);
            }
        }
    }
    return rep;
}

}  // namespace xrwa
