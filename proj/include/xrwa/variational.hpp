#ifndef XRWA_VARIATIONAL_HPP
#define XRWA_VARIATIONAL_HPP

#include <string>
#include <vector>

#include "xrwa/functional.hpp"
#include "xrwa/su2.hpp"

namespace xrwa {

// Trial perturbation delta_n(t, beta0) = f_outer * g, where
//   f_outer = [sin^2(theta) - sin^2(eta*phi)] exp(a t^2),
//   theta   = omega (t - beta0) + eta*phi,   a = -(1 + c) / (2 sigma^2),
// so delta_n vanishes identically at every stroboscopic time, and
//   g_i = sum_m [A_{i,m}(t) cos(m beta0) + B_{i,m}(t) sin(m beta0)],
//   A_{i,m}(t) = sum_n [a_{imn} cos(n t / L) + a'_{imn} sin((n+1) t / L)]
// (B with coefficients b, b').  The family is pinned to the omega = 1/2
// convention.  phi enters everywhere through the product eta*phi, and the
// flattened parameter vector stores that product so optimizer steps act on
// an O(1) coordinate.
struct TrialParams {
    double phi = 0.0;
    double c = 0.0;
    double eta = 1e6;   // fixed scale, never optimized
    double L = 0.0;     // temporal Fourier scale, default 5*sigma
    double sigma = 0.0;
    double omega = 0.5;
    int M = 0, N = 0;
    // Coefficient blocks, each indexed [i][m][n] with i in {x,y,z},
    // m in [0,M], n in [0,N], stored flat.
    std::vector<double> a, ap, b, bp;

    static TrialParams zero(int M, int N, double sigma, double omega = 0.5);

    int block_size() const { return 3 * (M + 1) * (N + 1); }
    int idx(int i, int m, int n) const { return (i * (M + 1) + m) * (N + 1) + n; }

    // [eta*phi, c, a..., ap..., b..., bp...]; length 2 + 12 (M+1)(N+1).
    std::vector<double> flatten() const;
    static TrialParams unflatten(const std::vector<double>& v,
                                 const TrialParams& like);
};

struct OuterFactor {
    double f, fp, fpp;  // value and first two t-derivatives
};

OuterFactor outer_factor(double t, double beta0, const TrialParams& p);

Vec3 trial_delta_n(double t, double beta0, const TrialParams& p);

// Parity restriction under S: (t, beta0) -> (-t, -beta0).  delta_n_x and
// delta_n_z must be S-odd, delta_n_y S-even.  With the outer factor S-even,
// basis parities are  a: even, a': odd, b: odd, b': even,  so x and z keep
// only {a', b} and y keeps only {a, b'}.
TrialParams apply_symmetry_mask(const TrialParams& p);

// True for flat-vector coordinates that survive the mask (phi and c always
// do); used to skip dead finite-difference gradient components.
std::vector<bool> symmetry_free_mask(const TrialParams& like);

struct VariationalProblem {
    IntegrandKind kind = IntegrandKind::fI;
    QuadratureGrid grid;
    NSource* base = nullptr;  // effective n, cached across evaluations
    TrialParams shape;        // carries eta, L, sigma, omega, M, N
    bool symmetry = false;
};

double objective(const std::vector<double>& x, const VariationalProblem& prob);

enum class MinimizeAlgorithm { QuasiNewtonFD, Simplex };

struct MinimizeConfig {
    MinimizeAlgorithm algorithm = MinimizeAlgorithm::QuasiNewtonFD;
    int max_iters = 200;
    double grad_step = 1e-6;  // central-difference step on the flat vector
    double tol = 1e-9;        // convergence tolerance on Q
    double start_scale = 1e-5;  // first line-search trial step |dx|
};

struct MinimizeResult {
    FunctionalValue Q_start, Q_final;
    double improvement = 0.0;  // Q_start - Q_final, >= 0
    TrialParams params_final;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

MinimizeResult minimize(const VariationalProblem& prob,
                        const MinimizeConfig& cfg, const TrialParams& start);

std::string to_string(MinimizeAlgorithm a);

}  // namespace xrwa

#endif
