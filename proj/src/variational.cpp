#include "xrwa/variational.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace xrwa {

TrialParams TrialParams::zero(int M, int N, double sigma, double omega) {
    if (M < 0 || N < 0 || sigma <= 0.0) {
        throw std::invalid_argument("TrialParams::zero: bad shape");
    }
    TrialParams p;
    p.sigma = sigma;
    p.omega = omega;
    p.L = 5.0 * sigma;
    p.M = M;
    p.N = N;
    const int sz = p.block_size();
    p.a.assign(sz, 0.0);
    p.ap.assign(sz, 0.0);
    p.b.assign(sz, 0.0);
    p.bp.assign(sz, 0.0);
    return p;
}

std::vector<double> TrialParams::flatten() const {
    std::vector<double> v;
    v.reserve(2 + 4 * a.size());
    v.push_back(eta * phi);
    v.push_back(c);
    v.insert(v.end(), a.begin(), a.end());
    v.insert(v.end(), ap.begin(), ap.end());
    v.insert(v.end(), b.begin(), b.end());
    v.insert(v.end(), bp.begin(), bp.end());
    return v;
}

TrialParams TrialParams::unflatten(const std::vector<double>& v,
                                   const TrialParams& like) {
    const std::size_t sz = like.a.size();
    if (v.size() != 2 + 4 * sz) {
        throw std::invalid_argument("unflatten: length mismatch");
    }
    TrialParams p = like;
    p.phi = v[0] / p.eta;
    p.c = v[1];
    auto it = v.begin() + 2;
    std::copy(it, it + sz, p.a.begin());
    std::copy(it + sz, it + 2 * sz, p.ap.begin());
    std::copy(it + 2 * sz, it + 3 * sz, p.b.begin());
    std::copy(it + 3 * sz, it + 4 * sz, p.bp.begin());
    return p;
}

OuterFactor outer_factor(double t, double beta0, const TrialParams& p) {
    const double ep = p.eta * p.phi;
    const double theta = p.omega * (t - beta0) + ep;
    const double a = -(1.0 + p.c) / (2.0 * p.sigma * p.sigma);
    const double s = std::sin(theta);
    const double sp = std::sin(ep);
    const double u = s * s - sp * sp;
    const double up = p.omega * std::sin(2.0 * theta);
    const double upp = 2.0 * p.omega * p.omega * std::cos(2.0 * theta);
    const double e = std::exp(a * t * t);
    OuterFactor out;
    out.f = u * e;
    out.fp = e * (up + 2.0 * a * t * u);
    out.fpp = e * (upp + 4.0 * a * t * up + (2.0 * a + 4.0 * a * a * t * t) * u);
    return out;
}

Vec3 trial_delta_n(double t, double beta0, const TrialParams& p) {
    const double f = outer_factor(t, beta0, p).f;
    if (f == 0.0) return Vec3{};

    const int M = p.M, N = p.N;
    // Recurrences for cos/sin(n t / L) and (m beta0) harmonics.
    const double ct = std::cos(t / p.L), st = std::sin(t / p.L);
    const double cb = std::cos(beta0), sb = std::sin(beta0);
    Vec3 g{};
    double cmb = 1.0, smb = 0.0;  // cos(m beta0), sin(m beta0)
    for (int m = 0; m <= M; ++m) {
        double cnt = 1.0, snt = 0.0;  // cos(n t/L), sin(n t/L)
        for (int n = 0; n <= N; ++n) {
            // sin((n+1) t/L) = snt*ct + cnt*st
            const double sn1 = snt * ct + cnt * st;
            for (int i = 0; i < 3; ++i) {
                const int k = p.idx(i, m, n);
                const double A = p.a[k] * cnt + p.ap[k] * sn1;
                const double B = p.b[k] * cnt + p.bp[k] * sn1;
                g[i] += A * cmb + B * smb;
            }
            const double cn1 = cnt * ct - snt * st;
            cnt = cn1;
            snt = sn1;
        }
        const double cm1 = cmb * cb - smb * sb;
        smb = smb * cb + cmb * sb;
        cmb = cm1;
    }
    return f * g;
}

TrialParams apply_symmetry_mask(const TrialParams& p) {
    TrialParams out = p;
    for (int i = 0; i < 3; ++i) {
        const bool even_component = (i == 1);  // n_y is S-even, n_x/n_z S-odd
        for (int m = 0; m <= p.M; ++m) {
            for (int n = 0; n <= p.N; ++n) {
                const int k = p.idx(i, m, n);
                if (even_component) {
                    out.ap[k] = 0.0;  // S-odd basis
                    out.b[k] = 0.0;
                } else {
                    out.a[k] = 0.0;  // S-even basis
                    out.bp[k] = 0.0;
                }
            }
        }
    }
    return out;
}

std::vector<bool> symmetry_free_mask(const TrialParams& like) {
    TrialParams probe = like;
    const auto fill = [](std::vector<double>& v) {
        std::fill(v.begin(), v.end(), 1.0);
    };
    fill(probe.a);
    fill(probe.ap);
    fill(probe.b);
    fill(probe.bp);
    const std::vector<double> kept = apply_symmetry_mask(probe).flatten();
    std::vector<bool> free(kept.size());
    free[0] = free[1] = true;  // phi and c always survive
    for (std::size_t i = 2; i < kept.size(); ++i) free[i] = kept[i] != 0.0;
    return free;
}

double objective(const std::vector<double>& x, const VariationalProblem& prob) {
    TrialParams p = TrialParams::unflatten(x, prob.shape);
    if (prob.symmetry) p = apply_symmetry_mask(p);
    PerturbedNSource src(*prob.base, [p](double t, double beta0) {
        return trial_delta_n(t, beta0, p);
    });
    return functional_Q_value(prob.kind, src, prob.grid);
}

std::string to_string(MinimizeAlgorithm a) {
    return a == MinimizeAlgorithm::QuasiNewtonFD ? "quasi-newton-fd" : "simplex";
}

namespace {

// Free-coordinate view: optimizers work on the subvector of coordinates not
// zeroed by the symmetry mask.
struct Reduced {
    const VariationalProblem* prob;
    std::vector<double> full;       // template vector, fixed coords kept
    std::vector<int> free_idx;
    int evals = 0;

    double eval(const std::vector<double>& xr) {
        std::vector<double> x = full;
        for (std::size_t i = 0; i < free_idx.size(); ++i) x[free_idx[i]] = xr[i];
        ++evals;
        return objective(x, *prob);
    }
    std::vector<double> expand(const std::vector<double>& xr) const {
        std::vector<double> x = full;
        for (std::size_t i = 0; i < free_idx.size(); ++i) x[free_idx[i]] = xr[i];
        return x;
    }
};

std::vector<double> fd_gradient(Reduced& r, const std::vector<double>& xr,
                                double h) {
    std::vector<double> g(xr.size());
    std::vector<double> xp = xr;
    for (std::size_t i = 0; i < xr.size(); ++i) {
        xp[i] = xr[i] + h;
        const double fp = r.eval(xp);
        xp[i] = xr[i] - h;
        const double fm = r.eval(xp);
        xp[i] = xr[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

struct BfgsOutcome {
    std::vector<double> x;
    double f;
    int iterations;
    bool converged;
    bool stalled;  // line search failed before convergence
};

BfgsOutcome bfgs_minimize(Reduced& r, std::vector<double> x,
                          const MinimizeConfig& cfg) {
    const std::size_t n = x.size();
    double f = r.eval(x);
    std::vector<double> g = fd_gradient(r, x, cfg.grad_step);
    std::vector<std::vector<double>> H(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) H[i][i] = 1.0;
    bool scaled = false;
    int flat_count = 0;

    BfgsOutcome out{x, f, 0, false, false};
    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        out.iterations = iter + 1;
        std::vector<double> d(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i] -= H[i][j] * g[j];
        double gd = std::inner_product(g.begin(), g.end(), d.begin(), 0.0);
        if (gd >= 0.0) {  // not a descent direction: reset to steepest descent
            for (std::size_t i = 0; i < n; ++i) {
                std::fill(H[i].begin(), H[i].end(), 0.0);
                H[i][i] = 1.0;
                d[i] = -g[i];
            }
            scaled = false;
            gd = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
            if (gd == 0.0) {
                out.converged = true;
                break;
            }
        }
        const double dnorm = std::sqrt(
            std::inner_product(d.begin(), d.end(), d.begin(), 0.0));
        double alpha = scaled ? 1.0 : cfg.start_scale / std::max(dnorm, 1e-300);

        // Backtracking Armijo search, with expansion while the first trial
        // keeps improving (the unscaled first step is a guess).
        std::vector<double> xt(n);
        double ft = 0.0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < n; ++i) xt[i] = x[i] + alpha * d[i];
            ft = r.eval(xt);
            if (ft <= f + 1e-4 * alpha * gd) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (accepted && !scaled) {
            for (int ex = 0; ex < 12; ++ex) {
                std::vector<double> xe(n);
                for (std::size_t i = 0; i < n; ++i)
                    xe[i] = x[i] + 2.0 * alpha * d[i];
                const double fe = r.eval(xe);
                if (fe >= ft) break;
                alpha *= 2.0;
                xt = xe;
                ft = fe;
            }
        }
        if (!accepted) {
            out.stalled = true;
            break;
        }

        std::vector<double> g_new = fd_gradient(r, xt, cfg.grad_step);
        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = xt[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
        const double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
        if (!scaled && sy > 0.0 && yy > 0.0) {
            const double gamma = sy / yy;
            for (std::size_t i = 0; i < n; ++i) H[i][i] = gamma;
            scaled = true;
        }
        if (sy > 1e-18 * std::sqrt(yy)) {
            // H <- (I - s y^T/sy) H (I - y s^T/sy) + s s^T/sy
            const double rho = 1.0 / sy;
            std::vector<double> Hy(n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) Hy[i] += H[i][j] * y[j];
            const double yHy =
                std::inner_product(y.begin(), y.end(), Hy.begin(), 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    H[i][j] += -rho * (Hy[i] * s[j] + s[i] * Hy[j]) +
                               rho * rho * yHy * s[i] * s[j] +
                               rho * s[i] * s[j];
                }
            }
        }

        const double df = f - ft;
        x = xt;
        f = ft;
        g = std::move(g_new);
        out.x = x;
        out.f = f;
        flat_count = (df < cfg.tol) ? flat_count + 1 : 0;
        if (flat_count >= 2) {
            out.converged = true;
            break;
        }
    }
    return out;
}

struct SimplexOutcome {
    std::vector<double> x;
    double f;
    int iterations;
    bool converged;
};

SimplexOutcome nelder_mead(Reduced& r, const std::vector<double>& x0,
                           const MinimizeConfig& cfg, double init_step) {
    const std::size_t n = x0.size();
    std::vector<std::vector<double>> pts(n + 1, x0);
    std::vector<double> fv(n + 1);
    for (std::size_t i = 1; i <= n; ++i) pts[i][i - 1] += init_step;
    for (std::size_t i = 0; i <= n; ++i) fv[i] = r.eval(pts[i]);

    SimplexOutcome out{x0, fv[0], 0, false};
    std::vector<std::size_t> order(n + 1);
    for (int iter = 0; iter < cfg.max_iters * 4; ++iter) {
        out.iterations = iter + 1;
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        const std::size_t best = order[0], worst = order[n],
                          second = order[n - 1];
        if (fv[worst] - fv[best] < cfg.tol) {
            out.converged = true;
            break;
        }
        std::vector<double> cen(n, 0.0);
        for (std::size_t k = 0; k <= n; ++k) {
            if (k == worst) continue;
            for (std::size_t i = 0; i < n; ++i) cen[i] += pts[k][i] / n;
        }
        const auto blend = [&](double coef) {
            std::vector<double> p(n);
            for (std::size_t i = 0; i < n; ++i)
                p[i] = cen[i] + coef * (pts[worst][i] - cen[i]);
            return p;
        };
        auto refl = blend(-1.0);
        double fr = r.eval(refl);
        if (fr < fv[best]) {
            auto expd = blend(-2.0);
            const double fe = r.eval(expd);
            if (fe < fr) {
                pts[worst] = std::move(expd);
                fv[worst] = fe;
            } else {
                pts[worst] = std::move(refl);
                fv[worst] = fr;
            }
        } else if (fr < fv[second]) {
            pts[worst] = std::move(refl);
            fv[worst] = fr;
        } else {
            auto con = blend(fr < fv[worst] ? -0.5 : 0.5);
            const double fc = r.eval(con);
            if (fc < std::min(fr, fv[worst])) {
                pts[worst] = std::move(con);
                fv[worst] = fc;
            } else {  // shrink toward best
                for (std::size_t k = 0; k <= n; ++k) {
                    if (k == best) continue;
                    for (std::size_t i = 0; i < n; ++i)
                        pts[k][i] = pts[best][i] + 0.5 * (pts[k][i] - pts[best][i]);
                    fv[k] = r.eval(pts[k]);
                }
            }
        }
    }
    const std::size_t best =
        std::min_element(fv.begin(), fv.end()) - fv.begin();
    out.x = pts[best];
    out.f = fv[best];
    return out;
}

}  // namespace

MinimizeResult minimize(const VariationalProblem& prob,
                        const MinimizeConfig& cfg, const TrialParams& start) {
    Reduced r;
    r.prob = &prob;
    TrialParams s0 = prob.symmetry ? apply_symmetry_mask(start) : start;
    r.full = s0.flatten();
    if (prob.symmetry) {
        const std::vector<bool> free = symmetry_free_mask(prob.shape);
        for (std::size_t i = 0; i < free.size(); ++i)
            if (free[i]) r.free_idx.push_back(static_cast<int>(i));
    } else {
        r.free_idx.resize(r.full.size());
        std::iota(r.free_idx.begin(), r.free_idx.end(), 0);
    }
    std::vector<double> x0(r.free_idx.size());
    for (std::size_t i = 0; i < x0.size(); ++i) x0[i] = r.full[r.free_idx[i]];

    MinimizeResult res;
    res.Q_start.value = r.eval(x0);
    res.Q_start.grid = prob.grid;

    std::vector<double> x_best = x0;
    double f_best = res.Q_start.value;
    if (cfg.algorithm == MinimizeAlgorithm::QuasiNewtonFD) {
        BfgsOutcome b = bfgs_minimize(r, x0, cfg);
        res.iterations = b.iterations;
        res.converged = b.converged;
        if (b.f < f_best) {
            f_best = b.f;
            x_best = b.x;
        }
        if (b.stalled) {  // polish with the simplex from the best point
            SimplexOutcome s =
                nelder_mead(r, x_best, cfg, 0.1 * cfg.start_scale);
            res.iterations += s.iterations;
            res.converged = s.converged;
            if (s.f < f_best) {
                f_best = s.f;
                x_best = s.x;
            }
        }
    } else {
        SimplexOutcome s = nelder_mead(r, x0, cfg, cfg.start_scale);
        res.iterations = s.iterations;
        res.converged = s.converged;
        if (s.f < f_best) {
            f_best = s.f;
            x_best = s.x;
        }
    }

    res.Q_final.value = f_best;
    res.Q_final.grid = prob.grid;
    res.improvement = res.Q_start.value - f_best;
    TrialParams pf = TrialParams::unflatten(r.expand(x_best), prob.shape);
    res.params_final = prob.symmetry ? apply_symmetry_mask(pf) : pf;
    res.evaluations = r.evals;
    return res;
}

}  // namespace xrwa
