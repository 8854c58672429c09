// Experiment runner: trajectories, functional tables, variational
// minimization runs, and verification sweeps, driven by a JSON config.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "xrwa/drive.hpp"
#include "xrwa/erroranalysis.hpp"
#include "xrwa/functional.hpp"
#include "xrwa/propagate.hpp"
#include "xrwa/su2.hpp"
#include "xrwa/variational.hpp"

using json = nlohmann::json;
using namespace xrwa;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr const char* kVersion = "xrwa 1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitVerification = 2;
constexpr int kExitNoConvergence = 3;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    // drive
    double A = 0.002;
    double sigma = 4.0 * kPi;
    double omega = 0.5;
    std::string envelope = "gaussian";
    // domain
    std::string preset = "full";  // half | full
    double t_gate_factor = 12.0;  // t_gate = factor * sigma
    // functional
    std::string kind = "fI";
    std::string source = "effective";  // effective | exact | rwa
    int order = 5;
    QuadratureGrid grid;  // t bounds filled from the domain
    // variational
    int M = 1, N = 1;
    double phi0 = 0.0, c0 = 0.0;
    double eta = 1e6;
    double L = 0.0;  // 0 -> default 5 sigma
    bool symmetry = true;
    std::string algorithm = "quasi-newton-fd";
    int max_iters = 200;
    // output
    std::string format = "record";  // record | csv
    std::string out_path;           // empty -> stdout
    int threads = 1;                // accepted bound; evaluation is serial

    json raw;  // canonical config document for the record

    Envelope make_envelope() const {
        if (envelope == "gaussian") return Envelope::gaussian(A, sigma);
        if (envelope == "constant") return Envelope::constant(A);
        throw ConfigError("drive.envelope: expected gaussian|constant, got '" +
                          envelope + "'");
    }
    double t_gate() const { return t_gate_factor * sigma; }
    double t_lo() const { return preset == "full" ? -t_gate() : 0.0; }
    double t_hi() const { return t_gate(); }
};

void reject_unknown(const json& j, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

RunConfig load_config(const std::string& path) {
    RunConfig c;
    json j;
    if (!path.empty()) {
        std::ifstream f(path);
        if (!f) throw ConfigError("cannot open config file: " + path);
        try {
            f >> j;
        } catch (const json::exception& e) {
            throw ConfigError("config parse error in " + path + ": " + e.what());
        }
    } else {
        j = json::object();
    }
    reject_unknown(j, "config",
                   {"drive", "domain", "functional", "variational", "output"});
    if (j.contains("drive")) {
        const json& d = j["drive"];
        reject_unknown(d, "drive", {"A", "sigma", "omega", "envelope"});
        read_opt(d, "A", c.A);
        read_opt(d, "sigma", c.sigma);
        read_opt(d, "omega", c.omega);
        read_opt(d, "envelope", c.envelope);
    }
    if (j.contains("domain")) {
        const json& d = j["domain"];
        reject_unknown(d, "domain", {"preset", "t_gate_factor"});
        read_opt(d, "preset", c.preset);
        read_opt(d, "t_gate_factor", c.t_gate_factor);
    }
    if (j.contains("functional")) {
        const json& d = j["functional"];
        reject_unknown(d, "functional", {"kind", "source", "order", "grid"});
        read_opt(d, "kind", c.kind);
        read_opt(d, "source", c.source);
        read_opt(d, "order", c.order);
        if (d.contains("grid")) {
            const json& g = d["grid"];
            reject_unknown(g, "functional.grid",
                           {"beta0_points", "t_panels", "t_order", "fd_step"});
            read_opt(g, "beta0_points", c.grid.beta0_points);
            read_opt(g, "t_panels", c.grid.t_panels);
            read_opt(g, "t_order", c.grid.t_order);
            read_opt(g, "fd_step", c.grid.fd_step);
        }
    }
    if (j.contains("variational")) {
        const json& d = j["variational"];
        reject_unknown(d, "variational",
                       {"M", "N", "phi0", "c0", "eta", "L", "symmetry",
                        "algorithm", "max_iters"});
        read_opt(d, "M", c.M);
        read_opt(d, "N", c.N);
        read_opt(d, "phi0", c.phi0);
        read_opt(d, "c0", c.c0);
        read_opt(d, "eta", c.eta);
        read_opt(d, "L", c.L);
        read_opt(d, "symmetry", c.symmetry);
        read_opt(d, "algorithm", c.algorithm);
        read_opt(d, "max_iters", c.max_iters);
    }
    if (j.contains("output")) {
        const json& d = j["output"];
        reject_unknown(d, "output", {"format", "path"});
        read_opt(d, "format", c.format);
        read_opt(d, "path", c.out_path);
    }
    if (c.preset != "half" && c.preset != "full") {
        throw ConfigError("domain.preset: expected half|full, got '" + c.preset +
                          "'");
    }
    if (c.omega <= 0.0) throw ConfigError("drive.omega must be > 0");
    c.raw = j;
    return c;
}

json canonical_config(const RunConfig& c) {
    json j;
    j["drive"] = {{"A", c.A},
                  {"sigma", c.sigma},
                  {"omega", c.omega},
                  {"envelope", c.envelope}};
    j["domain"] = {{"preset", c.preset}, {"t_gate_factor", c.t_gate_factor}};
    j["functional"] = {{"kind", c.kind},
                       {"source", c.source},
                       {"order", c.order},
                       {"grid",
                        {{"beta0_points", c.grid.beta0_points},
                         {"t_panels", c.grid.t_panels},
                         {"t_order", c.grid.t_order},
                         {"fd_step", c.grid.fd_step}}}};
    j["variational"] = {{"M", c.M},         {"N", c.N},
                        {"phi0", c.phi0},   {"c0", c.c0},
                        {"eta", c.eta},     {"L", c.L},
                        {"symmetry", c.symmetry},
                        {"algorithm", c.algorithm},
                        {"max_iters", c.max_iters}};
    j["output"] = {{"format", c.format}, {"path", c.out_path}};
    return j;
}

std::string config_hash(const json& j) {
    const std::size_t h = std::hash<std::string>{}(j.dump());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016zx", h);
    return buf;
}

// value(uncertainty-digits) formatting, e.g. 0.0991166116(5).
std::string format_with_uncertainty(double value, double unc) {
    char buf[64];
    if (!(unc > 0.0)) {
        std::snprintf(buf, sizeof(buf), "%.12g", value);
        return buf;
    }
    const int expo = static_cast<int>(std::floor(std::log10(unc)));
    const int decimals = std::max(0, -expo);
    const int digit =
        std::max(1, static_cast<int>(std::lround(unc * std::pow(10.0, decimals))));
    std::snprintf(buf, sizeof(buf), "%.*f(%d)", decimals, value, digit);
    return buf;
}

std::ostream& open_sink(const RunConfig& c, std::ofstream& file) {
    if (c.out_path.empty()) return std::cout;
    file.open(c.out_path);
    if (!file) throw ConfigError("cannot open output file: " + c.out_path);
    return file;
}

json base_record(const std::string& command, const RunConfig& c,
                 double wall_seconds) {
    json r;
    r["command"] = command;
    r["config"] = canonical_config(c);
    r["config_hash"] = config_hash(canonical_config(c));
    r["wall_time_s"] = wall_seconds;
    r["library_version"] = kVersion;
    return r;
}

PropagatedNSource make_source(const RunConfig& c) {
    const Envelope env = c.make_envelope();
    const double omega = c.omega;
    const int order = c.order;
    PropagationSpec spec;
    spec.tc = kPi / omega;
    DriveConfig dc;
    dc.omega = omega;
    if (c.source == "effective") {
        return PropagatedNSource(
            [env, omega, order](double beta0) -> HamiltonianFn {
                return [env, omega, order, beta0](double t) {
                    return h_eff(env, t, beta0, order, omega);
                };
            },
            spec, omega);
    }
    if (c.source == "exact") {
        return PropagatedNSource(
            [env, dc](double) -> HamiltonianFn {
                return [env, dc](double t) { return h_rot(dc, env, t); };
            },
            spec, omega);
    }
    if (c.source == "rwa") {
        return PropagatedNSource(
            [env, dc](double) -> HamiltonianFn {
                return [env, dc](double t) { return h_rwa(dc, env, t); };
            },
            spec, omega);
    }
    throw ConfigError("functional.source: expected effective|exact|rwa, got '" +
                      c.source + "'");
}

Vec3 bloch_of(const Unitary2& u) {
    // |psi> = U |0> is the first column (a, c).
    const std::complex<double> p0 = u.a, p1 = u.c;
    const std::complex<double> cross = std::conj(p0) * p1;
    return {2.0 * std::real(cross), 2.0 * std::imag(cross),
            std::norm(p0) - std::norm(p1)};
}

int cmd_trajectory(const RunConfig& c) {
    const Envelope env = c.make_envelope();
    DriveConfig dc;
    dc.omega = c.omega;
    const double beta0 = 0.0;
    const double t_i = beta0 / (2.0 * c.omega);
    const double tc = dc.tc();
    const double step = tc / 32.0;

    std::map<std::string, HamiltonianFn> sources = {
        {"exact", [env, dc](double t) { return h_rot(dc, env, t); }},
        {"rwa", [env, dc](double t) { return h_rwa(dc, env, t); }},
        {"effective", [env, c, beta0](double t) {
             return h_eff(env, t, beta0, c.order, c.omega);
         }}};

    std::ofstream file;
    std::ostream& os = open_sink(c, file);
    os << "t,beta0,source,bx,by,bz\n";
    os.precision(17);
    for (const auto& [name, fn] : sources) {
        for (const int dir : {+1, -1}) {
            Unitary2 u = Unitary2::identity();
            double t = t_i;
            if (dir > 0) {
                const Vec3 b = bloch_of(u);
                os << t << ',' << beta0 << ',' << name << ',' << b.x << ','
                   << b.y << ',' << b.z << '\n';
            }
            while ((dir > 0 && t < c.t_hi() - 1e-9) ||
                   (dir < 0 && t > c.t_lo() + 1e-9)) {
                const double next = t + dir * step;
                propagate_onto(fn, t, next, 256, tc, Scheme::CommutatorFree4, u);
                t = next;
                const Vec3 b = bloch_of(u);
                os << t << ',' << beta0 << ',' << name << ',' << b.x << ','
                   << b.y << ',' << b.z << '\n';
            }
        }
    }
    return kExitOk;
}

int cmd_functional(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    PropagatedNSource src = make_source(c);
    QuadratureGrid grid = c.grid;
    grid.t_lo = c.t_lo();
    grid.t_hi = c.t_hi();
    const IntegrandKind kind = integrand_kind_from_string(c.kind);
    const FunctionalValue q = functional_Q(kind, src, grid, true);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    json r = base_record("functional", c, wall);
    r["kind"] = c.kind;
    r["source"] = c.source;
    r["domain"] = c.preset;
    r["Q"] = q.value;
    r["Q_quad_uncertainty"] = q.quad_uncertainty;
    r["Q_formatted"] = format_with_uncertainty(q.value, q.quad_uncertainty);

    std::ofstream file;
    std::ostream& os = open_sink(c, file);
    if (c.format == "csv") {
        os << "kind,source,domain,Q,quad_uncertainty\n";
        os.precision(17);
        os << c.kind << ',' << c.source << ',' << c.preset << ',' << q.value
           << ',' << q.quad_uncertainty << '\n';
    } else {
        os << r.dump(2) << '\n';
    }
    return kExitOk;
}

int cmd_minimize(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    RunConfig base = c;
    base.source = "effective";
    PropagatedNSource src = make_source(base);

    VariationalProblem prob;
    prob.kind = integrand_kind_from_string(c.kind);
    prob.grid = c.grid;
    prob.grid.t_lo = c.t_lo();
    prob.grid.t_hi = c.t_hi();
    prob.base = &src;
    prob.shape = TrialParams::zero(c.M, c.N, c.sigma, c.omega);
    prob.shape.eta = c.eta;
    if (c.L > 0.0) prob.shape.L = c.L;
    prob.symmetry = c.symmetry && c.preset == "full";

    TrialParams start_params = prob.shape;
    start_params.phi = c.phi0;
    start_params.c = c.c0;

    MinimizeConfig mcfg;
    mcfg.max_iters = c.max_iters;
    if (c.algorithm == "simplex") {
        mcfg.algorithm = MinimizeAlgorithm::Simplex;
    } else if (c.algorithm != "quasi-newton-fd") {
        throw ConfigError("variational.algorithm: expected quasi-newton-fd|simplex");
    }

    const MinimizeResult res = minimize(prob, mcfg, start_params);

    // Error bound for the significance verdict, measured at the run's own
    // drive configuration.
    const Envelope env = c.make_envelope();
    DriveConfig dc;
    dc.omega = c.omega;
    const ErrorSamples samples = collect_error_samples(
        env, dc, c.order, prob.grid.t_lo, prob.grid.t_hi, 16, 256);
    const ErrorBudget budget =
        propagate_errors(samples, ErrorPolicy::Conservative);
    const Verdict verdict = significance(res.improvement, budget);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();

    json r = base_record("minimize", c, wall);
    r["Q_start"] = res.Q_start.value;
    r["Q_final"] = res.Q_final.value;
    r["improvement"] = res.improvement;
    r["iterations"] = res.iterations;
    r["evaluations"] = res.evaluations;
    r["converged"] = res.converged;
    r["delta_Q_bound"] = budget.delta_Q;
    r["verdict"] = to_string(verdict);
    r["coefficients"] = {{"phi", res.params_final.phi},
                         {"c", res.params_final.c},
                         {"a", res.params_final.a},
                         {"a_prime", res.params_final.ap},
                         {"b", res.params_final.b},
                         {"b_prime", res.params_final.bp}};

    std::ofstream file;
    std::ostream& os = open_sink(c, file);
    os << r.dump(2) << '\n';
    return res.converged ? kExitOk : kExitNoConvergence;
}

int cmd_verify(const RunConfig& c) {
    const auto start = std::chrono::steady_clock::now();
    const Envelope env = c.make_envelope();
    DriveConfig dc;
    dc.omega = c.omega;
    json checks = json::object();
    bool all_ok = true;

    // Stroboscopic agreement over the domain.
    {
        const int k_half = static_cast<int>(std::floor(c.t_gate() / dc.tc()));
        double worst = 0.0;
        for (double beta0 : {0.0, kPi / 2.0, kPi}) {
            const int k_start = c.preset == "full" ? -k_half : 0;
            const StroboscopicReport rep = verify_stroboscopic(
                env, dc, beta0, c.preset == "full" ? 2 * k_half : k_half,
                c.order, k_start);
            worst = std::max(worst, rep.max_deviation);
        }
        const bool ok = worst <= 1e-6;
        checks["stroboscopic"] = {{"max_deviation", worst}, {"pass", ok}};
        all_ok = all_ok && ok;
    }

    // S-symmetry of the rotating-frame and effective Hamiltonians.
    {
        std::vector<double> ts, bs;
        for (int i = 1; i <= 16; ++i) ts.push_back(c.t_gate() * (i - 8.5) / 8.0);
        for (int i = 0; i < 8; ++i) bs.push_back(2.0 * kPi * i / 8.0);
        const SymmetryReport rot = symmetry_check(
            [&](double t, double) { return h_rot(dc, env, t); }, ts, bs);
        const SymmetryReport eff = symmetry_check(
            [&](double t, double b) {
                return h_eff(env, t, b, c.order, c.omega);
            },
            ts, bs);
        const double worst = std::max(rot.max_violation, eff.max_violation);
        const bool ok = worst <= 1e-14;
        checks["symmetry"] = {{"max_violation", worst}, {"pass", ok}};
        all_ok = all_ok && ok;
    }

    // SU(2) identity spot checks.
    {
        double worst = 0.0;
        for (int i = 0; i < 64; ++i) {
            const Vec3 n{0.3 * std::sin(1.7 * i), 0.4 * std::cos(0.9 * i),
                         0.2 * std::sin(0.4 * i + 1.0)};
            const Vec3 back = log_su2(exp_su2(n)).n;
            worst = std::max(worst, (back - n).norm());
        }
        const bool ok = worst <= 1e-11;
        checks["su2_round_trip"] = {{"max_error", worst}, {"pass", ok}};
        all_ok = all_ok && ok;
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    json r = base_record("verify", c, wall);
    r["checks"] = checks;
    r["pass"] = all_ok;

    std::ofstream file;
    std::ostream& os = open_sink(c, file);
    os << r.dump(2) << '\n';
    return all_ok ? kExitOk : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact-RWA toolchain: trajectories, functionals, variational "
                 "minimization, verification"};
    app.require_subcommand(1);

    std::string config_path, domain, integrand, out_path, format, symmetry;
    int order = -1, M = -1, N = -1, threads = 0;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--domain", domain, "half|full");
    app.add_option("--integrand", integrand,
                   "fI|fI-simple|fII|fII-simple|fII-simple-sq");
    app.add_option("--order", order, "effective-series order")
        ->check(CLI::Range(0, 7));
    app.add_option("--M", M, "beta0 harmonics in the trial family");
    app.add_option("--N", N, "temporal harmonics in the trial family");
    app.add_option("--symmetry", symmetry, "on|off");
    app.add_option("--threads", threads, "worker bound (evaluation is serial)");
    app.add_option("--out", out_path, "output path (default stdout)");
    app.add_option("--format", format, "csv|record");

    CLI::App* traj = app.add_subcommand("trajectory", "emit Bloch trajectories");
    CLI::App* func = app.add_subcommand("functional", "evaluate Q");
    CLI::App* mini = app.add_subcommand("minimize", "variational minimization");
    CLI::App* veri = app.add_subcommand("verify", "invariant sweep");
    for (CLI::App* s : {traj, func, mini, veri}) s->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig c = load_config(config_path);
        if (!domain.empty()) {
            if (domain != "half" && domain != "full")
                throw ConfigError("--domain: expected half|full");
            c.preset = domain;
        }
        if (!integrand.empty()) c.kind = integrand;
        if (order >= 0) c.order = order;
        if (M >= 0) c.M = M;
        if (N >= 0) c.N = N;
        if (!symmetry.empty()) {
            if (symmetry != "on" && symmetry != "off")
                throw ConfigError("--symmetry: expected on|off");
            c.symmetry = symmetry == "on";
        }
        if (threads > 0) c.threads = threads;
        if (!out_path.empty()) c.out_path = out_path;
        if (!format.empty()) {
            if (format != "csv" && format != "record")
                throw ConfigError("--format: expected csv|record");
            c.format = format;
        }
        integrand_kind_from_string(c.kind);  // validate early

        if (traj->parsed()) return cmd_trajectory(c);
        if (func->parsed()) return cmd_functional(c);
        if (mini->parsed()) return cmd_minimize(c);
        if (veri->parsed()) return cmd_verify(c);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerification;
    }
    return kExitOk;
}
