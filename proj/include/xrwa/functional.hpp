#ifndef XRWA_FUNCTIONAL_HPP
#define XRWA_FUNCTIONAL_HPP

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "xrwa/propagate.hpp"
#include "xrwa/su2.hpp"

namespace xrwa {

enum class IntegrandKind {
    fI,
    fI_simplified,
    fII,
    fII_simplified,
    fII_simplified_squared,
};

IntegrandKind integrand_kind_from_string(const std::string& s);
std::string to_string(IntegrandKind k);

struct QuadratureGrid {
    double t_lo = 0.0, t_hi = 0.0;
    int beta0_points = 24;  // uniform periodic trapezoid, >= 16
    int t_panels = 48;      // composite Gauss-Legendre panels
    int t_order = 8;        // nodes per panel
    double fd_step = 1e-4;  // central-difference step for n derivatives
};

struct FunctionalValue {
    double value = 0.0;
    double quad_uncertainty = 0.0;
    QuadratureGrid grid;
};

// f_I = sqrt(adot^2 + 1/2 |dnhat|^2 (1 - cos 2a)); equals the positive
// eigenvalue of dexp_hamiltonian(n, ndot).  Small-alpha limit is |ndot|.
double integrand_fI(const Vec3& n, const Vec3& n_dot);

double integrand_fI_simplified(const Vec3& n_dot);

// |dh/dt| assembled from the rotation-vector kinematics:
//   hdot = a d2nhat + b (nhat x d2nhat) + c nhat_v - d nhat_perp + addot nhat
// with a = 1/2 sin 2a, b = 1/2 (1 - cos 2a), c = adot n_v (cos 2a + 1),
// d = adot n_v sin 2a.  Falls back to the reduced formula when the frame is
// degenerate (n_v ~ 0) and to |nddot| for alpha -> 0.
double integrand_fII(const Vec3& n, const Vec3& n_dot, const Vec3& n_ddot);

// Same quantity via the expanded dot-product identity (dual code path for
// cross-checking the assembled formula).
double integrand_fII_expanded(const Vec3& n, const Vec3& n_dot, const Vec3& n_ddot);

double integrand_fII_simplified(const Vec3& n_ddot, bool squared);

// Source of n(t, beta0) for the quadrature.  Implementations are queried
// at grid nodes and small finite-difference offsets around them; sources
// that know their time derivatives analytically can advertise them and the
// quadrature will skip the difference quotients.
class NSource {
  public:
    virtual ~NSource() = default;
    virtual Vec3 n(double t, double beta0) = 0;
    virtual bool has_derivatives() const { return false; }
    // Only called when has_derivatives() is true.
    virtual void derivatives(double t, double beta0, Vec3& n, Vec3& n_dot,
                             Vec3& n_ddot);
};

// n and its derivatives from closed-form callables.
class AnalyticNSource : public NSource {
  public:
    using Fn = std::function<Vec3(double t, double beta0)>;
    AnalyticNSource(Fn n, Fn n_dot, Fn n_ddot)
        : n_(std::move(n)), nd_(std::move(n_dot)), ndd_(std::move(n_ddot)) {}
    Vec3 n(double t, double beta0) override { return n_(t, beta0); }
    bool has_derivatives() const override { return true; }
    void derivatives(double t, double beta0, Vec3& n, Vec3& n_dot,
                     Vec3& n_ddot) override {
        n = n_(t, beta0);
        n_dot = nd_(t, beta0);
        n_ddot = ndd_(t, beta0);
    }

  private:
    Fn n_, nd_, ndd_;
};

// n from propagating a per-beta0 Hamiltonian family, with checkpoint
// caching so repeated nearby queries extend a stored trajectory instead of
// restarting from t_i.  State is per-instance; clone per thread if needed.
class PropagatedNSource : public NSource {
  public:
    using FamilyFn = std::function<HamiltonianFn(double beta0)>;

    PropagatedNSource(FamilyFn family, PropagationSpec spec, double omega)
        : family_(std::move(family)), spec_(spec), omega_(omega) {}

    Vec3 n(double t, double beta0) override;

  private:
    struct Checkpoint {
        Unitary2 u;
        Vec3 n;
    };
    struct Track {
        HamiltonianFn h_fn;
        std::map<double, Checkpoint> points;  // keyed by time
    };
    FamilyFn family_;
    PropagationSpec spec_;
    double omega_;
    std::map<double, Track> tracks_;  // keyed by beta0
};

// n_eff + delta_n overlay.
class PerturbedNSource : public NSource {
  public:
    using DeltaFn = std::function<Vec3(double t, double beta0)>;
    PerturbedNSource(NSource& base, DeltaFn delta)
        : base_(base), delta_(std::move(delta)) {}
    Vec3 n(double t, double beta0) override {
        return base_.n(t, beta0) + delta_(t, beta0);
    }

  private:
    NSource& base_;
    DeltaFn delta_;
};

// Tensor quadrature of the chosen integrand over t in [t_lo, t_hi] (composite
// Gauss-Legendre) and periodic beta0 in [0, 2 pi) (uniform trapezoid).
// With compute_uncertainty, re-evaluates on a once-refined grid and reports
// the difference.
FunctionalValue functional_Q(IntegrandKind kind, NSource& source,
                             const QuadratureGrid& grid,
                             bool compute_uncertainty = false);

// Inner helper exposed for the variational objective: plain quadrature value
// on exactly the given grid.
double functional_Q_value(IntegrandKind kind, NSource& source,
                          const QuadratureGrid& grid);

}  // namespace xrwa

#endif
