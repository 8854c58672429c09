#ifndef XRWA_SU2_HPP
#define XRWA_SU2_HPP

#include <array>
#include <cmath>
#include <complex>

namespace xrwa {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double norm2() const { return x * x + y * y + z * z; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Coefficient vector of a traceless Hermitian 2x2 operator, H = h . sigma.
// The positive eigenvalue of H is |h|.
using PauliVector = Vec3;

// Rotation vector n = alpha * nhat parameterizing U = exp(-i n . sigma).
// near_branch_point is set by log_su2 when alpha is within 1e-8 of 0 or pi,
// where the principal-branch extraction loses the axis.
struct RotationVector {
    Vec3 n;
    bool near_branch_point = false;

    RotationVector() = default;
    RotationVector(const Vec3& v) : n(v) {}
    RotationVector(double x, double y, double z) : n(x, y, z) {}

    double alpha() const { return n.norm(); }
    // Axis convention at alpha = 0: (1,0,0), continuous with the x-drive limit.
    Vec3 axis() const {
        const double a = n.norm();
        return a > 0.0 ? n / a : Vec3{1.0, 0.0, 0.0};
    }
};

// 2x2 complex matrix in row-major order {a, b; c, d}.
struct Unitary2 {
    using C = std::complex<double>;
    C a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};

    static Unitary2 identity() { return {}; }

    Unitary2 operator*(const Unitary2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Unitary2 operator-(const Unitary2& o) const {
        return {a - o.a, b - o.b, c - o.c, d - o.d};
    }
    Unitary2 dagger() const {
        return {std::conj(a), std::conj(c), std::conj(b), std::conj(d)};
    }
    C trace() const { return a + d; }
    C det() const { return a * d - b * c; }

    // Operator 2-norm (largest singular value).
    double norm2() const;
    // Frobenius norm.
    double frobenius() const {
        return std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
    }
    // max |U - V| deviation from unitarity: || U U^dag - 1 ||_F.
    double unitarity_defect() const;
};

// U = exp(-i n . sigma) = cos(alpha) 1 - i sin(alpha) nhat . sigma.
Unitary2 exp_su2(const Vec3& n);
inline Unitary2 exp_su2(const RotationVector& n) { return exp_su2(n.n); }

// Principal-branch logarithm: alpha in [0, pi].  Near-identity and
// near-alpha=pi inputs are flagged; at exact identity the axis defaults
// to (1,0,0).
RotationVector log_su2(const Unitary2& u);

// h with h . sigma = i (dU/dt) U^dag for U = exp(-i n . sigma):
//   h = 1/2 sin(2a) dnhat + 1/2 (1 - cos 2a) (nhat x dnhat) + adot nhat,
// where adot = nhat . n_dot and dnhat = (n_dot - adot nhat)/alpha.
// For alpha -> 0 the limit h = n_dot is used.
PauliVector dexp_hamiltonian(const RotationVector& n, const Vec3& n_dot);

inline double positive_eigenvalue(const PauliVector& h) { return h.norm(); }

// Orthonormal frame attached to a moving unit vector nhat(t):
//   nhat_v = dnhat/|dnhat|, nhat_perp = nhat_v x nhat,
//   d^2 nhat = nv_dot nhat_v + n_v [ a_par nhat + a_perp nhat_perp ].
struct KinematicFrame {
    Vec3 nhat, nhat_v, nhat_perp;
    double n_v = 0.0;       // |dnhat/dt|
    double nv_dot = 0.0;    // d|dnhat/dt|/dt
    double a_par = 0.0;     // n_a . nhat      (n_a = d nhat_v / dt)
    double a_perp = 0.0;    // n_a . nhat_perp
    bool degenerate = false;  // n_v below threshold, direction undefined
};

KinematicFrame unit_kinematics(const Vec3& nhat, const Vec3& nhat_dot,
                               const Vec3& nhat_ddot);

}  // namespace xrwa

#endif
