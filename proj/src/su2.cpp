#include "xrwa/su2.hpp"

#include <algorithm>

namespace xrwa {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kBranchTol = 1e-8;
constexpr double kSmallAlpha = 1e-6;
}  // namespace

double Unitary2::norm2() const {
    // Largest singular value of a 2x2 matrix from the eigenvalues of M^dag M.
    const double aa = std::norm(a) + std::norm(c);
    const double bb = std::norm(b) + std::norm(d);
    const C ab = std::conj(a) * b + std::conj(c) * d;
    const double tr = aa + bb;
    const double disc = std::sqrt(std::max(0.0, (aa - bb) * (aa - bb) / 4.0 + std::norm(ab)));
    return std::sqrt(std::max(0.0, tr / 2.0 + disc));
}

double Unitary2::unitarity_defect() const {
    const Unitary2 p = (*this) * dagger();
    const Unitary2 one = Unitary2::identity();
    return (p - one).frobenius();
}

Unitary2 exp_su2(const Vec3& n) {
    const double alpha = n.norm();
    // sin(alpha)/alpha * n is finite for alpha -> 0.
    double s;
    if (alpha < 1e-8) {
        s = 1.0 - alpha * alpha / 6.0;
    } else {
        s = std::sin(alpha) / alpha;
    }
    const double c = std::cos(alpha);
    const std::complex<double> i(0.0, 1.0);
    // nhat.sigma = [[nz, nx - i ny], [nx + i ny, -nz]] scaled by sin(alpha).
    return {c - i * (s * n.z), -i * (s * n.x) - (s * n.y),
            -i * (s * n.x) + (s * n.y), c + i * (s * n.z)};
}

RotationVector log_su2(const Unitary2& u) {
    const double cos_a = std::clamp(std::real(u.trace()) / 2.0, -1.0, 1.0);

    // tr(U sigma_j) = -2 i sin(alpha) nhat_j for U in SU(2).
    // sigma_x picks (b + c), sigma_y picks i(b - c), sigma_z picks (a - d).
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> tx = u.b + u.c;
    const std::complex<double> ty = i * (u.b - u.c);
    const std::complex<double> tz = u.a - u.d;
    Vec3 raw{std::real(i * tx) / 2.0, std::real(i * ty) / 2.0, std::real(i * tz) / 2.0};
    // raw = sin(alpha) * nhat.  atan2 of the two redundant encodings of
    // alpha stays well conditioned near the branch ends, unlike acos.
    const double sin_a = raw.norm();
    const double alpha = std::atan2(sin_a, cos_a);

    RotationVector out;
    out.near_branch_point = (sin_a < kBranchTol) || (alpha > kPi - kBranchTol) || (alpha < kBranchTol);

    if (sin_a < kBranchTol) {
        // First-order fallback: U ~ 1 - i n.sigma, so raw ~ n directly for
        // alpha near 0; near alpha = pi the axis magnitude is unrecoverable
        // and we keep the raw direction scaled to alpha.
        const double rn = raw.norm();
        if (rn < 1e-300) {
            out.n = Vec3{alpha, 0.0, 0.0};  // axis convention (1,0,0)
        } else {
            out.n = raw * (alpha / rn);
        }
        return out;
    }
    out.n = raw * (alpha / sin_a);
    return out;
}

PauliVector dexp_hamiltonian(const RotationVector& n, const Vec3& n_dot) {
    const double alpha = n.alpha();
    if (alpha < kSmallAlpha) {
        return n_dot;
    }
    const Vec3 nhat = n.n / alpha;
    const double alpha_dot = nhat.dot(n_dot);
    const Vec3 nhat_dot = (n_dot - alpha_dot * nhat) / alpha;
    const double s2 = std::sin(2.0 * alpha);
    const double c2 = std::cos(2.0 * alpha);
    return 0.5 * s2 * nhat_dot + 0.5 * (1.0 - c2) * nhat.cross(nhat_dot) + alpha_dot * nhat;
}

KinematicFrame unit_kinematics(const Vec3& nhat, const Vec3& nhat_dot,
                               const Vec3& nhat_ddot) {
    KinematicFrame f;
    f.nhat = nhat;
    f.n_v = nhat_dot.norm();
    if (f.n_v < 1e-10) {
        f.degenerate = true;
        f.nhat_v = Vec3{0.0, 0.0, 0.0};
        f.nhat_perp = Vec3{0.0, 0.0, 0.0};
        return f;
    }
    f.nhat_v = nhat_dot / f.n_v;
    f.nhat_perp = f.nhat_v.cross(nhat);
    // d^2 nhat = nv_dot nhat_v + n_v [ (n_a.nhat) nhat + (n_a.nhat_perp) nhat_perp ]
    f.nv_dot = nhat_ddot.dot(f.nhat_v);
    f.a_par = nhat_ddot.dot(nhat) / f.n_v;
    f.a_perp = nhat_ddot.dot(f.nhat_perp) / f.n_v;
    return f;
}

}  // namespace xrwa
