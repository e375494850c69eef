#pragma once

// Closed-form zero-mode families of the Weyl-Dirac operator sigma.(D - A),
// their embedding into 4-spinor pairs (f, Q) for the massless Dirac operator
// alpha.D + Q, and pointwise finite-difference residual verification.

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "zeromode/algebra.hpp"

namespace zeromode {

using SpinorField2 = std::function<C2(Vec3)>;
using SpinorField4 = std::function<C4(Vec3)>;
using VectorField = std::function<Vec3(Vec3)>;
using ScalarField = std::function<double(Vec3)>;
using Mat2Field = std::function<Mat2(Vec3)>;
using Mat4Field = std::function<Mat4(Vec3)>;

/// Declared entrywise bound |q_jk(x)| <= C <x>^-rho with rho > 1, plus an
/// operator-norm companion used for certified quadrature tails.
struct DecayBound {
    double C = 0.0;
    double rho = 2.0;
    double C_op = 0.0;  // |Q(x)v| <= C_op <x>^-rho |v|; defaults to 4*C

    DecayBound() = default;
    DecayBound(double C_, double rho_, double C_op_ = -1.0)
        : C(C_), rho(rho_), C_op(C_op_ < 0.0 ? 4.0 * C_ : C_op_) {
        if (!(rho > 1.0))
            throw std::invalid_argument(
                "DecayBound: violates assumption (A), decay exponent rho must be > 1");
        if (C < 0.0) throw std::invalid_argument("DecayBound: C must be >= 0");
    }
};

// ---------------------------------------------------------------------------
// Loss-Yau family
// ---------------------------------------------------------------------------

/// The explicit zero mode psi(x) = <x>^-3 (I2 + i sigma.x) phi0 of the
/// Weyl-Dirac operator with vector potential
/// A(x) = 3 <x>^-4 {(1-|x|^2) w0 + 2 (w0.x) x + 2 w0 x x},
/// where w0_j = phi0 . (sigma_j phi0). Satisfies |psi| = <x>^-2 and
/// |A| = 3 <x>^-2 identically.
class LossYauMode {
  public:
    explicit LossYauMode(C2 phi0 = C2{{1.0, 0.0}}) : phi0_(phi0) {
        if (std::abs(phi0_.norm() - 1.0) > 1e-12)
            throw std::invalid_argument("LossYauMode: phi0 must be a unit spinor");
        w0_ = {std::real(inner(phi0_, sigma_dot_apply({1, 0, 0}, phi0_))),
               std::real(inner(phi0_, sigma_dot_apply({0, 1, 0}, phi0_))),
               std::real(inner(phi0_, sigma_dot_apply({0, 0, 1}, phi0_)))};
    }

    const C2& phi0() const { return phi0_; }
    const Vec3& w0() const { return w0_; }

    C2 psi(Vec3 x) const {
        const double b = jbracket(x);
        const double s = 1.0 / (b * b * b);
        C2 r = phi0_ + kImag * sigma_dot_apply(x, phi0_);
        return s * r;
    }

    Vec3 vector_potential(Vec3 x) const {
        const double b2 = 1.0 + norm2(x);
        const double s = 3.0 / (b2 * b2);
        const Vec3 braces =
            (1.0 - norm2(x)) * w0_ + (2.0 * dot(w0_, x)) * x + 2.0 * cross(w0_, x);
        return s * braces;
    }

    /// Closed-form limit of r^2 psi(r omega) as r -> infinity: i (sigma.omega) phi0.
    C2 limit_spinor(Vec3 omega) const { return kImag * sigma_dot_apply(omega, phi0_); }

  private:
    C2 phi0_;
    Vec3 w0_;
};

// ---------------------------------------------------------------------------
// AMN-form profiles: psi(x) = <x>^-2 U(x) phi0 with a declared limit U_inf
// ---------------------------------------------------------------------------

struct AmnMode {
    Mat2Field U;        // 2x2 profile
    Mat2Field U_limit;  // declared limit, evaluated at unit omega
    VectorField A;      // vector potential of the profile
    C2 phi0 = C2{{1.0, 0.0}};
    DecayBound A_decay{1.0, 2.0, 1.0};

    C2 psi(Vec3 x) const {
        const double b2 = 1.0 + norm2(x);
        return (1.0 / b2) * (U(x) * phi0);
    }
};

struct AmnAuditRow {
    double r = 0.0;
    double max_deviation = 0.0;  // max over omega of ||U(r omega) - U_limit(omega)||_F
};

/// Checks the declared limit along a radius ladder: the deviation should
/// decrease toward zero if U_limit really is the limit of U.
inline std::vector<AmnAuditRow> amn_limit_audit(const AmnMode& mode,
                                                const std::vector<Vec3>& omegas,
                                                const std::vector<double>& radii) {
    std::vector<AmnAuditRow> rows;
    rows.reserve(radii.size());
    for (double r : radii) {
        double worst = 0.0;
        for (const Vec3& w : omegas) {
            const Mat2 d = mode.U(r * w) - mode.U_limit(w);
            worst = std::max(worst, d.frobenius());
        }
        rows.push_back({r, worst});
    }
    return rows;
}

/// Registry of named AMN profiles for the CLI.
inline std::map<std::string, std::function<AmnMode()>>& amn_profile_registry() {
    static std::map<std::string, std::function<AmnMode()>> reg = [] {
        std::map<std::string, std::function<AmnMode()>> m;
        // The Loss-Yau mode recast in AMN form: U(x) = <x>^-1 (I2 + i sigma.x),
        // whose limit along x = r omega is i sigma.omega.
        m["loss-yau"] = [] {
            AmnMode mode;
            LossYauMode ly;
            mode.U = [](Vec3 x) {
                const double b = jbracket(x);
                Mat2 u = kImag * sigma_dot(x);
                u(0, 0) += 1.0;
                u(1, 1) += 1.0;
                return (1.0 / b) * u;
            };
            mode.U_limit = [](Vec3 w) { return kImag * sigma_dot(w); };
            mode.A = [ly](Vec3 x) { return ly.vector_potential(x); };
            mode.phi0 = ly.phi0();
            mode.A_decay = DecayBound{3.0, 2.0, 3.0};
            return mode;
        };
        return m;
    }();
    return reg;
}

// ---------------------------------------------------------------------------
// Dirac pairs (f, Q)
// ---------------------------------------------------------------------------

/// A 4-spinor field with its matrix potential and declared decay data.
/// Q(x) must be Hermitian with |q_jk| <= C <x>^-rho (audited by sampling,
/// not inferred: finitely many samples cannot certify a global bound).
struct DiracZeroModePair {
    SpinorField4 f;
    Mat4Field Q;
    DecayBound decay;             // on Q
    double f_envelope = 1.0;      // declared |f(x)| <= f_envelope * <x>^-2

    DiracZeroModePair(SpinorField4 f_, Mat4Field Q_, DecayBound d, double f_env = 1.0)
        : f(std::move(f_)), Q(std::move(Q_)), decay(d), f_envelope(f_env) {}
};

enum class WeylBlock { Upper, Lower };

/// Pads a 2-spinor into the chosen block of a 4-spinor.
inline C4 embed_spinor(const C2& u, WeylBlock block) {
    C4 r;
    if (block == WeylBlock::Upper) {
        r[0] = u[0];
        r[1] = u[1];
    } else {
        r[2] = u[0];
        r[3] = u[1];
    }
    return r;
}

/// Builds the pair f = (psi, 0) (or (0, psi)) and Q = -alpha.A + q I4.
/// The block structure of alpha maps (u, 0) to (0, sigma.(D-A)u), so a Weyl
/// zero mode embeds (with q = 0) into a zero mode of alpha.D + Q.
inline DiracZeroModePair embed_weyl_to_dirac(SpinorField2 psi, VectorField A,
                                             DecayBound declared,
                                             ScalarField q = nullptr,
                                             WeylBlock block = WeylBlock::Upper,
                                             double f_envelope = 1.0) {
    if (!(declared.rho > 1.0))
        throw std::invalid_argument(
            "embed_weyl_to_dirac: violates assumption (A), rho must be > 1");
    auto f = [psi, block](Vec3 x) { return embed_spinor(psi(x), block); };
    auto Qfn = [A, q](Vec3 x) {
        Mat4 m = -1.0 * alpha_dot(A(x));
        if (q) {
            const double qs = q(x);
            for (std::size_t i = 0; i < 4; ++i) m(i, i) += qs;
        }
        return m;
    };
    return DiracZeroModePair{std::move(f), std::move(Qfn), declared, f_envelope};
}

/// The canonical test pair: Loss-Yau, upper block, with (C, rho) = (3, 2).
/// The entries of alpha.A are bounded by |A| = 3 <x>^-2, and the operator
/// norm of alpha.A equals |A|.
inline DiracZeroModePair loss_yau_pair(const LossYauMode& mode = LossYauMode{},
                                       WeylBlock block = WeylBlock::Upper) {
    return embed_weyl_to_dirac([mode](Vec3 x) { return mode.psi(x); },
                               [mode](Vec3 x) { return mode.vector_potential(x); },
                               DecayBound{3.0, 2.0, 3.0}, nullptr, block, 1.0);
}

/// Same spinor but Q = 0: not a zero mode, useful as the free/zero-potential
/// reference where every limit vanishes.
inline DiracZeroModePair free_pair(const LossYauMode& mode = LossYauMode{},
                                   WeylBlock block = WeylBlock::Upper) {
    return DiracZeroModePair{
        [mode, block](Vec3 x) { return embed_spinor(mode.psi(x), block); },
        [](Vec3) { return Mat4::zero(); }, DecayBound{0.0, 2.0, 0.0}, 1.0};
}

// ---------------------------------------------------------------------------
// Finite-difference residuals
// ---------------------------------------------------------------------------

namespace detail {

// 4th-order central difference of a spinor field along axis j.
template <typename Field, typename S>
S central_diff4(const Field& g, Vec3 x, int j, double h) {
    Vec3 e{};
    if (j == 0) e = {1, 0, 0};
    else if (j == 1) e = {0, 1, 0};
    else e = {0, 0, 1};
    const S gp2 = g(x + (2.0 * h) * e);
    const S gp1 = g(x + h * e);
    const S gm1 = g(x - h * e);
    const S gm2 = g(x - (2.0 * h) * e);
    // symmetric pairing: exact zero on constants, less cancellation noise
    return (1.0 / (12.0 * h)) * (8.0 * (gp1 - gm1) - (gp2 - gm2));
}

}  // namespace detail

template <typename V>
struct FdResidual {
    V value{};
    bool step_warning = false;  // h below 1e-6: cancellation dominates truncation
};

/// Residual of the Weyl-Dirac operator at x:
/// sum_j sigma_j [ (1/i) d_j psi(x) - A_j(x) psi(x) ], with 4th-order
/// central differences for d_j. Zero (up to O(h^4)) iff psi is a zero mode.
inline FdResidual<C2> weyl_residual(const SpinorField2& psi, const VectorField& A, Vec3 x,
                                    double h = 1e-3) {
    if (!(h > 0.0)) throw std::invalid_argument("weyl_residual: h must be > 0");
    FdResidual<C2> out;
    out.step_warning = h < 1e-6;
    const Vec3 a = A(x);
    const C2 p = psi(x);
    const complex minus_i{0.0, -1.0};
    C2 acc{};
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int j = 0; j < 3; ++j) {
        C2 dj = detail::central_diff4<SpinorField2, C2>(psi, x, j, h);
        C2 term = minus_i * dj + (-a[static_cast<std::size_t>(j)]) * p;
        acc += sigma_dot_apply(axes[j], term);
    }
    out.value = acc;
    return out;
}

/// Residual of the full operator alpha.D + Q at x on a 4-spinor field.
inline FdResidual<C4> dirac_residual(const SpinorField4& f, const Mat4Field& Q, Vec3 x,
                                     double h = 1e-3) {
    if (!(h > 0.0)) throw std::invalid_argument("dirac_residual: h must be > 0");
    FdResidual<C4> out;
    out.step_warning = h < 1e-6;
    const complex minus_i{0.0, -1.0};
    C4 acc = Q(x) * f(x);
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int j = 0; j < 3; ++j) {
        C4 dj = detail::central_diff4<SpinorField4, C4>(f, x, j, h);
        acc += alpha_dot_apply(axes[j], minus_i * dj);
    }
    out.value = acc;
    return out;
}

// ---------------------------------------------------------------------------
// Sampled audits
// ---------------------------------------------------------------------------

struct PairAudit {
    double max_hermitian_defect = 0.0;  // worst ||Q - Q^H||_max over samples
    double worst_entry_ratio = 0.0;     // worst max|q_jk| <x>^rho / C (<= 1 required)
    double worst_f_ratio = 0.0;         // worst |f| <x>^2 / f_envelope
    bool decay_ok = true;
    bool hermitian_ok = true;
};

inline PairAudit audit_pair(const DiracZeroModePair& pair, const std::vector<Vec3>& points,
                            double hermitian_tol = 1e-12) {
    PairAudit a;
    for (const Vec3& x : points) {
        const Mat4 Q = pair.Q(x);
        a.max_hermitian_defect = std::max(a.max_hermitian_defect, max_abs_diff(Q, Q.adjoint()));
        const double envelope = pair.decay.C * std::pow(jbracket(x), -pair.decay.rho);
        if (pair.decay.C > 0.0)
            a.worst_entry_ratio = std::max(a.worst_entry_ratio, Q.max_abs() / envelope);
        else if (Q.max_abs() > 0.0)
            a.worst_entry_ratio = std::numeric_limits<double>::infinity();
        const double fb = pair.f(x).norm() * (1.0 + norm2(x));
        if (pair.f_envelope > 0.0)
            a.worst_f_ratio = std::max(a.worst_f_ratio, fb / pair.f_envelope);
    }
    a.hermitian_ok = a.max_hermitian_defect <= hermitian_tol;
    a.decay_ok = a.worst_entry_ratio <= 1.0 + 1e-12 && a.worst_f_ratio <= 1.0 + 1e-12;
    return a;
}

/// Continuity surrogate: max |f(x) - f(x')| / |x - x'| over pairs at
/// separation delta. Finite L is the (sampled) Lipschitz evidence.
inline double lipschitz_estimate(const SpinorField4& f, const std::vector<Vec3>& points,
                                 double delta = 1e-3) {
    double L = 0.0;
    const Vec3 dirs[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (const Vec3& x : points)
        for (const Vec3& d : dirs) {
            const Vec3 xp = x + delta * d;
            L = std::max(L, (f(xp) - f(x)).norm() / delta);
        }
    return L;
}

}  // namespace zeromode
