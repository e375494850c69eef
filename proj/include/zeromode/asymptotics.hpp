#pragma once

// Diagnostics for the asymptotic limit of zero modes: the limit vector
// L(omega) = -(i/4pi) (alpha.omega) int Q f dy, radial scans of
// r^2 f(r omega) against a limit map, omega-uniformity ratios, the
// zero-limit equivalence, and the three-region error budget of the proof.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "zeromode/algebra.hpp"
#include "zeromode/fitting.hpp"
#include "zeromode/quadrature.hpp"
#include "zeromode/zero_modes.hpp"

namespace zeromode {

using LimitMap = std::function<C4(Vec3)>;

// ---------------------------------------------------------------------------
// Probe configuration
// ---------------------------------------------------------------------------

struct AsymptoticProbe {
    std::vector<Vec3> omega_set;      // unit directions
    std::vector<double> r_ladder;     // strictly increasing radii
    QuadratureRule rule;

    static AsymptoticProbe defaults(int omega_points = 64) {
        AsymptoticProbe p;
        p.omega_set = fibonacci_sphere(omega_points).points;
        for (int k = 0; k <= 5; ++k) p.r_ladder.push_back(10.0 * std::pow(2.0, k));
        return p;
    }

    void validate() const {
        for (const Vec3& w : omega_set)
            if (std::abs(norm(w) - 1.0) > 1e-14)
                throw std::invalid_argument("AsymptoticProbe: omega_set must be unit vectors");
        for (std::size_t i = 1; i < r_ladder.size(); ++i)
            if (!(r_ladder[i] > r_ladder[i - 1]))
                throw std::invalid_argument("AsymptoticProbe: radii must be strictly increasing");
        rule.validate();
    }
};

// ---------------------------------------------------------------------------
// The limit vector
// ---------------------------------------------------------------------------

/// Computes and caches M = int Q(y) f(y) dy once; the omega dependence of
/// L(omega) = -(i/4pi) (alpha.omega) M is purely algebraic, so the cached
/// route is both faster and exactly unitary in omega.
class LimitEvaluator {
  public:
    LimitEvaluator(const DiracZeroModePair& pair, const QuadratureRule& rule)
        : pair_(pair), rule_(rule) {
        auto integrand = [this](Vec3 y) { return pair_.Q(y) * pair_.f(y); };
        const AlgebraicDecay decay{pair_.decay.C_op * pair_.f_envelope, pair_.decay.rho + 2.0};
        moment_ = integrate_r3(integrand, rule_, decay);
    }

    const IntegralResult<C4>& moment() const { return moment_; }

    /// L(omega). Requires |omega| = 1.
    C4 limit(Vec3 omega) const {
        const complex scale{0.0, -1.0 / (4.0 * M_PI)};
        return scale * alpha_dot_apply(omega, moment_.value);
    }

    /// |L(omega)|, omega-independent by unitarity of alpha.omega.
    double limit_modulus() const { return moment_.value.norm() / (4.0 * M_PI); }

    /// Quadrature uncertainty transported to L.
    double limit_err() const { return moment_.err_est / (4.0 * M_PI); }

    LimitMap limit_map() const {
        return [*this](Vec3 omega) { return limit(omega); };
    }

    const DiracZeroModePair& pair() const { return pair_; }
    const QuadratureRule& rule() const { return rule_; }

  private:
    DiracZeroModePair pair_;
    QuadratureRule rule_;
    IntegralResult<C4> moment_;
};

/// One-shot convenience; prefer LimitEvaluator when several omegas share
/// the same pair.
inline C4 limit_vector(const DiracZeroModePair& pair, Vec3 omega, const QuadratureRule& rule) {
    return LimitEvaluator(pair, rule).limit(omega);
}

/// The 2-spinor limit of the Weyl-Dirac zero mode:
/// (i/4pi) int { (omega.A(y)) I2 + i sigma.(omega x A(y)) } psi(y) dy.
inline IntegralResult<C2> weyl_limit_vector(const SpinorField2& psi, const VectorField& A,
                                            const DecayBound& A_decay, double psi_envelope,
                                            Vec3 omega, const QuadratureRule& rule) {
    auto integrand = [&](Vec3 y) {
        const Vec3 a = A(y);
        const C2 p = psi(y);
        C2 r = dot(omega, a) * p;
        r += kImag * sigma_dot_apply(cross(omega, a), p);
        return r;
    };
    const AlgebraicDecay decay{2.0 * A_decay.C_op * psi_envelope, A_decay.rho + 2.0};
    IntegralResult<C2> res = integrate_r3(integrand, rule, decay);
    const complex scale{0.0, 1.0 / (4.0 * M_PI)};
    res.value = scale * res.value;
    res.err_est /= 4.0 * M_PI;
    res.radial_err /= 4.0 * M_PI;
    res.angular_err /= 4.0 * M_PI;
    res.tail /= 4.0 * M_PI;
    return res;
}

// ---------------------------------------------------------------------------
// Radial scan and uniformity
// ---------------------------------------------------------------------------

struct ScanRow {
    double r = 0.0;
    int omega_index = 0;
    double deviation = 0.0;  // |r^2 f(r omega) - L(omega)|
};

struct ScanReport {
    std::vector<ScanRow> rows;
    LogLogFit fit;          // log(deviation) vs log(r), all finite rows
    int non_finite = 0;     // excluded samples
};

/// Tabulates d(r, omega) = |r^2 f(r omega) - L(omega)| over the probe grid
/// and fits the convergence order. Non-finite field values are excluded from
/// the fit and counted.
inline ScanReport radial_scan(const SpinorField4& f, const LimitMap& limit_map,
                              const AsymptoticProbe& probe) {
    probe.validate();
    ScanReport rep;
    std::vector<double> xs, ys;
    for (double r : probe.r_ladder) {
        for (std::size_t i = 0; i < probe.omega_set.size(); ++i) {
            const Vec3 w = probe.omega_set[i];
            const C4 val = f(r * w);
            if (!val.finite()) {
                ++rep.non_finite;
                rep.rows.push_back({r, static_cast<int>(i),
                                    std::numeric_limits<double>::quiet_NaN()});
                continue;
            }
            const double d = ((r * r) * val - limit_map(w)).norm();
            rep.rows.push_back({r, static_cast<int>(i), d});
            xs.push_back(r);
            ys.push_back(d);
        }
    }
    rep.fit = fit_loglog(xs, ys);
    return rep;
}

struct UniformityReport {
    double r = 0.0;
    double max_dev = 0.0;
    double median_dev = 0.0;
    double ratio = 1.0;  // max/median; 1 when everything is exactly zero
};

/// Max over omega of d(r, omega), with the max/median spread ratio as the
/// uniformity figure of merit.
inline UniformityReport omega_uniformity(const SpinorField4& f, const LimitMap& limit_map,
                                         double r, const std::vector<Vec3>& omega_set) {
    if (omega_set.empty()) throw std::invalid_argument("omega_uniformity: empty omega set");
    UniformityReport rep;
    rep.r = r;
    std::vector<double> devs;
    devs.reserve(omega_set.size());
    for (const Vec3& w : omega_set) devs.push_back(((r * r) * f(r * w) - limit_map(w)).norm());
    std::sort(devs.begin(), devs.end());
    rep.max_dev = devs.back();
    const std::size_t n = devs.size();
    rep.median_dev = (n % 2) ? devs[n / 2] : 0.5 * (devs[n / 2 - 1] + devs[n / 2]);
    if (rep.max_dev == 0.0)
        rep.ratio = 1.0;
    else if (rep.median_dev == 0.0)
        rep.ratio = std::numeric_limits<double>::infinity();
    else
        rep.ratio = rep.max_dev / rep.median_dev;
    return rep;
}

// ---------------------------------------------------------------------------
// Zero-limit equivalence
// ---------------------------------------------------------------------------

struct EquivalenceReport {
    double integral_norm = 0.0;   // |int Q f dy|
    double integral_err = 0.0;
    double limit_modulus = 0.0;   // |L(omega)|, any omega
    bool integral_is_zero = false;  // within err_est
    bool limit_is_zero = false;     // within err_est / 4pi
    bool consistent = false;        // the two verdicts agree and the norms match
};

/// lim r^2 f = 0 for some (any) omega iff int Q f dy = 0: by unitarity the
/// two sides are the same number up to the 1/4pi factor, and this check
/// confirms the implementation preserves that.
inline EquivalenceReport zero_limit_equivalence(const LimitEvaluator& ev) {
    EquivalenceReport rep;
    rep.integral_norm = ev.moment().value.norm();
    rep.integral_err = ev.moment().err_est;
    rep.limit_modulus = ev.limit_modulus();
    rep.integral_is_zero = rep.integral_norm <= rep.integral_err;
    rep.limit_is_zero = rep.limit_modulus <= ev.limit_err();
    const double algebra_defect =
        std::abs(rep.limit_modulus - rep.integral_norm / (4.0 * M_PI));
    rep.consistent = (rep.integral_is_zero == rep.limit_is_zero) &&
                     algebra_defect <= 1e-12 * (1.0 + rep.limit_modulus);
    return rep;
}

// ---------------------------------------------------------------------------
// Three-region error budget
// ---------------------------------------------------------------------------

/// Region membership for the decomposition at parameters (r, R0):
/// 1: |y| <= R0; 2: |y| > R0 and |r omega - y| <= r/2; 3: the rest.
inline int budget_region(Vec3 y, Vec3 omega, double r, double R0) {
    if (norm(y) <= R0) return 1;
    return (norm(r * omega - y) <= 0.5 * r) ? 2 : 3;
}

struct ErrorBudget {
    double r = 0.0;
    double R0 = 0.0;
    double eps = 0.0;  // R0^(1-rho), the target scale of the region-3 bound
    IntegralResult<C4> part1, part2, part3;
    C4 lhs{};            // r^2 f(r omega) - L(omega)
    double lhs_err = 0.0;
    double mismatch = 0.0;      // |part1+part2+part3 - lhs|
    double combined_err = 0.0;  // sum of the quadrature estimates

    C4 sum() const { return part1.value + part2.value + part3.value; }
};

/// Splits the deviation r^2 f(r omega) - L(omega) into the integrals over
/// the three regions. Their sum reproduces the deviation up to quadrature
/// error; the parts carry the proof's scaling in r and R0.
inline ErrorBudget error_budget(const LimitEvaluator& ev, Vec3 omega, double r, double R0) {
    if (!(r >= 2.0 * R0))
        throw std::invalid_argument("error_budget: requires r >= 2 R0");
    if (!(R0 > 0.0)) throw std::invalid_argument("error_budget: R0 must be > 0");
    const DiracZeroModePair& pair = ev.pair();
    const QuadratureRule& rule = ev.rule();
    if (!(rule.r_max > 2.0 * r))
        throw std::invalid_argument("error_budget: rule.r_max must exceed 2 r");

    const complex scale{0.0, 1.0 / (4.0 * M_PI)};
    auto integrand = [&](Vec3 y) {
        const Vec3 k = omega - y / r;
        const double kn = norm(k);
        const Vec3 factor = omega - k / (kn * kn * kn);
        return scale * alpha_dot_apply(factor, pair.Q(y) * pair.f(y));
    };

    ErrorBudget b;
    b.r = r;
    b.R0 = R0;
    b.eps = std::pow(R0, 1.0 - pair.decay.rho);

    b.part1 = integrate_ball({0, 0, 0}, R0, integrand, rule);
    b.part2 = integrate_ball(r * omega, 0.5 * r, integrand, rule);

    auto far_integrand = [&](Vec3 y) {
        if (norm(r * omega - y) <= 0.5 * r) return C4{};
        return integrand(y);
    };
    // Beyond r_max the kernel factor is bounded by 1 + (r_max/r - 1)^-2.
    const double kf_bound = 1.0 + 1.0 / std::pow(rule.r_max / r - 1.0, 2.0);
    const AlgebraicDecay far_decay{
        kf_bound * pair.decay.C_op * pair.f_envelope / (4.0 * M_PI),
        pair.decay.rho + 2.0};
    b.part3 = integrate_shell({0, 0, 0}, R0, rule.r_max, far_integrand, rule, far_decay);

    b.lhs = (r * r) * pair.f(r * omega) - ev.limit(omega);
    b.lhs_err = ev.limit_err();
    b.mismatch = (b.sum() - b.lhs).norm();
    b.combined_err = b.part1.err_est + b.part2.err_est + b.part3.err_est + b.lhs_err;
    return b;
}

}  // namespace zeromode
