#pragma once

// Deterministic adaptive quadrature over R^3 for algebraically decaying
// integrands, structured as (radial panels) x (spherical lattice).
//
// The radial coordinate is stretched through r = t/(1-t), which maps [0,1)
// onto [0,inf) and turns |y|^-p decay into a smooth rational function of t;
// panels live in t-space and are refined by bisection, worst first, with a
// whole-vs-halves Gauss-Legendre error estimate per panel. The spherical
// factor is a pair of equal-weight Fibonacci lattices (the configured one
// and a fixed rotation of it); the reported value is their mean and their
// difference feeds the angular part of err_est, which the radial estimate
// alone cannot see. Beyond r_max the remainder is covered by a closed-form
// tail bound from the caller's declared decay. All reductions run in a
// fixed pairwise order, so a given rule and integrand reproduce the same
// bits on every run and thread count.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "zeromode/algebra.hpp"

namespace zeromode {

// ---------------------------------------------------------------------------
// Building blocks
// ---------------------------------------------------------------------------

struct GaussLegendre {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;  // sum to 2
};

/// Nodes/weights by Newton iteration on the Legendre recurrence.
inline GaussLegendre gauss_legendre(int n) {
    if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        double x = std::cos(M_PI * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        gl.nodes[n - 1 - k] = x;
        gl.weights[n - 1 - k] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return gl;
}

struct SphereLattice {
    std::vector<Vec3> points;  // unit vectors
    double weight = 0.0;       // common weight, 4*pi/N
};

/// Golden-angle Fibonacci lattice on S^2 with equal weights 4*pi/N.
inline SphereLattice fibonacci_sphere(int n) {
    if (n < 1) throw std::invalid_argument("fibonacci_sphere: need at least one point");
    SphereLattice lat;
    lat.points.reserve(n);
    lat.weight = 4.0 * M_PI / n;
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double th = ga * i;
        lat.points.push_back({rho * std::cos(th), rho * std::sin(th), z});
    }
    return lat;
}

/// Fixed rotation (1 radian about (1,1,1)) used for the companion lattice.
inline Vec3 companion_rotation(Vec3 u) {
    static const struct R {
        double m[3][3];
        R() {
            const Vec3 ax = normalized({1.0, 1.0, 1.0});
            const double c = std::cos(1.0), s = std::sin(1.0);
            const double k[3] = {ax.x, ax.y, ax.z};
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) m[i][j] = (i == j ? c : 0.0) + (1.0 - c) * k[i] * k[j];
            m[0][1] += -s * k[2]; m[0][2] += s * k[1];
            m[1][0] += s * k[2];  m[1][2] += -s * k[0];
            m[2][0] += -s * k[1]; m[2][1] += s * k[0];
        }
    } rot;
    return {rot.m[0][0] * u.x + rot.m[0][1] * u.y + rot.m[0][2] * u.z,
            rot.m[1][0] * u.x + rot.m[1][1] * u.y + rot.m[1][2] * u.z,
            rot.m[2][0] * u.x + rot.m[2][1] * u.y + rot.m[2][2] * u.z};
}

// Norm helper so the engine is generic over scalars and spinors.
inline double value_norm(double v) { return std::abs(v); }
inline double value_norm(const complex& v) { return std::abs(v); }
template <std::size_t N>
double value_norm(const CVec<N>& v) { return v.norm(); }

inline bool value_finite(double v) { return std::isfinite(v); }
inline bool value_finite(const complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
}
template <std::size_t N>
bool value_finite(const CVec<N>& v) { return v.finite(); }

/// Fixed-order pairwise (tree) summation; deterministic and accurate.
template <typename V>
V pairwise_sum(std::vector<V> xs) {
    if (xs.empty()) return V{};
    std::size_t n = xs.size();
    while (n > 1) {
        std::size_t h = 0;
        for (std::size_t i = 0; i + 1 < n; i += 2) xs[h++] = xs[i] + xs[i + 1];
        if (n % 2) xs[h++] = xs[n - 1];
        n = h;
    }
    return xs[0];
}

// ---------------------------------------------------------------------------
// Rule and declared decay
// ---------------------------------------------------------------------------

/// Declared algebraic bound |g(y)| <= coeff * <y>^-power, used only for the
/// certified truncation tail beyond r_max.
struct AlgebraicDecay {
    double coeff = 0.0;
    double power = 4.0;
};

struct QuadratureRule {
    double tol = 1e-6;        // absolute target for the adaptive radial part
    double r_max = 1e6;       // truncation radius; remainder covered by tail bound
    int sphere_points = 2048; // Fibonacci lattice size (per lattice of the pair)
    int radial_order = 16;    // Gauss-Legendre order per panel
    int initial_panels = 8;   // uniform t-space panels before adaptivity
    int adapt_depth = 48;     // max bisection depth per initial panel
    int max_panels = 4096;    // total leaf budget

    void validate() const {
        if (!(tol > 0.0)) throw std::invalid_argument("QuadratureRule: tol must be > 0");
        if (!(r_max > 0.0)) throw std::invalid_argument("QuadratureRule: r_max must be > 0");
        if (sphere_points < 8) throw std::invalid_argument("QuadratureRule: sphere_points < 8");
        if (radial_order < 2) throw std::invalid_argument("QuadratureRule: radial_order < 2");
        if (initial_panels < 1) throw std::invalid_argument("QuadratureRule: initial_panels < 1");
        if (adapt_depth < 1) throw std::invalid_argument("QuadratureRule: adapt_depth < 1");
        if (max_panels < initial_panels)
            throw std::invalid_argument("QuadratureRule: max_panels < initial_panels");
    }
};

template <typename V>
struct IntegralResult {
    V value{};
    double err_est = 0.0;   // radial estimate + angular estimate + tail bound
    bool converged = true;  // radial estimate met rule.tol within the budget
    int panels = 0;

    double radial_err = 0.0;
    double angular_err = 0.0;
    double tail = 0.0;
};

/// Certified upper bound on int_{|y|>R} C <y>^(-rho-2) dy.
/// Uses <y> >= |y|: bound = 4 pi C R^(1-rho) / (rho-1), which also matches
/// the true tail asymptotically.
inline double tail_bound(double C, double rho, double R) {
    if (!(rho > 1.0)) throw std::invalid_argument("tail_bound: rho must be > 1");
    if (!(R > 0.0)) throw std::invalid_argument("tail_bound: R must be > 0");
    return 4.0 * M_PI * C * std::pow(R, 1.0 - rho) / (rho - 1.0);
}

namespace detail {

// Tail of int |g| over {|y - center| > s_hi} given |g| <= C <y>^-p.
// With u = s - |c| >= u_lo: s^2 <= u^2 (1 + |c|/u_lo)^2 and <y> >= u.
inline double shifted_tail_bound(const AlgebraicDecay& d, double center_norm, double s_hi) {
    if (d.coeff == 0.0) return 0.0;
    if (!(d.power > 3.0))
        throw std::invalid_argument("integrate: declared decay power must be > 3");
    const double u_lo = s_hi - center_norm;
    if (!(u_lo > 0.0))
        throw std::invalid_argument("integrate: r_max too small for the pole offset");
    const double stretch = 1.0 + center_norm / u_lo;
    return stretch * stretch * tail_bound(d.coeff, d.power - 2.0, u_lo);
}

template <typename V>
struct LatticePair {
    V a{};
    V b{};
    friend LatticePair operator+(const LatticePair& p, const LatticePair& q) {
        return {p.a + q.a, p.b + q.b};
    }
    friend LatticePair operator-(const LatticePair& p, const LatticePair& q) {
        return {p.a - q.a, p.b - q.b};
    }
    double norm() const { return std::hypot(value_norm(a), value_norm(b)); }
};

template <typename F>
class RadialEngine {
    using V = std::decay_t<decltype(std::declval<F&>()(Vec3{}))>;
    using PV = LatticePair<V>;

  public:
    RadialEngine(F& g, Vec3 center, const QuadratureRule& rule)
        : g_(g), center_(center), rule_(rule), gl_(gauss_legendre(rule.radial_order)),
          lattice_(fibonacci_sphere(rule.sphere_points)) {
        companion_.reserve(lattice_.points.size());
        for (const Vec3& u : lattice_.points) companion_.push_back(companion_rotation(u));
    }

    IntegralResult<V> run(double s_lo, double s_hi,
                          const std::optional<AlgebraicDecay>& decay) {
        const double t_lo = s_lo / (1.0 + s_lo);
        const double t_hi = s_hi / (1.0 + s_hi);

        std::vector<Panel> leaves;
        leaves.reserve(static_cast<std::size_t>(rule_.max_panels));
        for (int i = 0; i < rule_.initial_panels; ++i) {
            const double a = t_lo + (t_hi - t_lo) * i / rule_.initial_panels;
            const double b = t_lo + (t_hi - t_lo) * (i + 1) / rule_.initial_panels;
            leaves.push_back(make_panel(a, b, 0));
        }

        // Worst-first refinement; ties resolved toward smaller radius.
        auto worse = [](const Panel& p, const Panel& q) {
            if (p.err != q.err) return p.err > q.err;
            return p.t0 < q.t0;
        };
        while (static_cast<int>(leaves.size()) < rule_.max_panels) {
            double total = 0.0;
            for (const Panel& p : leaves) total += p.err;
            if (total <= rule_.tol) break;
            std::size_t pick = leaves.size();
            for (std::size_t i = 0; i < leaves.size(); ++i) {
                if (leaves[i].depth >= rule_.adapt_depth) continue;
                if (pick == leaves.size() || worse(leaves[i], leaves[pick])) pick = i;
            }
            if (pick == leaves.size()) break;  // everything refinable is exhausted
            Panel parent = leaves[pick];
            leaves.erase(leaves.begin() + static_cast<std::ptrdiff_t>(pick));
            const double tm = 0.5 * (parent.t0 + parent.t1);
            leaves.push_back(make_panel(parent.t0, tm, parent.depth + 1, &parent.left));
            leaves.push_back(make_panel(tm, parent.t1, parent.depth + 1, &parent.right));
        }

        std::sort(leaves.begin(), leaves.end(),
                  [](const Panel& p, const Panel& q) { return p.t0 < q.t0; });
        std::vector<PV> vals;
        vals.reserve(leaves.size());
        double radial_err = 0.0;
        for (const Panel& p : leaves) {
            vals.push_back(p.left + p.right);
            radial_err += p.err;
        }
        const PV total = pairwise_sum(std::move(vals));

        IntegralResult<V> out;
        out.value = 0.5 * (total.a + total.b);
        out.panels = static_cast<int>(leaves.size());
        out.radial_err = radial_err;
        out.angular_err = 2.0 * value_norm(total.a - total.b);
        out.tail = decay ? shifted_tail_bound(*decay, norm(center_), s_hi) : 0.0;
        out.err_est = out.radial_err + out.angular_err + out.tail
                      + 5e-15 * value_norm(out.value);
        out.converged = radial_err <= rule_.tol;
        return out;
    }

  private:
    struct Panel {
        double t0, t1;
        int depth;
        PV left, right;  // half-panel Gauss-Legendre values
        double err;      // |whole - (left + right)|
    };

    // Spherical sums at radius s for both lattices, times s^2.
    PV shell(double s) const {
        const std::size_t n = lattice_.points.size();
        std::vector<V> sa(n), sb(n);
        for (std::size_t i = 0; i < n; ++i) {
            sa[i] = g_(center_ + s * lattice_.points[i]);
            sb[i] = g_(center_ + s * companion_[i]);
        }
        const double w = lattice_.weight * s * s;
        return {w * pairwise_sum(std::move(sa)), w * pairwise_sum(std::move(sb))};
    }

    PV gl_panel(double t0, double t1) const {
        const double half = 0.5 * (t1 - t0);
        const double mid = 0.5 * (t1 + t0);
        std::vector<PV> terms;
        terms.reserve(gl_.nodes.size());
        for (std::size_t k = 0; k < gl_.nodes.size(); ++k) {
            const double t = mid + half * gl_.nodes[k];
            const double om = 1.0 - t;
            const double s = t / om;
            const double jac = 1.0 / (om * om);
            PV sv = shell(s);
            const double w = gl_.weights[k] * half * jac;
            terms.push_back({w * sv.a, w * sv.b});
        }
        return pairwise_sum(std::move(terms));
    }

    Panel make_panel(double t0, double t1, int depth, const PV* whole_known = nullptr) {
        Panel p;
        p.t0 = t0;
        p.t1 = t1;
        p.depth = depth;
        const double tm = 0.5 * (t0 + t1);
        p.left = gl_panel(t0, tm);
        p.right = gl_panel(tm, t1);
        const PV whole = whole_known ? *whole_known : gl_panel(t0, t1);
        p.err = (whole - (p.left + p.right)).norm();
        return p;
    }

    F& g_;
    Vec3 center_;
    QuadratureRule rule_;
    GaussLegendre gl_;
    SphereLattice lattice_;
    std::vector<Vec3> companion_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

/// Integral of g over the spherical shell s_lo <= |y - center| <= s_hi.
template <typename F>
auto integrate_shell(Vec3 center, double s_lo, double s_hi, F&& g, const QuadratureRule& rule,
                     std::optional<AlgebraicDecay> tail_decay = {}) {
    rule.validate();
    if (!(s_hi > s_lo) || s_lo < 0.0)
        throw std::invalid_argument("integrate_shell: need 0 <= s_lo < s_hi");
    detail::RadialEngine<F> eng(g, center, rule);
    return eng.run(s_lo, s_hi, tail_decay);
}

/// Integral of g over R^3, truncated at |y| = rule.r_max with the remainder
/// certified from the caller's declared decay |g| <= C <y>^-p (p > 3).
template <typename F>
auto integrate_r3(F&& g, const QuadratureRule& rule,
                  std::optional<AlgebraicDecay> decay = {}) {
    return integrate_shell({0, 0, 0}, 0.0, rule.r_max, std::forward<F>(g), rule, decay);
}

/// Integral of g with an integrable singularity of order <= 2 at the pole:
/// spherical coordinates centered there cancel the singularity against the
/// s^2 Jacobian, and the Gauss-Legendre nodes never touch s = 0.
template <typename F>
auto integrate_singular(Vec3 pole, F&& g, const QuadratureRule& rule,
                        std::optional<AlgebraicDecay> decay = {}) {
    return integrate_shell(pole, 0.0, rule.r_max + norm(pole), std::forward<F>(g), rule, decay);
}

/// Integral of g over the ball |y - center| <= radius (exact domain, no tail).
template <typename F>
auto integrate_ball(Vec3 center, double radius, F&& g, const QuadratureRule& rule) {
    return integrate_shell(center, 0.0, radius, std::forward<F>(g), rule);
}

}  // namespace zeromode
