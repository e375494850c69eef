#pragma once

// Dense complex 2x2 / 4x4 matrix algebra for the Pauli and Dirac matrices,
// plus the real 3-vectors they contract against. Sizes are fixed at compile
// time; everything is a value type and safe to share across threads.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

namespace zeromode {

using complex = std::complex<double>;

inline constexpr complex kImag{0.0, 1.0};

// ---------------------------------------------------------------------------
// Vec3
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr Vec3 operator*(Vec3 a, double s) { return s * a; }
    friend constexpr Vec3 operator/(Vec3 a, double s) { return {a.x / s, a.y / s, a.z / s}; }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

constexpr Vec3 cross(Vec3 a, Vec3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

constexpr double norm2(Vec3 a) { return dot(a, a); }

inline double norm(Vec3 a) { return std::sqrt(norm2(a)); }

inline Vec3 normalized(Vec3 a) { return a / norm(a); }

/// Japanese bracket <x> = sqrt(1 + |x|^2), the smoothed radius.
inline double jbracket(Vec3 x) { return std::sqrt(1.0 + norm2(x)); }
inline double jbracket(double r) { return std::sqrt(1.0 + r * r); }

// ---------------------------------------------------------------------------
// Complex spinors
// ---------------------------------------------------------------------------

template <std::size_t N>
struct CVec {
    std::array<complex, N> v{};

    complex& operator[](std::size_t i) { return v[i]; }
    const complex& operator[](std::size_t i) const { return v[i]; }

    friend CVec operator+(const CVec& a, const CVec& b) {
        CVec r;
        for (std::size_t i = 0; i < N; ++i) r.v[i] = a.v[i] + b.v[i];
        return r;
    }
    friend CVec operator-(const CVec& a, const CVec& b) {
        CVec r;
        for (std::size_t i = 0; i < N; ++i) r.v[i] = a.v[i] - b.v[i];
        return r;
    }
    friend CVec operator*(complex s, const CVec& a) {
        CVec r;
        for (std::size_t i = 0; i < N; ++i) r.v[i] = s * a.v[i];
        return r;
    }
    friend CVec operator*(double s, const CVec& a) { return complex(s, 0.0) * a; }
    CVec& operator+=(const CVec& b) {
        for (std::size_t i = 0; i < N; ++i) v[i] += b.v[i];
        return *this;
    }

    double norm2() const {
        double s = 0.0;
        for (const auto& c : v) s += std::norm(c);
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    bool finite() const {
        for (const auto& c : v)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        return true;
    }
};

using C2 = CVec<2>;
using C4 = CVec<4>;

/// Hermitian inner product, conjugate-linear in the first argument.
template <std::size_t N>
complex inner(const CVec<N>& a, const CVec<N>& b) {
    complex s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a.v[i]) * b.v[i];
    return s;
}

// ---------------------------------------------------------------------------
// Small dense complex matrices
// ---------------------------------------------------------------------------

template <std::size_t N>
struct CMat {
    std::array<complex, N * N> m{};

    complex& operator()(std::size_t i, std::size_t j) { return m[i * N + j]; }
    const complex& operator()(std::size_t i, std::size_t j) const { return m[i * N + j]; }

    static CMat zero() { return {}; }

    static CMat identity() {
        CMat r;
        for (std::size_t i = 0; i < N; ++i) r(i, i) = 1.0;
        return r;
    }

    CMat adjoint() const {
        CMat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    friend CMat operator+(const CMat& a, const CMat& b) {
        CMat r;
        for (std::size_t k = 0; k < N * N; ++k) r.m[k] = a.m[k] + b.m[k];
        return r;
    }
    friend CMat operator-(const CMat& a, const CMat& b) {
        CMat r;
        for (std::size_t k = 0; k < N * N; ++k) r.m[k] = a.m[k] - b.m[k];
        return r;
    }
    friend CMat operator*(complex s, const CMat& a) {
        CMat r;
        for (std::size_t k = 0; k < N * N; ++k) r.m[k] = s * a.m[k];
        return r;
    }
    friend CMat operator*(double s, const CMat& a) { return complex(s, 0.0) * a; }

    friend CMat operator*(const CMat& a, const CMat& b) {
        CMat r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const complex aik = a(i, k);
                for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend CVec<N> operator*(const CMat& a, const CVec<N>& x) {
        CVec<N> r;
        for (std::size_t i = 0; i < N; ++i) {
            complex s = 0.0;
            for (std::size_t j = 0; j < N; ++j) s += a(i, j) * x.v[j];
            r.v[i] = s;
        }
        return r;
    }

    double max_abs() const {
        double s = 0.0;
        for (const auto& c : m) s = std::max(s, std::abs(c));
        return s;
    }

    /// Largest elementwise |a_ij - b_ij|.
    friend double max_abs_diff(const CMat& a, const CMat& b) { return (a - b).max_abs(); }

    bool is_hermitian(double tol = 1e-13) const { return max_abs_diff(*this, adjoint()) <= tol; }

    double frobenius() const {
        double s = 0.0;
        for (const auto& c : m) s += std::norm(c);
        return std::sqrt(s);
    }
};

using Mat2 = CMat<2>;
using Mat4 = CMat<4>;

// ---------------------------------------------------------------------------
// Pauli and Dirac matrices
// ---------------------------------------------------------------------------

/// sigma_j, j in {1,2,3}.
inline Mat2 pauli(int j) {
    Mat2 s;
    switch (j) {
        case 1: s(0, 1) = 1.0; s(1, 0) = 1.0; break;
        case 2: s(0, 1) = -kImag; s(1, 0) = kImag; break;
        default: s(0, 0) = 1.0; s(1, 1) = -1.0; break;
    }
    return s;
}

/// alpha_j = [[0, sigma_j], [sigma_j, 0]].
inline Mat4 dirac_alpha(int j) {
    const Mat2 s = pauli(j);
    Mat4 a;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
            a(i, k + 2) = s(i, k);
            a(i + 2, k) = s(i, k);
        }
    return a;
}

/// v1 sigma1 + v2 sigma2 + v3 sigma3 = [[v3, v1-i v2], [v1+i v2, -v3]].
inline Mat2 sigma_dot(Vec3 v) {
    Mat2 s;
    s(0, 0) = v.z;
    s(0, 1) = complex(v.x, -v.y);
    s(1, 0) = complex(v.x, v.y);
    s(1, 1) = -v.z;
    return s;
}

/// v . alpha with block form [[0, sigma.v], [sigma.v, 0]].
inline Mat4 alpha_dot(Vec3 v) {
    const Mat2 s = sigma_dot(v);
    Mat4 a;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
            a(i, k + 2) = s(i, k);
            a(i + 2, k) = s(i, k);
        }
    return a;
}

/// (sigma.a)(sigma.b) contracted through the anticommutation relation:
/// (a.b) I2 + i sigma.(a x b). Computed from the right-hand side.
inline Mat2 pauli_contract(Vec3 a, Vec3 b) {
    Mat2 r = sigma_dot(cross(a, b));
    r = kImag * r;
    const double ab = dot(a, b);
    r(0, 0) += ab;
    r(1, 1) += ab;
    return r;
}

/// Applies sigma.v to a 2-spinor without forming the matrix.
inline C2 sigma_dot_apply(Vec3 v, const C2& u) {
    C2 r;
    r[0] = v.z * u[0] + complex(v.x, -v.y) * u[1];
    r[1] = complex(v.x, v.y) * u[0] - v.z * u[1];
    return r;
}

/// Applies alpha.v to a 4-spinor: (u, l) -> (sigma.v l, sigma.v u).
inline C4 alpha_dot_apply(Vec3 v, const C4& f) {
    C4 r;
    r[0] = v.z * f[2] + complex(v.x, -v.y) * f[3];
    r[1] = complex(v.x, v.y) * f[2] - v.z * f[3];
    r[2] = v.z * f[0] + complex(v.x, -v.y) * f[1];
    r[3] = complex(v.x, v.y) * f[0] - v.z * f[1];
    return r;
}

}  // namespace zeromode
