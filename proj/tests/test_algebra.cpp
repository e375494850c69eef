#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "zeromode/algebra.hpp"

using namespace zeromode;

namespace {

std::mt19937 rng(12345);

Vec3 random_vec(double scale = 1.0) {
    std::normal_distribution<double> n;
    return {scale * n(rng), scale * n(rng), scale * n(rng)};
}

C4 random_spinor4() {
    std::normal_distribution<double> n;
    C4 v;
    for (int i = 0; i < 4; ++i) v[static_cast<std::size_t>(i)] = complex(n(rng), n(rng));
    return v;
}

Mat2 commutator_defect2(int j, int k) {
    const Mat2 lhs = pauli(j) * pauli(k) + pauli(k) * pauli(j);
    const Mat2 rhs = (j == k ? 2.0 : 0.0) * Mat2::identity();
    return lhs - rhs;
}

}  // namespace

TEST_CASE("pauli matrices match their displays", "[algebra]") {
    const Mat2 s1 = pauli(1);
    CHECK(s1(0, 0) == complex(0.0));
    CHECK(s1(0, 1) == complex(1.0));
    CHECK(s1(1, 0) == complex(1.0));
    CHECK(s1(1, 1) == complex(0.0));

    const Mat2 s2 = pauli(2);
    CHECK(s2(0, 1) == complex(0.0, -1.0));
    CHECK(s2(1, 0) == complex(0.0, 1.0));

    const Mat2 s3 = pauli(3);
    CHECK(s3(0, 0) == complex(1.0));
    CHECK(s3(1, 1) == complex(-1.0));

    // sigma_dot(e_j) reproduces sigma_j exactly
    const Vec3 axes[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    for (int j = 1; j <= 3; ++j)
        CHECK(max_abs_diff(sigma_dot(axes[j - 1]), pauli(j)) == 0.0);

    CHECK(sigma_dot({0, 0, 0}).max_abs() == 0.0);
}

TEST_CASE("anticommutation relations are exact", "[algebra]") {
    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k)
            CHECK(commutator_defect2(j, k).max_abs() <= 1e-15);

    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k) {
            const Mat4 lhs = dirac_alpha(j) * dirac_alpha(k) + dirac_alpha(k) * dirac_alpha(j);
            const Mat4 rhs = (j == k ? 2.0 : 0.0) * Mat4::identity();
            CHECK(max_abs_diff(lhs, rhs) <= 1e-15);
        }
}

TEST_CASE("alpha matrices have off-diagonal pauli blocks", "[algebra]") {
    const Mat4 a3 = alpha_dot({0, 0, 1});
    const Mat2 s3 = pauli(3);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(a3(i, k) == complex(0.0));
            CHECK(a3(i + 2, k + 2) == complex(0.0));
            CHECK(a3(i, k + 2) == s3(i, k));
            CHECK(a3(i + 2, k) == s3(i, k));
        }
}

TEST_CASE("unit contractions square to the identity", "[algebra]") {
    for (int trial = 0; trial < 64; ++trial) {
        const Vec3 w = normalized(random_vec());
        CHECK(max_abs_diff(sigma_dot(w) * sigma_dot(w), Mat2::identity()) <= 1e-15);
        CHECK(max_abs_diff(alpha_dot(w) * alpha_dot(w), Mat4::identity()) <= 1e-15);
        // unitarity of alpha.omega
        const Mat4 a = alpha_dot(w);
        CHECK(max_abs_diff(a.adjoint() * a, Mat4::identity()) <= 1e-15);
    }
}

TEST_CASE("alpha contraction is an isometry: |(alpha.x) f| = |x| |f|", "[algebra]") {
    for (int trial = 0; trial < 200; ++trial) {
        const Vec3 x = random_vec(3.0);
        const C4 f = random_spinor4();
        const double lhs = (alpha_dot(x) * f).norm();
        CHECK(std::abs(lhs - norm(x) * f.norm()) <= 1e-13 * (1.0 + lhs));
    }
}

TEST_CASE("pauli_contract matches the matrix product", "[algebra]") {
    // a = b = e1 -> I2
    CHECK(max_abs_diff(pauli_contract({1, 0, 0}, {1, 0, 0}), Mat2::identity()) == 0.0);

    // sigma1 sigma2 = i sigma3
    const Mat2 is3 = kImag * pauli(3);
    CHECK(max_abs_diff(pauli_contract({1, 0, 0}, {0, 1, 0}), is3) == 0.0);
    CHECK(max_abs_diff(pauli(1) * pauli(2), is3) == 0.0);
    CHECK(max_abs_diff(pauli(2) * pauli(3), kImag * pauli(1)) == 0.0);
    CHECK(max_abs_diff(pauli(3) * pauli(1), kImag * pauli(2)) == 0.0);

    for (int trial = 0; trial < 500; ++trial) {
        const Vec3 a = random_vec(2.0), b = random_vec(2.0);
        CHECK(max_abs_diff(sigma_dot(a) * sigma_dot(b), pauli_contract(a, b)) <= 1e-13);
    }
}

TEST_CASE("contractions are real-linear in the vector", "[algebra]") {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 a = random_vec(), b = random_vec();
        const double s = u(rng), t = u(rng);
        const Vec3 c = s * a + t * b;
        CHECK(max_abs_diff(sigma_dot(c), s * sigma_dot(a) + t * sigma_dot(b)) <= 1e-13);
        CHECK(max_abs_diff(alpha_dot(c), s * alpha_dot(a) + t * alpha_dot(b)) <= 1e-13);
    }
}

TEST_CASE("matrix multiplication is associative", "[algebra]") {
    std::normal_distribution<double> n;
    auto random_mat4 = [&] {
        Mat4 m;
        for (auto& c : m.m) c = complex(n(rng), n(rng));
        return m;
    };
    for (int trial = 0; trial < 50; ++trial) {
        const Mat4 a = random_mat4(), b = random_mat4(), c = random_mat4();
        CHECK(max_abs_diff((a * b) * c, a * (b * c)) <= 1e-14 * 100.0);
    }
}

TEST_CASE("hermitian predicate is exact on the generators", "[algebra]") {
    for (int j = 1; j <= 3; ++j) {
        CHECK(pauli(j).is_hermitian(0.0));
        CHECK(dirac_alpha(j).is_hermitian(0.0));
    }
    Mat2 not_h;
    not_h(0, 1) = complex(0.0, 1.0);
    CHECK_FALSE(not_h.is_hermitian(1e-13));
}

TEST_CASE("vector identities: |a x b|^2 = |a|^2 |b|^2 - (a.b)^2", "[algebra]") {
    for (int trial = 0; trial < 300; ++trial) {
        const Vec3 a = random_vec(2.0), b = random_vec(2.0);
        const double lhs = norm2(cross(a, b));
        const double rhs = norm2(a) * norm2(b) - dot(a, b) * dot(a, b);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * (1.0 + std::abs(rhs)));
    }
}

TEST_CASE("apply helpers agree with matrix application", "[algebra]") {
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 v = random_vec(2.0);
        const C4 f = random_spinor4();
        C2 u;
        u[0] = f[0];
        u[1] = f[1];
        CHECK(((sigma_dot(v) * u) - sigma_dot_apply(v, u)).norm() <= 1e-14);
        CHECK(((alpha_dot(v) * f) - alpha_dot_apply(v, f)).norm() <= 1e-14);
    }
}
