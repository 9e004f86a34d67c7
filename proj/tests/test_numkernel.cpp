#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <numbers>
#include <random>

#include "marx/circuit.hpp"
#include "marx/numkernel.hpp"
#include "marx/polysys.hpp"
#include "marx/solver.hpp"

using namespace marx;

namespace {

Matrix random_matrix(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = dist(rng) * scale;
    return m;
}

// The flatter root of the n=2 design quadratic, accurate to machine precision.
Vector exact_n2_k() {
    const double k1 = (72.0 - std::sqrt(864.0)) / 270.0;
    Vector k(2);
    k << k1, 2.0 / 5.0 - 0.75 * k1;
    return k;
}

} // namespace

TEST_CASE("eig of the identity") {
    const Spectrum s = eig(Matrix::Identity(3, 3));
    for (const auto& v : s.sorted()) {
        CHECK(v.real() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(v.imag() == doctest::Approx(0.0).epsilon(1e-14));
    }
}

TEST_CASE("eig of BF at the rounded n=2 design") {
    // f derived from the reference scaled values via f_i = n^2 / (n^2 c_i / c)
    Vector f(2);
    f << 4.0 / 0.63120, 4.0 / 1.12660;
    const Matrix bf = build_B(2).to_double() * f.asDiagonal();
    // independent check through trace/determinant before trusting {3, 15}
    CHECK(bf.trace() == doctest::Approx(18.0).epsilon(1e-4));
    CHECK(bf.determinant() == doctest::Approx(45.0).epsilon(1e-4));
    const auto v = eig(bf).sorted_real();
    CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(v[1] == doctest::Approx(15.0).epsilon(1e-3));
}

TEST_CASE("eig of the n=2 state matrix: pure imaginary pairs") {
    const Vector k = exact_n2_k();
    const StateModel model = build_A0(DesignSpec::standard(2), k.cwiseInverse());
    const Spectrum s = eig(model.A0);
    // {0, 0, ±j, ±2j, ±4j}
    std::vector<double> imag(s.values.size());
    for (Eigen::Index i = 0; i < s.values.size(); ++i) {
        CHECK(std::abs(s.values[i].real()) <= 1e-8);
        imag[i] = s.values[i].imag();
    }
    std::sort(imag.begin(), imag.end());
    const double expected_im[] = {-4.0, -2.0, -1.0, 0.0, 0.0, 1.0, 2.0, 4.0};
    REQUIRE(imag.size() == 8);
    for (int i = 0; i < 8; ++i) CHECK(std::abs(imag[i] - expected_im[i]) <= 1e-8);
}

TEST_CASE("eig input validation") {
    CHECK_THROWS_AS(eig(Matrix::Zero(2, 3)), std::invalid_argument);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eig(bad), std::invalid_argument);
}

TEST_CASE("eigenvector residuals stay within the backward error bound") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix a = random_matrix(6, rng);
        const Spectrum s = eig(a, true);
        for (int i = 0; i < 6; ++i) {
            const double res =
                (a * s.right.col(i) - s.values[i] * s.right.col(i)).norm();
            CHECK(res <= 1e-10 * std::max(1.0, a.norm()) * 100);
            CHECK(s.right.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
            const double left_res =
                (s.left.col(i).transpose() * a - s.values[i] * s.left.col(i).transpose())
                    .norm();
            CHECK(left_res <= 1e-10 * std::max(1.0, a.norm()) * 100);
        }
    }
}

TEST_CASE("eig multiset invariant under similarity") {
    const Vector k = exact_n2_k();
    const Vector f = k.cwiseInverse();
    const Matrix b = build_B(2).to_double();
    const Matrix bf = b * f.asDiagonal();
    const auto reference = eig(bf).sorted_real();

    // symmetrized route sqrt(F)·B·sqrt(F)
    const Vector sf = f.cwiseSqrt();
    const Matrix sym = sf.asDiagonal() * b * sf.asDiagonal();
    const auto symmetrized = eig(sym).sorted_real();
    for (int i = 0; i < 2; ++i)
        CHECK(symmetrized[i] == doctest::Approx(reference[i]).epsilon(1e-8));

    // random well-conditioned similarity transforms
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix t = Matrix::Identity(2, 2) + 0.2 * random_matrix(2, rng);
        const Matrix a = t * bf * t.inverse();
        const auto transformed = eig(a).sorted_real();
        for (int i = 0; i < 2; ++i)
            CHECK(std::abs(transformed[i] - reference[i]) <= 1e-8 * (1 + bf.norm()));
    }
}

TEST_CASE("smallest singular value basics") {
    const Matrix eye = Matrix::Identity(5, 5);
    CHECK(smallest_singular_value(eye) == doctest::Approx(1.0));
    Matrix rank1(2, 2);
    rank1 << 1, 1, 1, 1;
    CHECK(smallest_singular_value(rank1) <= 1e-14);
}

TEST_CASE("smallest singular value hits zero on an eigenvalue of A0") {
    const Vector k = exact_n2_k();
    const StateModel model = build_A0(DesignSpec::standard(2), k.cwiseInverse());
    ComplexMatrix shifted = -model.A0.cast<std::complex<double>>();
    shifted.diagonal().array() += std::complex<double>(0.0, 2.0 * model.omega0);
    CHECK(smallest_singular_value(shifted) <= 1e-8);
}

TEST_CASE("expm basics") {
    CHECK((expm(Matrix::Zero(3, 3), 1.0) - Matrix::Identity(3, 3)).norm() == doctest::Approx(0.0));

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = -0.3;
    d(1, 1) = 1.7;
    const Matrix e = expm(d, 1.0);
    CHECK(e(0, 0) == doctest::Approx(std::exp(-0.3)).epsilon(1e-14));
    CHECK(e(1, 1) == doctest::Approx(std::exp(1.7)).epsilon(1e-14));
    CHECK(std::abs(e(0, 1)) <= 1e-15);

    Matrix rot(2, 2);
    rot << 0, 1, -1, 0;
    const Matrix half_turn = expm(rot, std::numbers::pi);
    CHECK((half_turn + Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("expm rejects extreme arguments") {
    Matrix big = Matrix::Identity(2, 2) * 1e6;
    CHECK_THROWS_AS(expm(big, 1.0), std::domain_error);
    CHECK_THROWS_AS(expm(Matrix::Zero(2, 3), 1.0), std::invalid_argument);
}

TEST_CASE("expm additivity in t") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        Matrix a = random_matrix(6, rng);
        a /= std::max(1.0, a.norm());
        const double t1 = 0.37, t2 = 1.21;
        const Matrix lhs = expm(a, t1) * expm(a, t2);
        const Matrix rhs = expm(a, t1 + t2);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("expm of a skew-symmetric matrix is orthogonal") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 12; ++trial) {
        const Matrix m = random_matrix(6, rng);
        const Matrix s = m - m.transpose();
        const Matrix e = expm(s, 0.8);
        CHECK((e.transpose() * e - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-10);
    }
}
