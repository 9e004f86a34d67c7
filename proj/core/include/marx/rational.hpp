#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

namespace marx {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational scalar. Kept canonical: gcd(|num|, den) = 1, den > 0.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Renders as "num/den" (den ≥ 1, reduced), e.g. "-1/45", "3/1".
std::string rational_to_string(const Rational& r);

/// Accepts "num/den" or a bare integer "num". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

/// Dense matrix with exact rational entries, row-major.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols);
    static RationalMatrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const Rational& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * cols_ + j];
    }

    RationalMatrix operator*(const RationalMatrix& rhs) const;
    bool operator==(const RationalMatrix& rhs) const;

    /// Exact inverse by Gauss-Jordan elimination. Throws on a singular matrix.
    RationalMatrix inverse() const;

    /// Exact determinant, fraction-free Bareiss on the denominator-cleared
    /// integer matrix.
    Rational determinant() const;

    /// Determinant of the principal submatrix indexed by `idx` (sorted, unique).
    Rational principal_minor(const std::vector<int>& idx) const;

    Eigen::MatrixXd to_double() const;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> a_;
};

} // namespace marx
