#include "marx/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace marx {

std::string rational_to_string(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

Rational parse_rational(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(BigInt(std::string(text)));
        }
        BigInt num{std::string(text.substr(0, slash))};
        BigInt den{std::string(text.substr(slash + 1))};
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument("bad rational literal '" + std::string(text) +
                                    "': " + e.what());
    }
}

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix size");
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const {
    if (cols_ != rhs.rows_) throw std::invalid_argument("matrix product size mismatch");
    RationalMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rational& aik = (*this)(i, k);
            if (aik == 0) continue;
            for (int j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
        }
    return out;
}

bool RationalMatrix::operator==(const RationalMatrix& rhs) const {
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && a_ == rhs.a_;
}

RationalMatrix RationalMatrix::inverse() const {
    if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
    const int n = rows_;
    RationalMatrix work(*this);
    RationalMatrix inv = identity(n);
    for (int col = 0; col < n; ++col) {
        int pivot = -1;
        for (int r = col; r < n; ++r)
            if (work(r, col) != 0) { pivot = r; break; }
        if (pivot < 0) throw std::runtime_error("singular rational matrix");
        if (pivot != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(work(pivot, j), work(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const Rational p = work(col, col);
        for (int j = 0; j < n; ++j) {
            work(col, j) /= p;
            inv(col, j) /= p;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || work(r, col) == 0) continue;
            const Rational factor = work(r, col);
            for (int j = 0; j < n; ++j) {
                work(r, j) -= factor * work(col, j);
                inv(r, j) -= factor * inv(col, j);
            }
        }
    }
    return inv;
}

namespace {

// Fraction-free Bareiss determinant over integers.
BigInt bareiss_det(std::vector<BigInt> m, int n) {
    BigInt prev = 1;
    int sign = 1;
    auto at = [&](int i, int j) -> BigInt& { return m[static_cast<std::size_t>(i) * n + j]; };
    for (int k = 0; k < n - 1; ++k) {
        if (at(k, k) == 0) {
            int swap_row = -1;
            for (int r = k + 1; r < n; ++r)
                if (at(r, k) != 0) { swap_row = r; break; }
            if (swap_row < 0) return 0;
            for (int j = 0; j < n; ++j) std::swap(at(k, j), at(swap_row, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
            }
            at(i, k) = 0;
        }
        prev = at(k, k);
    }
    return sign * at(n - 1, n - 1);
}

} // namespace

Rational RationalMatrix::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
    const int n = rows_;
    if (n == 0) return 1;
    // Clear denominators once, then run Bareiss over BigInt.
    BigInt scale = 1;
    for (const auto& r : a_) scale = lcm(scale, denominator(r));
    std::vector<BigInt> m;
    m.reserve(a_.size());
    for (const auto& r : a_) m.push_back(numerator(r) * (scale / denominator(r)));
    BigInt det_scaled = bareiss_det(std::move(m), n);
    Rational det(det_scaled);
    for (int i = 0; i < n; ++i) det /= scale;
    return det;
}

Rational RationalMatrix::principal_minor(const std::vector<int>& idx) const {
    RationalMatrix sub(static_cast<int>(idx.size()), static_cast<int>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j)
            sub(static_cast<int>(i), static_cast<int>(j)) = (*this)(idx[i], idx[j]);
    return sub.determinant();
}

Eigen::MatrixXd RationalMatrix::to_double() const {
    Eigen::MatrixXd out(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out(i, j) = marx::to_double((*this)(i, j));
    return out;
}

} // namespace marx
