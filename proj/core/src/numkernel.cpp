#include "marx/numkernel.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace marx {

namespace {

void require_square_finite(const Matrix& a, const char* op) {
    if (a.rows() != a.cols())
        throw std::invalid_argument(std::string(op) + ": matrix must be square");
    if (!a.allFinite())
        throw std::invalid_argument(std::string(op) + ": matrix has non-finite entries");
}

// Greedy eigenvalue pairing by proximity, index order breaking ties.
std::vector<int> pair_by_proximity(const ComplexVector& ref, const ComplexVector& other) {
    const int n = static_cast<int>(ref.size());
    std::vector<bool> used(n, false);
    std::vector<int> match(n, -1);
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_j = -1;
        for (int j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = std::abs(ref[i] - other[j]);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        match[i] = best_j;
    }
    return match;
}

} // namespace

std::vector<std::complex<double>> Spectrum::sorted() const {
    std::vector<std::complex<double>> v(values.data(), values.data() + values.size());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return v;
}

std::vector<double> Spectrum::sorted_real() const {
    std::vector<double> v(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) v[i] = values[i].real();
    std::sort(v.begin(), v.end());
    return v;
}

Spectrum eig(const Matrix& a, bool with_vectors, const Tolerances& tol) {
    require_square_finite(a, "eig");
    Eigen::EigenSolver<Matrix> es(a, with_vectors);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eig: QR iteration did not converge");

    Spectrum s;
    s.values = es.eigenvalues();
    if (!with_vectors) return s;

    s.right = es.eigenvectors();  // unit columns
    Eigen::EigenSolver<Matrix> est(a.transpose(), true);
    if (est.info() != Eigen::Success)
        throw std::runtime_error("eig: QR iteration did not converge (transpose)");
    const auto match = pair_by_proximity(s.values, est.eigenvalues());
    s.left.resize(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i) s.left.col(i) = est.eigenvectors().col(match[i]);

    // Residual guard for simple eigenvalues; QR is backward stable so this
    // only trips on genuinely broken input.
    const double scale = std::max(1.0, a.norm());
    for (int i = 0; i < a.rows(); ++i) {
        const double res = (a * s.right.col(i) - s.values[i] * s.right.col(i)).norm();
        if (res > 1e4 * tol.eig_backward * scale) {
            std::ostringstream msg;
            msg << "eig: eigenpair residual " << res << " exceeds bound";
            throw std::runtime_error(msg.str());
        }
    }
    return s;
}

double smallest_singular_value(const Matrix& a) {
    if (!a.allFinite())
        throw std::invalid_argument("smallest_singular_value: non-finite entries");
    if (a.size() == 0) throw std::invalid_argument("smallest_singular_value: empty matrix");
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues().tail(1)(0);
}

double smallest_singular_value(const ComplexMatrix& a) {
    if (!a.allFinite())
        throw std::invalid_argument("smallest_singular_value: non-finite entries");
    if (a.size() == 0) throw std::invalid_argument("smallest_singular_value: empty matrix");
    Eigen::JacobiSVD<ComplexMatrix> svd(a);
    return svd.singularValues().tail(1)(0);
}

Matrix expm(const Matrix& a, double t, const Tolerances& tol) {
    require_square_finite(a, "expm");
    if (!std::isfinite(t)) throw std::invalid_argument("expm: non-finite time");
    const Matrix at = a * t;
    const double norm1 = at.cwiseAbs().colwise().sum().maxCoeff();
    if (norm1 > tol.expm_norm_limit) {
        std::ostringstream msg;
        msg << "expm: ||A*t||_1 = " << norm1 << " exceeds limit " << tol.expm_norm_limit
            << "; rescale the problem";
        throw std::domain_error(msg.str());
    }
    return at.exp();
}

} // namespace marx
