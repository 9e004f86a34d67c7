#pragma once

#include <Eigen/Dense>

#include "marx/tolerances.hpp"

namespace marx {

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

/// Eigendecomposition result. Eigenvector columns, when requested, are unit
/// 2-norm and aligned with `values`; `left` satisfies wᵀA = λwᵀ for the
/// matching eigenvalue (paired to the right vectors by eigenvalue proximity,
/// ties broken by index order).
struct Spectrum {
    ComplexVector values;
    ComplexMatrix right;  // 0x0 unless requested
    ComplexMatrix left;   // 0x0 unless requested

    /// Eigenvalues sorted by (Re, Im).
    std::vector<std::complex<double>> sorted() const;
    /// Real parts sorted ascending (for spectra known to be real).
    std::vector<double> sorted_real() const;
};

/// Dense nonsymmetric eigensolve (real Schur based). Throws on non-square or
/// non-finite input and reports iteration failure instead of looping.
Spectrum eig(const Matrix& a, bool with_vectors = false,
             const Tolerances& tol = {});

/// σ_min(A), relative accuracy per Tolerances::svd_relative.
double smallest_singular_value(const Matrix& a);
double smallest_singular_value(const ComplexMatrix& a);

/// e^{A·t} by scaling and squaring. Rejects ‖A·t‖₁ beyond
/// Tolerances::expm_norm_limit with a diagnostic.
Matrix expm(const Matrix& a, double t = 1.0, const Tolerances& tol = {});

} // namespace marx
