#pragma once

#include <complex>
#include <map>
#include <vector>

#include "marx/design_spec.hpp"
#include "marx/rational.hpp"

namespace marx {

/// Sparse multivariate polynomial over the rationals. Terms map a dense
/// exponent vector (length nvars) to a nonzero coefficient.
class RationalPolynomial {
public:
    using ExponentVector = std::vector<int>;
    using TermMap = std::map<ExponentVector, Rational>;

    explicit RationalPolynomial(int nvars = 0) : nvars_(nvars) {}

    static RationalPolynomial constant(int nvars, const Rational& value);
    static RationalPolynomial variable(int nvars, int index);

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int total_degree() const;

    /// Adds coeff·x^exp, dropping the term if it cancels to zero.
    void add_term(const ExponentVector& exp, const Rational& coeff);

    RationalPolynomial operator+(const RationalPolynomial& rhs) const;
    RationalPolynomial operator-(const RationalPolynomial& rhs) const;
    RationalPolynomial operator*(const RationalPolynomial& rhs) const;
    RationalPolynomial operator*(const Rational& scalar) const;
    RationalPolynomial operator-() const;
    bool operator==(const RationalPolynomial& rhs) const = default;

    RationalPolynomial derivative(int var) const;

    Rational evaluate(const std::vector<Rational>& point) const;
    double evaluate(const std::vector<double>& point) const;
    std::complex<double> evaluate(const std::vector<std::complex<double>>& point) const;

private:
    int nvars_;
    TermMap terms_;
};

enum class Formulation { F_FORM, K_FORM };

/// The n design equations in canonical order (total degree 1, 2, …, n).
struct PolySystem {
    Formulation formulation = Formulation::K_FORM;
    DesignSpec spec;
    std::vector<RationalPolynomial> polys;

    int nvars() const { return spec.n; }
    std::vector<int> degrees() const;

    std::vector<Rational> evaluate(const std::vector<Rational>& point) const;
    std::vector<double> evaluate(const std::vector<double>& point) const;
    std::vector<std::complex<double>>
    evaluate(const std::vector<std::complex<double>>& point) const;
};

/// Tridiagonal stiffness-like matrix of the assignment problem:
/// diag (2, …, 2, (n+1)/n), off-diagonals −1. Symmetric positive definite.
RationalMatrix build_B(int n);

/// Exact inverse of build_B(n). Every diagonal entry exceeds 1/2.
RationalMatrix build_B_inverse(int n);

/// Polynomials p_i(f): coefficients of det(sI − BF) − ∏(s − (α_i²−1)),
/// computed with the tridiagonal continuant recurrence, sign-normalized so
/// p_i = e_i(σ(BF)) − e_i(α²−1) with deg p_i = i.
PolySystem system_f(const DesignSpec& spec);

/// Polynomials q_i(k): same matching for det(sI − KB⁻¹) = ∏(s − (α_i²−1)⁻¹).
/// Multilinear; q_i = Σ_{|S|=i} det(B⁻¹[S])·∏_{j∈S} k_j − e_i((α²−1)⁻¹).
PolySystem system_k(const DesignSpec& spec);

/// Elementary symmetric polynomials e_1..e_n of the given rational values.
std::vector<Rational> elementary_symmetric(const std::vector<Rational>& values);

/// Σ 1/(α_j²−1) as an exact rational (the trace bound of the k-system).
Rational target_trace(const DesignSpec& spec);

} // namespace marx
