#include "marx/polysys.hpp"

#include <bit>
#include <stdexcept>

namespace marx {

RationalPolynomial RationalPolynomial::constant(int nvars, const Rational& value) {
    RationalPolynomial p(nvars);
    p.add_term(ExponentVector(nvars, 0), value);
    return p;
}

RationalPolynomial RationalPolynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars)
        throw std::invalid_argument("variable index out of range");
    RationalPolynomial p(nvars);
    ExponentVector e(nvars, 0);
    e[index] = 1;
    p.add_term(e, 1);
    return p;
}

int RationalPolynomial::total_degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_) {
        int d = 0;
        for (int x : e) d += x;
        deg = std::max(deg, d);
    }
    return deg;
}

void RationalPolynomial::add_term(const ExponentVector& exp, const Rational& coeff) {
    if (static_cast<int>(exp.size()) != nvars_)
        throw std::invalid_argument("exponent vector length mismatch");
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(exp, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0) terms_.erase(it);
    }
}

RationalPolynomial RationalPolynomial::operator+(const RationalPolynomial& rhs) const {
    RationalPolynomial out(*this);
    for (const auto& [e, c] : rhs.terms_) out.add_term(e, c);
    return out;
}

RationalPolynomial RationalPolynomial::operator-(const RationalPolynomial& rhs) const {
    RationalPolynomial out(*this);
    for (const auto& [e, c] : rhs.terms_) out.add_term(e, -c);
    return out;
}

RationalPolynomial RationalPolynomial::operator*(const RationalPolynomial& rhs) const {
    if (nvars_ != rhs.nvars_) throw std::invalid_argument("polynomial nvars mismatch");
    RationalPolynomial out(nvars_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : rhs.terms_) {
            ExponentVector e(nvars_);
            for (int v = 0; v < nvars_; ++v) e[v] = ea[v] + eb[v];
            out.add_term(e, ca * cb);
        }
    return out;
}

RationalPolynomial RationalPolynomial::operator*(const Rational& scalar) const {
    RationalPolynomial out(nvars_);
    if (scalar == 0) return out;
    for (const auto& [e, c] : terms_) out.add_term(e, c * scalar);
    return out;
}

RationalPolynomial RationalPolynomial::operator-() const { return *this * Rational(-1); }

RationalPolynomial RationalPolynomial::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::invalid_argument("variable index out of range");
    RationalPolynomial out(nvars_);
    for (const auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        ExponentVector d(e);
        d[var] -= 1;
        out.add_term(d, c * e[var]);
    }
    return out;
}

namespace {

template <typename Scalar>
Scalar eval_impl(const RationalPolynomial::TermMap& terms, int nvars,
                 const std::vector<Scalar>& point, Scalar zero) {
    if (static_cast<int>(point.size()) != nvars)
        throw std::invalid_argument("evaluation point dimension mismatch");
    Scalar acc = zero;
    for (const auto& [e, c] : terms) {
        Scalar term;
        if constexpr (std::is_same_v<Scalar, Rational>) {
            term = c;
        } else {
            term = Scalar(to_double(c));
        }
        for (int v = 0; v < nvars; ++v)
            for (int k = 0; k < e[v]; ++k) term *= point[v];
        acc += term;
    }
    return acc;
}

} // namespace

Rational RationalPolynomial::evaluate(const std::vector<Rational>& point) const {
    return eval_impl<Rational>(terms_, nvars_, point, Rational(0));
}

double RationalPolynomial::evaluate(const std::vector<double>& point) const {
    return eval_impl<double>(terms_, nvars_, point, 0.0);
}

std::complex<double>
RationalPolynomial::evaluate(const std::vector<std::complex<double>>& point) const {
    return eval_impl<std::complex<double>>(terms_, nvars_, point, {0.0, 0.0});
}

std::vector<int> PolySystem::degrees() const {
    std::vector<int> d;
    d.reserve(polys.size());
    for (const auto& p : polys) d.push_back(p.total_degree());
    return d;
}

template <typename Scalar>
static std::vector<Scalar> system_eval(const std::vector<RationalPolynomial>& polys,
                                       const std::vector<Scalar>& point) {
    std::vector<Scalar> out;
    out.reserve(polys.size());
    for (const auto& p : polys) out.push_back(p.evaluate(point));
    return out;
}

std::vector<Rational> PolySystem::evaluate(const std::vector<Rational>& point) const {
    return system_eval(polys, point);
}
std::vector<double> PolySystem::evaluate(const std::vector<double>& point) const {
    return system_eval(polys, point);
}
std::vector<std::complex<double>>
PolySystem::evaluate(const std::vector<std::complex<double>>& point) const {
    return system_eval(polys, point);
}

RationalMatrix build_B(int n) {
    if (n < 1) throw std::invalid_argument("build_B: n must be >= 1");
    RationalMatrix b(n, n);
    for (int i = 0; i < n; ++i) b(i, i) = 2;
    b(n - 1, n - 1) = Rational(n + 1, n);
    for (int i = 0; i + 1 < n; ++i) {
        b(i, i + 1) = -1;
        b(i + 1, i) = -1;
    }
    return b;
}

RationalMatrix build_B_inverse(int n) { return build_B(n).inverse(); }

std::vector<Rational> elementary_symmetric(const std::vector<Rational>& values) {
    std::vector<Rational> e(values.size() + 1);
    e[0] = 1;
    std::size_t filled = 0;
    for (const auto& v : values) {
        ++filled;
        for (std::size_t i = filled; i >= 1; --i) e[i] += v * e[i - 1];
    }
    return std::vector<Rational>(e.begin() + 1, e.end());
}

Rational target_trace(const DesignSpec& spec) {
    Rational sum = 0;
    for (int a : spec.alpha) sum += Rational(1, BigInt(a) * a - 1);
    return sum;
}

namespace {

std::vector<Rational> assigned_values(const DesignSpec& spec, bool inverted) {
    std::vector<Rational> v;
    v.reserve(spec.alpha.size());
    for (int a : spec.alpha) {
        BigInt m = BigInt(a) * a - 1;
        v.push_back(inverted ? Rational(1, m) : Rational(m));
    }
    return v;
}

} // namespace

PolySystem system_f(const DesignSpec& spec) {
    spec.validate();
    const int n = spec.n;
    const RationalMatrix b = build_B(n);

    // det(sI − BF) through the continuant recurrence
    //   D_k(s) = (s − b_k f_k)·D_{k−1}(s) − f_k·f_{k−1}·D_{k−2}(s),
    // each D_k held as its coefficient list in s (entries are polynomials in f).
    std::vector<RationalPolynomial> prev;                                    // D_{k-2}
    std::vector<RationalPolynomial> cur{RationalPolynomial::constant(n, 1)}; // D_0
    for (int k = 1; k <= n; ++k) {
        const RationalPolynomial fk_term =
            RationalPolynomial::variable(n, k - 1) * (-b(k - 1, k - 1));
        std::vector<RationalPolynomial> next(k + 1, RationalPolynomial(n));
        for (int j = 0; j < k; ++j) {
            next[j + 1] = next[j + 1] + cur[j];        // s·D_{k−1}
            next[j] = next[j] + fk_term * cur[j];      // −b_k f_k·D_{k−1}
        }
        if (k >= 2) {
            const RationalPolynomial ff = RationalPolynomial::variable(n, k - 1) *
                                          RationalPolynomial::variable(n, k - 2);
            for (int j = 0; j + 1 <= k - 1; ++j) next[j] = next[j] - ff * prev[j];
        }
        prev = std::move(cur);
        cur = std::move(next);
    }

    // Assigned characteristic polynomial ∏(s − (α_i²−1)): coefficient of
    // s^{n−i} is (−1)^i e_i, so matching and sign-normalizing gives
    // p_i = e_i(σ(BF)) − e_i(α²−1) with deg p_i = i.
    const std::vector<Rational> e = elementary_symmetric(assigned_values(spec, false));
    PolySystem sys;
    sys.formulation = Formulation::F_FORM;
    sys.spec = spec;
    sys.polys.reserve(n);
    for (int i = 1; i <= n; ++i) {
        const Rational sign = (i % 2 == 0) ? 1 : -1;
        RationalPolynomial p = cur[n - i] * sign;
        p.add_term(RationalPolynomial::ExponentVector(n, 0), -e[i - 1]);
        sys.polys.push_back(std::move(p));
    }
    return sys;
}

PolySystem system_k(const DesignSpec& spec) {
    spec.validate();
    const int n = spec.n;
    const RationalMatrix binv = build_B_inverse(n);

    // Multilinear structure: the s^{n−i} coefficient of det(sI − KB⁻¹) is
    // (−1)^i Σ_{|S|=i} det(B⁻¹[S])·∏_{j∈S} k_j.
    PolySystem sys;
    sys.formulation = Formulation::K_FORM;
    sys.spec = spec;
    sys.polys.assign(n, RationalPolynomial(n));
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<int> idx;
        RationalPolynomial::ExponentVector e(n, 0);
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) {
                idx.push_back(j);
                e[j] = 1;
            }
        const Rational minor = binv.principal_minor(idx);
        sys.polys[idx.size() - 1].add_term(e, minor);
    }
    const std::vector<Rational> e = elementary_symmetric(assigned_values(spec, true));
    for (int i = 1; i <= n; ++i)
        sys.polys[i - 1].add_term(RationalPolynomial::ExponentVector(n, 0), -e[i - 1]);
    return sys;
}

} // namespace marx
