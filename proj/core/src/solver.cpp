#include "marx/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include "marx/analysis.hpp"

namespace marx {

namespace {

using Complex = std::complex<double>;

// Float-compiled view of a PolySystem: double coefficients, precomputed
// derivative polynomials, evaluation through per-variable power tables.
struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<int> exp;
    };
    std::vector<Term> terms;

    // tab is laid out var-major with the given stride; tab[v*stride + d] = x_v^d.
    template <typename Scalar>
    Scalar eval(const Scalar* tab, int stride) const {
        Scalar acc{};
        for (const auto& t : terms) {
            Scalar v{t.coeff};
            for (std::size_t var = 0; var < t.exp.size(); ++var)
                if (t.exp[var] > 0) v *= tab[var * stride + t.exp[var]];
            acc += v;
        }
        return acc;
    }

    // Value plus the magnitude sum Σ|coeff·monomial|, the natural backward
    // error scale of the evaluation.
    template <typename Scalar>
    Scalar eval_mag(const Scalar* tab, int stride, double& mag) const {
        Scalar acc{};
        mag = 0.0;
        for (const auto& t : terms) {
            Scalar v{t.coeff};
            for (std::size_t var = 0; var < t.exp.size(); ++var)
                if (t.exp[var] > 0) v *= tab[var * stride + t.exp[var]];
            acc += v;
            mag += std::abs(v);
        }
        return acc;
    }
};

struct CompiledSystem {
    int n = 0;
    int stride = 0;  // max power + 1
    std::vector<CompiledPoly> polys;  // n entries
    std::vector<CompiledPoly> jac;    // row-major n x n

    template <typename Scalar>
    void fill_table(const Scalar* x, Scalar* tab) const {
        for (int v = 0; v < n; ++v) {
            tab[v * stride] = Scalar{1.0};
            for (int d = 1; d < stride; ++d)
                tab[v * stride + d] = tab[v * stride + d - 1] * x[v];
        }
    }
};

CompiledPoly compile_poly(const RationalPolynomial& p) {
    CompiledPoly cp;
    cp.terms.reserve(p.terms().size());
    for (const auto& [e, c] : p.terms()) cp.terms.push_back({to_double(c), e});
    return cp;
}

CompiledSystem compile(const PolySystem& sys) {
    CompiledSystem cs;
    cs.n = sys.nvars();
    int max_pow = cs.n;  // start-system powers x_i^{d_i} reuse the same table
    for (const auto& p : sys.polys) {
        cs.polys.push_back(compile_poly(p));
        max_pow = std::max(max_pow, p.total_degree());
    }
    cs.stride = max_pow + 1;
    for (const auto& p : sys.polys)
        for (int v = 0; v < cs.n; ++v) cs.jac.push_back(compile_poly(p.derivative(v)));
    return cs;
}

template <typename Scalar>
struct Workspace {
    std::vector<Scalar> tab;
    Eigen::Vector<Scalar, Eigen::Dynamic> res, rhs, dx;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> jac;
    std::vector<double> mag;  // per-equation evaluation magnitude

    explicit Workspace(const CompiledSystem& cs)
        : tab(static_cast<std::size_t>(cs.n) * cs.stride),
          res(cs.n), rhs(cs.n), dx(cs.n), jac(cs.n, cs.n), mag(cs.n, 0.0) {}
};

template <typename Scalar>
void eval_residual(const CompiledSystem& cs, const Scalar* x, Workspace<Scalar>& ws,
                   bool with_mag = false) {
    cs.fill_table(x, ws.tab.data());
    for (int i = 0; i < cs.n; ++i) {
        if (with_mag)
            ws.res[i] = cs.polys[i].eval_mag(ws.tab.data(), cs.stride, ws.mag[i]);
        else
            ws.res[i] = cs.polys[i].eval(ws.tab.data(), cs.stride);
    }
}

template <typename Scalar>
void eval_jacobian(const CompiledSystem& cs, Workspace<Scalar>& ws) {
    // assumes the table already matches the evaluation point
    for (int i = 0; i < cs.n; ++i)
        for (int j = 0; j < cs.n; ++j)
            ws.jac(i, j) = cs.jac[i * cs.n + j].eval(ws.tab.data(), cs.stride);
}

// Row-equilibrated solve jac·dx = rhs (in place, destroys jac/rhs).
template <typename Scalar>
bool equilibrated_solve(Workspace<Scalar>& ws) {
    const int n = static_cast<int>(ws.jac.rows());
    for (int i = 0; i < n; ++i) {
        const double s = ws.jac.row(i).cwiseAbs().maxCoeff();
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        ws.jac.row(i) /= s;
        ws.rhs[i] /= s;
    }
    ws.dx = ws.jac.partialPivLu().solve(ws.rhs);
    return ws.dx.allFinite();
}

enum class PathStatus { converged, diverged, failed };

struct PathResult {
    PathStatus status = PathStatus::failed;
    ComplexVector endpoint;
};

struct TrackOptions {
    int max_steps = 20000;
    double min_dt = 1e-14;
    double dt_init = 0.05;
    double dt_max = 0.1;
    double corrector_tol = 1e-10;
    int corrector_iters = 4;
    double divergence = 1e8;
    double endgame_t = 0.97;
    double endpoint_gate = 1e-10;
};

// H(x,t) = (1−t)·γ·(x_i^{d_i} − 1) + t·Q(x)
struct Homotopy {
    const CompiledSystem& target;
    std::vector<int> degrees;
    Complex gamma;

    // residual and Jacobian of H at (x, t); fills the workspace table
    void eval(const ComplexVector& x, double t, Workspace<Complex>& ws) const {
        eval_residual(target, x.data(), ws);
        eval_jacobian(target, ws);
        ws.jac *= t;
        const Complex start_w = (1.0 - t) * gamma;
        for (int i = 0; i < target.n; ++i) {
            const int d = degrees[i];
            const Complex xd1 = ws.tab[i * target.stride + d - 1];
            ws.res[i] = start_w * (xd1 * x[i] - 1.0) + t * ws.res[i];
            ws.jac(i, i) += start_w * static_cast<double>(d) * xd1;
        }
    }

    // dH/dt = Q(x) − γ·G(x), reusing the freshly filled table
    void t_derivative(const ComplexVector& x, Workspace<Complex>& ws,
                      ComplexVector& ht) const {
        for (int i = 0; i < target.n; ++i) {
            const Complex xd = ws.tab[i * target.stride + degrees[i]];
            ht[i] = target.polys[i].eval(ws.tab.data(), target.stride) -
                    gamma * (xd - 1.0);
        }
    }
};

double inf_norm(const ComplexVector& v) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
    return m;
}

// Newton corrector at fixed t. Returns iterations used, or -1 on failure.
int correct(const Homotopy& h, ComplexVector& x, double t, const TrackOptions& opt,
            Workspace<Complex>& ws) {
    for (int it = 1; it <= opt.corrector_iters; ++it) {
        h.eval(x, t, ws);
        ws.rhs = -ws.res;
        if (!equilibrated_solve(ws)) return -1;
        x += ws.dx;
        if (inf_norm(ws.dx) <= opt.corrector_tol * std::max(1.0, inf_norm(x)))
            return it;
    }
    return -1;
}

// Final Newton polish against the target system; converged when every
// component sits at backward-error level relative to its evaluation magnitude.
bool polish_endpoint(const CompiledSystem& q, ComplexVector& x, double gate,
                     Workspace<Complex>& ws) {
    auto scaled_ok = [&] {
        for (int i = 0; i < q.n; ++i)
            if (std::abs(ws.res[i]) > gate * std::max(ws.mag[i], 1e-300)) return false;
        return true;
    };
    for (int it = 0; it < 50; ++it) {
        eval_residual(q, x.data(), ws, /*with_mag=*/true);
        if (scaled_ok()) return true;
        eval_jacobian(q, ws);
        ws.rhs = -ws.res;
        if (!equilibrated_solve(ws)) return false;
        const double step = inf_norm(ws.dx);
        x += ws.dx;
        if (step <= 1e-16 * std::max(1.0, inf_norm(x))) break;
    }
    eval_residual(q, x.data(), ws, /*with_mag=*/true);
    return scaled_ok();
}

// Davidenko tangent dx/dt = −H_x⁻¹·H_t at (x, t); false on a singular solve.
bool tangent(const Homotopy& h, const ComplexVector& x, double t,
             Workspace<Complex>& ws, ComplexVector& ht, ComplexVector& out) {
    h.eval(x, t, ws);
    h.t_derivative(x, ws, ht);
    ws.rhs = -ht;
    if (!equilibrated_solve(ws)) return false;
    out = ws.dx;
    return out.allFinite();
}

PathResult track_path(const Homotopy& h, ComplexVector x, const TrackOptions& opt,
                      Workspace<Complex>& ws) {
    double t = 0.0;
    double dt = opt.dt_init;
    const int n = h.target.n;
    ComplexVector ht(n), k1(n), k2(n), k3(n), k4(n), xp(n);

    for (int steps = 0; t < 1.0; ++steps) {
        if (steps > opt.max_steps) return {PathStatus::failed, x};
        dt = std::min(dt, 1.0 - t);
        if (t > opt.endgame_t && 1.0 - t > 1e-8) dt = std::min(dt, (1.0 - t) / 2);
        const bool final_step = dt >= 1.0 - t;
        const double t_next = final_step ? 1.0 : t + dt;

        // RK4 predictor on the Davidenko flow.
        const bool predicted = tangent(h, x, t, ws, ht, k1) &&
                               tangent(h, x + (dt / 2) * k1, t + dt / 2, ws, ht, k2) &&
                               tangent(h, x + (dt / 2) * k2, t + dt / 2, ws, ht, k3) &&
                               tangent(h, x + dt * k3, t_next, ws, ht, k4);
        int iters = -1;
        if (predicted) {
            xp = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            iters = xp.allFinite() ? correct(h, xp, t_next, opt, ws) : -1;
        }
        if (iters < 0) {
            dt /= 2;
            if (dt < opt.min_dt) {
                if (inf_norm(x) > 1e4) return {PathStatus::diverged, x};
                // Stalled close to t = 1: the endpoint Newton may still land
                // (ill-conditioned root clusters shrink the corrector basin).
                if (t > 0.99 && polish_endpoint(h.target, x, opt.endpoint_gate, ws))
                    return {PathStatus::converged, x};
                return {PathStatus::failed, x};
            }
            continue;
        }
        x = xp;
        t = t_next;
        if (inf_norm(x) > opt.divergence) return {PathStatus::diverged, x};
        if (iters <= 2) dt = std::min(dt * 2.0, opt.dt_max);
    }

    if (!polish_endpoint(h.target, x, opt.endpoint_gate, ws))
        return {PathStatus::failed, x};
    return {PathStatus::converged, x};
}

struct NewtonOutcome {
    Vector x;
    double residual_inf = 0.0;
    bool converged = false;
};

// Damped Newton with row equilibration; backtracks on the equilibrated
// residual norm. Used to polish real endpoints and by refine().
NewtonOutcome newton_refine(const CompiledSystem& q, Vector x, const Tolerances& tol,
                            int max_iters = 200) {
    Workspace<double> ws(q);
    auto raw_norm = [&] { return ws.res.cwiseAbs().maxCoeff(); };
    auto scaled_norm = [&] {
        double m = 0.0;
        for (int i = 0; i < q.n; ++i)
            m = std::max(m, std::abs(ws.res[i]) / std::max(ws.mag[i], 1e-300));
        return m;
    };

    eval_residual(q, x.data(), ws, true);
    for (int it = 0; it < max_iters; ++it) {
        if (raw_norm() <= tol.polish_residual || scaled_norm() <= 1e-15)
            return {x, raw_norm(), true};
        eval_jacobian(q, ws);
        ws.rhs = -ws.res;
        Matrix jac_scaled = ws.jac;
        Vector rhs_scaled = ws.rhs;
        for (int i = 0; i < q.n; ++i) {
            const double s = jac_scaled.row(i).cwiseAbs().maxCoeff();
            if (!(s > 0.0))
                throw std::runtime_error("refine: singular Jacobian at iterate");
            jac_scaled.row(i) /= s;
            rhs_scaled[i] /= s;
        }
        Eigen::FullPivLU<Matrix> lu(jac_scaled);
        if (!lu.isInvertible())
            throw std::runtime_error("refine: singular Jacobian at iterate");
        const Vector dx = lu.solve(rhs_scaled);

        const double current = scaled_norm();
        double lambda = 1.0;
        bool accepted = false;
        while (lambda >= 1e-8) {
            const Vector xn = x + lambda * dx;
            eval_residual(q, xn.data(), ws, true);
            if (scaled_norm() < current || raw_norm() <= tol.polish_residual) {
                x = xn;
                accepted = true;
                break;
            }
            lambda /= 2;
        }
        if (!accepted) {
            eval_residual(q, x.data(), ws, true);
            return {x, raw_norm(), raw_norm() <= tol.polish_residual};
        }
    }
    eval_residual(q, x.data(), ws, true);
    return {x, raw_norm(), raw_norm() <= tol.polish_residual};
}

std::uint64_t factorial_capped(int n, std::uint64_t cap) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) {
        if (f > cap / static_cast<std::uint64_t>(i)) return cap;
        f *= static_cast<std::uint64_t>(i);
    }
    return f;
}

bool lex_less(const Vector& a, const Vector& b) {
    for (Eigen::Index i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] < b[i]) return true;
        if (a[i] > b[i]) return false;
    }
    return a.size() < b.size();
}

} // namespace

DesignSolution finalize_solution(const DesignSpec& spec, const Vector& k,
                                 const Tolerances& tol) {
    DesignSolution sol;
    sol.k = k;
    sol.f = k.cwiseInverse();
    sol.scaled = static_cast<double>(spec.n) * static_cast<double>(spec.n) * k;

    const PolySystem sys = system_k(spec);
    std::vector<double> point(k.data(), k.data() + k.size());
    double r = 0.0;
    for (double v : sys.evaluate(point)) r = std::max(r, std::abs(v));
    sol.residual_inf = r;

    const ValidationReport report = validate(sol, spec, tol);
    sol.eig_error = report.eig_error;
    sol.valid = report.ok();
    sol.condition = condition_numbers(spec, sol.f).max_condition;
    return sol;
}

ValidationReport validate(const DesignSolution& solution, const DesignSpec& spec,
                          const Tolerances& tol) {
    spec.validate();
    const int n = spec.n;
    ValidationReport report;

    report.f_positive = (solution.f.array() > 0.0).all();
    report.k_in_unit_box =
        (solution.k.array() > 0.0).all() && (solution.k.array() < 1.0).all();
    report.k_sum_bounded = solution.k.sum() < 1.0;

    const Matrix b = build_B(n).to_double();
    const Matrix bf = b * solution.f.asDiagonal();
    std::vector<double> actual = eig(bf).sorted_real();
    std::vector<double> target = spec.target_spectrum();
    std::sort(target.begin(), target.end());
    double dev = 0.0;
    for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(actual[i] - target[i]));
    report.eig_error = dev;
    report.spectrum_ok = dev <= tol.eig_match;

    // Symmetrized route (inverse Jacobi form): σ(√F·B·√F) must agree.
    const Vector sqrt_f = solution.f.cwiseSqrt();
    const Matrix sym = sqrt_f.asDiagonal() * b * sqrt_f.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> saes(sym);
    double symm_dev = 0.0;
    for (int i = 0; i < n; ++i)
        symm_dev = std::max(symm_dev, std::abs(saes.eigenvalues()[i] - actual[i]));
    report.symm_error = symm_dev;
    report.symmetric_consistent = symm_dev <= tol.symm_match;
    return report;
}

std::string ValidationReport::failing_clause() const {
    if (!spectrum_ok) return "spectrum assignment";
    if (!f_positive) return "F positivity";
    if (!k_in_unit_box) return "k unit box";
    if (!k_sum_bounded) return "k sum bound";
    if (!symmetric_consistent) return "symmetrized spectrum";
    return {};
}

SolutionSet enumerate(const DesignSpec& spec, const EnumerateOptions& options) {
    spec.validate();
    const int n = spec.n;
    const PolySystem sys = system_k(spec);
    const CompiledSystem compiled = compile(sys);

    std::mt19937_64 rng(options.seed);
    auto next_gamma = [&rng] {
        const double angle =
            std::uniform_real_distribution<double>(0.0, 1.0)(rng) * 2.0 *
            std::numbers::pi;
        return Complex{std::cos(angle), std::sin(angle)};
    };

    const std::uint64_t total =
        factorial_capped(n, std::numeric_limits<std::uint64_t>::max());
    const std::uint64_t budget =
        options.max_paths == 0 ? total : std::min<std::uint64_t>(total, options.max_paths);

    TrackOptions topt;
    topt.max_steps = options.max_steps_per_path;
    topt.min_dt = options.min_step;
    topt.corrector_tol = options.tol.track_corrector;
    topt.divergence = options.tol.path_divergence;
    topt.endpoint_gate = options.tol.endpoint_gate;

    int nthreads = options.threads > 0
                       ? options.threads
                       : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, 16));

    auto run_sweep = [&](const Homotopy& h, std::vector<PathResult>& results) {
        std::atomic<std::uint64_t> next{0};
        auto worker = [&] {
            Workspace<Complex> ws(compiled);
            for (std::uint64_t p; (p = next.fetch_add(1)) < budget;) {
                // Mixed-radix start root: digit m_j of path p picks the m_j-th
                // d_j-th root of unity.
                ComplexVector start(n);
                std::uint64_t rem = p;
                for (int j = 0; j < n; ++j) {
                    const int d = h.degrees[j];
                    const int m = static_cast<int>(rem % static_cast<std::uint64_t>(d));
                    rem /= static_cast<std::uint64_t>(d);
                    const double th = 2.0 * std::numbers::pi * m / d;
                    start[j] = Complex{std::cos(th), std::sin(th)};
                }
                results[p] = track_path(h, std::move(start), topt, ws);
            }
        };
        if (nthreads == 1 || budget < 4) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(nthreads);
            for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
    };

    SolutionSet set;
    set.spec = spec;
    set.complete = budget == total;

    // A failed path hides an endpoint the sweep's gamma could not deliver;
    // independent gammas make a missed root increasingly unlikely.
    std::vector<Vector> real_candidates;
    for (int sweep = 0; sweep <= options.gamma_retries; ++sweep) {
        Homotopy h{compiled, sys.degrees(), next_gamma()};
        std::vector<PathResult> results(budget);
        run_sweep(h, results);

        long failed = 0;
        set.path_stats.tracked += static_cast<long>(budget);
        for (const auto& r : results) {
            switch (r.status) {
                case PathStatus::diverged: ++set.path_stats.diverged; break;
                case PathStatus::failed:
                    ++set.path_stats.failed;
                    ++failed;
                    break;
                case PathStatus::converged: {
                    ++set.path_stats.converged;
                    double im = 0.0;
                    for (Eigen::Index i = 0; i < r.endpoint.size(); ++i)
                        im = std::max(im, std::abs(r.endpoint[i].imag()));
                    if (im <= options.tol.real_imag) {
                        ++set.path_stats.real_endpoints;
                        real_candidates.push_back(r.endpoint.real());
                    } else {
                        ++set.path_stats.complex_endpoints;
                    }
                    break;
                }
            }
        }
        if (failed == 0) break;
    }

    std::vector<DesignSolution> polished;
    for (auto& cand : real_candidates) {
        NewtonOutcome out = newton_refine(compiled, std::move(cand), options.tol);
        if (!out.converged) {
            ++set.path_stats.failed;
            continue;
        }
        polished.push_back(finalize_solution(spec, out.x, options.tol));
    }

    std::sort(polished.begin(), polished.end(),
              [](const DesignSolution& a, const DesignSolution& b) {
                  return lex_less(a.scaled, b.scaled);
              });
    for (auto& sol : polished) {
        if (!set.solutions.empty()) {
            const double dist =
                (set.solutions.back().k - sol.k).cwiseAbs().maxCoeff();
            if (dist <= options.tol.dedup) continue;
        }
        set.solutions.push_back(std::move(sol));
    }
    return set;
}

DesignSolution refine(const PolySystem& system, const Vector& guess,
                      const Tolerances& tol) {
    if (guess.size() != system.nvars())
        throw std::invalid_argument("refine: guess dimension mismatch");
    const CompiledSystem compiled = compile(system);
    NewtonOutcome out = newton_refine(compiled, guess, tol);
    if (!out.converged)
        throw std::runtime_error("refine: Newton did not reach the residual target");
    Vector k = system.formulation == Formulation::K_FORM ? out.x : out.x.cwiseInverse();
    return finalize_solution(system.spec, k, tol);
}

int solution_count(const DesignSpec& spec, const EnumerateOptions& options) {
    return static_cast<int>(enumerate(spec, options).solutions.size());
}

} // namespace marx
