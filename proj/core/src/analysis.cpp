#include "marx/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "marx/polysys.hpp"

namespace marx {

SensitivityReport condition_numbers(const DesignSpec& spec, const Vector& f) {
    spec.validate();
    const int n = spec.n;
    if (f.size() != n)
        throw std::invalid_argument("condition_numbers: f dimension mismatch");

    const Matrix bf = build_B(n).to_double() * f.asDiagonal();
    const Spectrum spectrum = eig(bf, /*with_vectors=*/true);

    // Simple eigenvalues only; the assigned spectra are distinct by design.
    const double scale = std::max(1.0, bf.norm());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(spectrum.values[i] - spectrum.values[j]) < 1e-8 * scale)
                throw std::domain_error(
                    "condition_numbers: eigenvalue multiplicity detected");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return spectrum.values[a].real() < spectrum.values[b].real();
    });

    SensitivityReport report;
    report.eigenvalues.resize(n);
    report.conditions.resize(n);
    for (int i = 0; i < n; ++i) {
        const int j = order[i];
        report.eigenvalues[i] = spectrum.values[j].real();
        const std::complex<double> wv =
            (spectrum.left.col(j).transpose() * spectrum.right.col(j))(0);
        report.conditions[i] = 1.0 / std::abs(wv);
        report.max_condition = std::max(report.max_condition, report.conditions[i]);
    }
    return report;
}

SensitivityReport condition_numbers(const DesignSpec& spec,
                                    const DesignSolution& solution) {
    return condition_numbers(spec, solution.f);
}

ComplexWindow default_window(const StateModel& model) {
    const int amax = *std::max_element(model.spec.alpha.begin(), model.spec.alpha.end());
    const double r = model.omega0 * (amax + 1);
    return {-r, r, -r, r};
}

std::vector<double> default_epsilons() {
    // log-spaced levels; 10^{0.3} tops the set
    return {std::pow(10.0, -1.0), std::pow(10.0, -0.5), 1.0, std::pow(10.0, 0.3)};
}

PseudospectrumGrid pseudospectrum(const StateModel& model, const ComplexWindow& window,
                                  int re_resolution, int im_resolution,
                                  std::vector<double> epsilons, int threads) {
    if (re_resolution < 2 || im_resolution < 2)
        throw std::invalid_argument("pseudospectrum: resolution must be >= 2 per axis");

    PseudospectrumGrid grid;
    grid.epsilons = std::move(epsilons);
    grid.re.resize(re_resolution);
    grid.im.resize(im_resolution);
    for (int i = 0; i < re_resolution; ++i)
        grid.re[i] = window.re_min +
                     (window.re_max - window.re_min) * i / (re_resolution - 1);
    for (int i = 0; i < im_resolution; ++i)
        grid.im[i] = window.im_min +
                     (window.im_max - window.im_min) * i / (im_resolution - 1);
    grid.sigma_min.resize(im_resolution, re_resolution);

    const ComplexMatrix a0 = model.A0.cast<std::complex<double>>();
    auto eval_row = [&](int row) {
        ComplexMatrix shifted = -a0;
        for (int col = 0; col < re_resolution; ++col) {
            const std::complex<double> z(grid.re[col], grid.im[row]);
            shifted = -a0;
            shifted.diagonal().array() += z;
            grid.sigma_min(row, col) = smallest_singular_value(shifted);
        }
    };

    int nthreads = threads > 0 ? threads
                               : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min(nthreads, 16));
    if (nthreads == 1 || im_resolution < 4) {
        for (int row = 0; row < im_resolution; ++row) eval_row(row);
    } else {
        std::atomic<int> next{0};
        auto worker = [&] {
            for (int row; (row = next.fetch_add(1)) < im_resolution;) eval_row(row);
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return grid;
}

bool convex_profile(const Vector& k, double tolerance) {
    for (Eigen::Index j = 0; j + 2 < k.size(); ++j)
        if (k[j] - 2.0 * k[j + 1] + k[j + 2] < -tolerance) return false;
    return true;
}

double q0_objective(const Vector& k) {
    double q = 0.0;
    for (Eigen::Index i = 0; i < k.size(); ++i)
        for (Eigen::Index j = 0; j < k.size(); ++j) {
            const double d = k[i] - k[j];
            q += d * d;
        }
    return q;
}

double q0_quadratic_form(const Vector& k) {
    const double n = static_cast<double>(k.size());
    const double sum = k.sum();
    return 2.0 * n * k.squaredNorm() - 2.0 * sum * sum;
}

std::vector<std::size_t> select_regular(SolutionSet& set, const Tolerances& tol) {
    for (auto& sol : set.solutions) sol.regular = false;

    double best = std::numeric_limits<double>::infinity();
    for (const auto& sol : set.solutions) {
        if (!convex_profile(sol.k, tol.convexity)) continue;
        best = std::min(best, q0_objective(sol.k));
    }
    std::vector<std::size_t> indices;
    if (!std::isfinite(best)) return indices;  // empty: no convex-feasible solution
    for (std::size_t i = 0; i < set.solutions.size(); ++i) {
        auto& sol = set.solutions[i];
        if (!convex_profile(sol.k, tol.convexity)) continue;
        if (q0_objective(sol.k) <= best + tol.q0_tie) {
            sol.regular = true;
            indices.push_back(i);
        }
    }
    return indices;
}

} // namespace marx
