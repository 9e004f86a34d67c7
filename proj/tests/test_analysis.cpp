#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "marx/analysis.hpp"
#include "marx/polysys.hpp"
#include "marx/solver.hpp"

#include "table1.hpp"

using namespace marx;

namespace {

DesignSolution reference_solution(int n, int row) {
    const auto& rows = marx_testdata::reference_rows(n);
    Vector guess(n);
    for (int i = 0; i < n; ++i) guess[i] = rows[row].scaled[i] / (n * n);
    return refine(system_k(DesignSpec::standard(n)), guess);
}

} // namespace

TEST_CASE("condition number of the scalar case is exactly one") {
    const SensitivityReport report =
        condition_numbers(DesignSpec::standard(1), Vector::Constant(1, 1.5));
    CHECK(report.max_condition == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(report.eigenvalues.size() == 1);
    CHECK(report.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("condition numbers match the published column") {
    const double expected2[] = {1.1102, 1.0266};
    for (int row = 0; row < 2; ++row) {
        const DesignSolution sol = reference_solution(2, row);
        const SensitivityReport report = condition_numbers(DesignSpec::standard(2), sol);
        CHECK(std::abs(report.max_condition - expected2[row]) <= 1e-3);
    }
    const DesignSolution last6 = reference_solution(6, 11);
    CHECK(std::abs(condition_numbers(DesignSpec::standard(6), last6).max_condition -
                   1.0592) <= 1e-3);
}

TEST_CASE("condition numbers reject multiple eigenvalues") {
    // a degenerate gain vector collapses the spectrum to a double eigenvalue
    CHECK_THROWS_AS(condition_numbers(DesignSpec::standard(2), Vector::Zero(2)),
                    std::domain_error);
}

TEST_CASE("condition numbers are invariant under uniform scaling of F") {
    const DesignSolution sol = reference_solution(3, 1);
    const DesignSpec spec = DesignSpec::standard(3);
    const SensitivityReport base = condition_numbers(spec, sol.f);
    const SensitivityReport scaled = condition_numbers(spec, Vector(7.5 * sol.f));
    REQUIRE(base.conditions.size() == scaled.conditions.size());
    for (std::size_t i = 0; i < base.conditions.size(); ++i)
        CHECK(std::abs(base.conditions[i] - scaled.conditions[i]) <= 1e-9);
}

TEST_CASE("pseudospectrum vanishes on the spectrum and grows far away") {
    const DesignSolution sol = reference_solution(2, 1);
    const StateModel model = build_A0(DesignSpec::standard(2), sol.f);

    // a 3x3 grid whose center row passes exactly through ±j·omega0... pick
    // window centered at the +j·omega0 eigenvalue
    const ComplexWindow window{-1e-3, 1e-3, model.omega0 - 1e-3, model.omega0 + 1e-3};
    const PseudospectrumGrid grid = pseudospectrum(model, window, 3, 3);
    CHECK(grid.sigma_min(1, 1) <= 1e-8);
    CHECK(grid.sigma_min.minCoeff() >= 0.0);

    // far point: sigma_min((1000+0j)I − A0) ≈ 1000 within 1%
    const PseudospectrumGrid far =
        pseudospectrum(model, ComplexWindow{1000.0, 1001.0, 0.0, 1.0}, 2, 2);
    CHECK(far.sigma_min(0, 0) == doctest::Approx(1000.0).epsilon(0.01));
}

TEST_CASE("pseudospectrum grid shape, defaults and validation") {
    const DesignSolution sol = reference_solution(2, 1);
    const StateModel model = build_A0(DesignSpec::standard(2), sol.f);
    const ComplexWindow window = default_window(model);
    CHECK(window.re_max == doctest::Approx(5.0));  // omega0·(max alpha + 1)
    const PseudospectrumGrid grid = pseudospectrum(model, window, 5, 7);
    CHECK(grid.re.size() == 5);
    CHECK(grid.im.size() == 7);
    CHECK(grid.sigma_min.rows() == 7);
    CHECK(grid.sigma_min.cols() == 5);
    CHECK_THROWS_AS(pseudospectrum(model, window, 1, 7), std::invalid_argument);

    bool has_level = false;
    for (double eps : default_epsilons())
        has_level = has_level || std::abs(eps - std::pow(10.0, 0.3)) < 1e-12;
    CHECK(has_level);
}

TEST_CASE("regular n=5 solution has the tightest pseudospectrum") {
    const DesignSpec spec = DesignSpec::standard(5);
    const StateModel regular = build_A0(spec, reference_solution(5, 3).f);
    const ComplexWindow window = default_window(regular);
    const PseudospectrumGrid reg_grid = pseudospectrum(regular, window, 21, 21);
    const double reg_max = reg_grid.sigma_min.maxCoeff();
    for (int row = 0; row < 3; ++row) {
        const StateModel other = build_A0(spec, reference_solution(5, row).f);
        const PseudospectrumGrid grid = pseudospectrum(other, window, 21, 21);
        CHECK(reg_max >= grid.sigma_min.maxCoeff() - 1e-12);
    }
}

TEST_CASE("q0 objective equals its quadratic form") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int n : {1, 2, 3, 5, 8}) {
        for (int trial = 0; trial < 20; ++trial) {
            Vector k(n);
            for (int i = 0; i < n; ++i) k[i] = dist(rng);
            CHECK(std::abs(q0_objective(k) - q0_quadratic_form(k)) <= 1e-12);
        }
    }
}

TEST_CASE("select_regular n=3 matches the certified minimizer") {
    SolutionSet set = enumerate(DesignSpec::standard(3));
    const auto indices = select_regular(set);
    REQUIRE(indices.size() == 1);
    const DesignSolution& reg = set.solutions[indices[0]];
    CHECK(reg.regular);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(reg.k[i] - marx_testdata::kRegular3K[i]) <= 1e-4);
}

TEST_CASE("select_regular n=2 picks the flatter profile") {
    SolutionSet set = enumerate(DesignSpec::standard(2));
    const auto indices = select_regular(set);
    REQUIRE(indices.size() == 1);
    const DesignSolution& reg = set.solutions[indices[0]];
    // scaled (0.63120, 1.12660) — no convexity constraints exist at n=2,
    // pure objective minimization
    CHECK(reg.scaled[0] == doctest::Approx(0.63120).epsilon(1e-4));
    CHECK(reg.scaled[1] == doctest::Approx(1.12660).epsilon(1e-4));
}

TEST_CASE("regular solution minimizes the condition number (n <= 4)") {
    for (int n = 2; n <= 4; ++n) {
        SolutionSet set = enumerate(DesignSpec::standard(n));
        const auto indices = select_regular(set);
        REQUIRE_FALSE(indices.empty());
        const double reg_cond = set.solutions[indices[0]].condition;
        for (const auto& sol : set.solutions)
            CHECK(reg_cond <= sol.condition + 1e-9);
    }
}

TEST_CASE("select_regular reports an empty feasible set") {
    SolutionSet set;
    set.spec = DesignSpec::standard(3);
    DesignSolution concave;
    concave.k = Vector(3);
    concave.k << 0.1, 0.5, 0.1;  // violates k1 − 2k2 + k3 ≥ 0
    set.solutions.push_back(concave);
    CHECK(select_regular(set).empty());
    CHECK_FALSE(set.solutions[0].regular);
}

TEST_CASE("convex_profile boundary behavior") {
    Vector k(3);
    k << 0.2, 0.2, 0.2;  // exactly on the boundary
    CHECK(convex_profile(k, 1e-9));
    k << 0.2, 0.2 + 1e-6, 0.2;
    CHECK_FALSE(convex_profile(k, 1e-9));
    Vector k2(2);
    k2 << 0.9, 0.1;  // no constraints at n = 2
    CHECK(convex_profile(k2, 0.0));
}
