#pragma once

#include <vector>

#include "marx/circuit.hpp"
#include "marx/solution.hpp"
#include "marx/tolerances.hpp"

namespace marx {

struct SensitivityReport {
    std::vector<double> eigenvalues;  // σ(BF), ascending
    std::vector<double> conditions;   // 1/|wᵀv| per eigenvalue, same order
    double max_condition = 1.0;
};

/// Eigenvalue condition numbers of BF from unit left/right eigenvectors.
/// Throws std::domain_error when an eigenvalue multiplicity is detected.
SensitivityReport condition_numbers(const DesignSpec& spec, const Vector& f);
SensitivityReport condition_numbers(const DesignSpec& spec,
                                    const DesignSolution& solution);

struct ComplexWindow {
    double re_min, re_max;
    double im_min, im_max;
};

/// Window covering the modal content of A0: both axes ±ω₀·(max α + 1).
ComplexWindow default_window(const StateModel& model);

struct PseudospectrumGrid {
    std::vector<double> re;         // grid axis, ascending
    std::vector<double> im;         // grid axis, ascending
    Matrix sigma_min;               // im.size() rows x re.size() cols
    std::vector<double> epsilons;   // contour levels for plotting
};

/// 10^{0.3} is always among the default contour levels.
std::vector<double> default_epsilons();

/// σ_min(zI − A0) sampled over the window.
PseudospectrumGrid pseudospectrum(const StateModel& model, const ComplexWindow& window,
                                  int re_resolution = 201, int im_resolution = 201,
                                  std::vector<double> epsilons = default_epsilons(),
                                  int threads = 0);

/// Convexity constraints of the regular-solution selection:
/// g_j(k) = k_j − 2k_{j+1} + k_{j+2}, j = 1..n−2.
bool convex_profile(const Vector& k, double tolerance);

/// Σ_{i,j}(k_i − k_j)², the "as flat as possible" objective.
double q0_objective(const Vector& k);
/// Same value through the closed quadratic form 2n·Σk² − 2(Σk)².
double q0_quadratic_form(const Vector& k);

/// Indices of the convexity-feasible solutions minimizing q0 (ties within
/// tol.q0_tie all returned). Marks `regular` on the set.
std::vector<std::size_t> select_regular(SolutionSet& set, const Tolerances& tol = {});

} // namespace marx
