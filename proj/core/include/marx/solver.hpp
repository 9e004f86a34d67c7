#pragma once

#include <cstdint>
#include <string>

#include "marx/polysys.hpp"
#include "marx/solution.hpp"
#include "marx/tolerances.hpp"

namespace marx {

inline constexpr std::uint64_t kDefaultSeed = 1729;

struct EnumerateOptions {
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t max_paths = 0;      // 0 = no budget, track all n! paths
    int max_steps_per_path = 20000;
    double min_step = 1e-14;
    int threads = 0;                  // 0 = hardware concurrency
    int gamma_retries = 2;            // extra full sweeps when paths fail
    Tolerances tol;
};

/// Tracks every total-degree homotopy path of the K_FORM system, classifies
/// the endpoints, Newton-polishes the real ones and returns the deduplicated,
/// validated solution set.
SolutionSet enumerate(const DesignSpec& spec, const EnumerateOptions& options = {});

/// Damped Newton from `guess` on the given system (k- or f-variables per its
/// formulation). Converges to residual_inf ≤ tol.polish_residual or throws;
/// a singular Jacobian at the iterate also throws.
DesignSolution refine(const PolySystem& system, const Vector& guess,
                      const Tolerances& tol = {});

struct ValidationReport {
    bool spectrum_ok = false;       // sorted σ(BF) within tol of sorted α²−1
    bool f_positive = false;
    bool k_in_unit_box = false;     // every k_i in (0,1)
    bool k_sum_bounded = false;     // Σ k_i < 1
    bool symmetric_consistent = false;  // σ(√F·B·√F) matches σ(BF)
    double eig_error = 0.0;
    double symm_error = 0.0;

    bool ok() const {
        return spectrum_ok && f_positive && k_in_unit_box && k_sum_bounded &&
               symmetric_consistent;
    }
    std::string failing_clause() const;
};

ValidationReport validate(const DesignSolution& solution, const DesignSpec& spec,
                          const Tolerances& tol = {});

/// Number of real solutions found by enumerate().
int solution_count(const DesignSpec& spec, const EnumerateOptions& options = {});

/// Fills the derived fields (f, scaled, residual, spectra, condition, valid)
/// of a solution given its k vector.
DesignSolution finalize_solution(const DesignSpec& spec, const Vector& k,
                                 const Tolerances& tol = {});

} // namespace marx
