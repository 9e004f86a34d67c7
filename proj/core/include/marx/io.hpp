#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "marx/analysis.hpp"
#include "marx/circuit.hpp"
#include "marx/polysys.hpp"
#include "marx/solution.hpp"
#include "marx/solver.hpp"

namespace marx::io {

/// Provenance block embedded in every output artifact.
struct Manifest {
    std::string tool;
    std::string version;
    std::uint64_t seed = 0;
    DesignSpec spec;
    std::string timestamp;  // ISO-8601 UTC; the only field exempt from
                            // byte-reproducibility

    static Manifest make(const DesignSpec& spec, std::uint64_t seed);
};

std::string manifest_json_text(const Manifest& m);

// --- solution sets ---
std::string solution_set_json(const SolutionSet& set, const Manifest& m);
std::string solution_set_csv(const SolutionSet& set, const Manifest& m);
/// Subset export used for regular.json (indices into set.solutions).
std::string solutions_subset_json(const SolutionSet& set,
                                  const std::vector<std::size_t>& indices,
                                  const Manifest& m);

/// Reads k-vectors (plus spec) back from any JSON written by the exporters
/// above, or from a minimal {"spec": {...}, "k": [...]} document.
struct SolutionFile {
    DesignSpec spec;
    std::vector<Vector> k_vectors;
};
SolutionFile read_solution_file(const std::filesystem::path& path);

// --- traces ---
std::string trace_csv(const SimTrace& trace, const Manifest& m);
std::string trace_json(const SimTrace& trace, const Manifest& m);

// --- pseudospectra ---
std::string grid_csv(const PseudospectrumGrid& grid, const Manifest& m);
std::string grid_json(const PseudospectrumGrid& grid, const Manifest& m);

// --- sensitivity ---
std::string sensitivity_json(const std::vector<SensitivityReport>& reports,
                             const Manifest& m);
std::string sensitivity_csv(const std::vector<SensitivityReport>& reports,
                            const Manifest& m);

// --- polynomial systems (debugging/cross-checking) ---
std::string polysystem_json(const PolySystem& system);
PolySystem parse_polysystem(const std::string& json_text);

void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace marx::io
