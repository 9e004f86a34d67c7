#pragma once

#include <vector>

#include "marx/design_spec.hpp"
#include "marx/numkernel.hpp"

namespace marx {

/// One real design point. k_i = c_i/c lives in (0,1); f_i = 1/k_i; the
/// scaled convention n²·k_i is what external tables report.
struct DesignSolution {
    Vector k;
    Vector f;
    Vector scaled;          // n²·k_i
    double residual_inf = 0.0;  // max_i |q_i(k)|
    double eig_error = 0.0;     // max deviation of sorted σ(BF) from sorted α²−1
    double condition = 1.0;     // max eigenvalue condition number of BF
    bool valid = false;
    bool regular = false;
};

struct PathStats {
    long tracked = 0;
    long converged = 0;
    long diverged = 0;
    long failed = 0;
    long complex_endpoints = 0;
    long real_endpoints = 0;  // paths with a real endpoint, multiplicity included
};

/// All real solutions found for one spec, sorted lexicographically by the
/// scaled vector. `complete` is false when a path budget cut enumeration short.
struct SolutionSet {
    DesignSpec spec;
    std::vector<DesignSolution> solutions;
    PathStats path_stats;
    bool complete = true;
};

} // namespace marx
