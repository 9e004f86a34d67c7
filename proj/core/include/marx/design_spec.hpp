#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace marx {

/// One Marx design problem instance: stage count, the even harmonics to
/// assign, and the common storage component values.
struct DesignSpec {
    int n = 1;
    std::vector<int> alpha;  // n distinct positive even integers
    double c = 1.0;          // storage capacitance, farads
    double ell = 1.0;        // stage inductance, henries

    /// alpha_i = 2i, the lowest admissible harmonic set.
    static DesignSpec standard(int n, double c = 1.0, double ell = 1.0);

    /// Throws std::invalid_argument on any violated invariant
    /// (n ≥ 1, alpha even/positive/distinct/size n, c > 0, ell > 0).
    void validate() const;

    double omega0() const { return 1.0 / std::sqrt(ell * c); }
    double transfer_time() const { return std::numbers::pi * std::sqrt(ell * c); }

    /// Assigned spectrum of BF: alpha_i² − 1, in alpha order.
    std::vector<double> target_spectrum() const;

    bool operator==(const DesignSpec&) const = default;
};

} // namespace marx
