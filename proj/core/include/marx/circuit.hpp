#pragma once

#include <iosfwd>
#include <string>

#include "marx/design_spec.hpp"
#include "marx/numkernel.hpp"
#include "marx/tolerances.hpp"

namespace marx {

/// State ordering of the 3n+2 model:
///   x = [v_c1..v_cn, v_1..v_n, v_{n+1}, i_1..i_n, i_L]
/// with the load voltage v_L = n·v_{n+1}.
struct StateModel {
    Matrix A0;        // (3n+2) x (3n+2)
    Vector T0_diag;   // diagonal of the skew-symmetrizing scaling
    double omega0 = 1.0;
    double T = 0.0;   // energy transfer time π√(ℓc)
    DesignSpec spec;
    Vector f;

    int dim() const { return 3 * spec.n + 2; }
    int index_vc(int i) const { return i; }              // 0-based, i < n
    int index_v(int i) const { return spec.n + i; }      // i ≤ n (i = n is v_{n+1})
    int index_i(int i) const { return 2 * spec.n + 1 + i; }  // i ≤ n (i = n is i_L)
};

/// Assembles A0 from the block layout and cross-checks every row against the
/// scalar circuit equations; mismatch throws std::logic_error.
StateModel build_A0(const DesignSpec& spec, const Vector& f);

struct ModalReport {
    double max_deviation = 0.0;   // matched distance σ(A0) vs modal prediction
    int rank = 0;
    int expected_rank = 0;        // 2n+2
    std::vector<double> a;        // a_k = sqrt(eig(I+BF)), ascending
    bool ok = false;
};

/// Verifies σ(A0) = {0(×n)} ∪ {±jω₀a_k, k=0..n} with a₀ = 1 and
/// a_k² = eig(I+BF), and that the zero eigenvalue has n eigenvectors.
ModalReport modal_check(const StateModel& model, const Tolerances& tol = {});

struct SimTrace {
    DesignSpec spec;
    double v0 = 1.0;
    Vector times;
    Matrix states;   // one row per sample
    Vector v_load;   // n·v_{n+1}
    Vector energy;   // (ℓ/2)·‖T0·x‖²
};

/// Free response from the charged-storage initial state on a uniform grid
/// over [0, T]. Every sample is an independent matrix exponential; the
/// endpoint is exactly expm(A0·T)·x0.
SimTrace simulate(const StateModel& model, double v0, int samples,
                  const Tolerances& tol = {});

struct TransferReport {
    double endpoint_residual = 0.0;  // ‖x(T) − v0·e_{v_{n+1}}‖∞
    double v_load_error = 0.0;       // |v_L(T) − n·v0|
    double energy_drift = 0.0;       // max relative drift
    bool pass = false;
};

/// Checks the full energy transfer at t = T over the trace.
TransferReport verify_transfer(const SimTrace& trace, const Tolerances& tol = {});

/// SPICE netlist of the designed ladder: storage caps c, inductors ℓ,
/// parasitic caps c_i = k_i·c, load branch nℓ and c/n, storage caps charged
/// at v0. Values printed with 12 significant digits.
void write_netlist(std::ostream& out, const DesignSpec& spec, const Vector& k,
                   double v0 = 1.0, const std::string& header_comment = {});

} // namespace marx
