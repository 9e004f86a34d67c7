#pragma once

namespace marx {

/// Central tolerance configuration. Every numeric threshold used by the
/// toolkit lives here so that a run can be tightened or relaxed in one place
/// (the CLI exposes the overridable ones as --tol-* flags).
struct Tolerances {
    // numkernel
    double eig_backward = 1e-10;      // eigenvalue backward error, relative to ‖A‖
    double svd_relative = 1e-8;       // smallest singular value relative accuracy
    double expm_norm_limit = 1e3;     // reject expm when ‖A·t‖₁ exceeds this

    // path tracking / refinement
    double track_corrector = 1e-10;   // Newton corrector step tolerance while tracking
    double endpoint_gate = 1e-10;     // complex endpoint residual gate at t = 1
    double real_imag = 1e-8;          // |Im x_i| threshold for a real endpoint
    double polish_residual = 1e-12;   // refined solution residual_inf bound
    double dedup = 1e-6;              // ∞-norm solution deduplication radius
    double path_divergence = 1e8;     // ‖x‖∞ beyond which a path is diverged

    // validation
    double eig_match = 1e-6;          // sorted σ(BF) vs target spectrum
    double symm_match = 1e-8;         // σ(√F·B·√F) vs σ(BF)
    double validate_residual = 1e-8;  // residual precondition for validate()

    // circuit verification
    double transfer_endpoint = 1e-5;  // ‖x(T) − e_target‖∞
    double energy_drift = 1e-8;       // relative energy drift along a trace
    double skew_residual = 1e-12;     // T0·A0·T0⁻¹ skew-symmetry check
    double modal_match = 1e-6;        // σ(A0) vs predicted modal set

    // regular-solution selection
    double convexity = 1e-9;          // allow g_j ≥ −convexity at the boundary
    double q0_tie = 1e-9;             // objective tie tolerance
};

} // namespace marx
