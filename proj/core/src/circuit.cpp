#include "marx/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace marx {

namespace {

// Pairwise difference operator Σ ∈ R^{n x (n+1)}: row k is e_k − e_{k+1}.
Matrix sigma_matrix(int n) {
    Matrix s = Matrix::Zero(n, n + 1);
    for (int i = 0; i < n; ++i) {
        s(i, i) = 1.0;
        s(i, i + 1) = -1.0;
    }
    return s;
}

// A0 assembled directly from the scalar circuit equations; the block form
// must reproduce this exactly.
Matrix scalar_equations(const DesignSpec& spec, const Vector& f) {
    const int n = spec.n;
    const double c = spec.c;
    const double ell = spec.ell;
    Matrix a = Matrix::Zero(3 * n + 2, 3 * n + 2);
    const int vc0 = 0, v0 = n, iL = 3 * n + 1;
    // c_k v̇_ck = i_{k+1} − i_k (k < n), c_n v̇_cn = −i_L − i_n, c_k = c/f_k
    for (int k = 0; k < n - 1; ++k) {
        a(vc0 + k, 2 * n + 1 + k + 1) = f[k] / c;
        a(vc0 + k, 2 * n + 1 + k) = -f[k] / c;
    }
    a(vc0 + n - 1, iL) = -f[n - 1] / c;
    a(vc0 + n - 1, 2 * n + 1 + n - 1) = -f[n - 1] / c;
    // c v̇_k = i_k, c v̇_{n+1} = i_L
    for (int k = 0; k <= n; ++k) a(v0 + k, 2 * n + 1 + k) = 1.0 / c;
    // ℓ i̇_1 = v_c1 − v_1; ℓ i̇_k = v_ck − v_c(k−1) − v_k; nℓ i̇_L = v_cn − n·v_{n+1}
    a(2 * n + 1, vc0) = 1.0 / ell;
    a(2 * n + 1, v0) = -1.0 / ell;
    for (int k = 1; k < n; ++k) {
        a(2 * n + 1 + k, vc0 + k) = 1.0 / ell;
        a(2 * n + 1 + k, vc0 + k - 1) = -1.0 / ell;
        a(2 * n + 1 + k, v0 + k) = -1.0 / ell;
    }
    a(iL, vc0 + n - 1) = 1.0 / (n * ell);
    a(iL, v0 + n) = -1.0 / ell;
    return a;
}

} // namespace

StateModel build_A0(const DesignSpec& spec, const Vector& f) {
    spec.validate();
    const int n = spec.n;
    if (f.size() != n) throw std::invalid_argument("build_A0: f dimension mismatch");
    if (!(f.array() > 0.0).all())
        throw std::invalid_argument("build_A0: f entries must be positive");

    const Matrix sigma = sigma_matrix(n);
    Vector j_np1 = Vector::Ones(n + 1);
    j_np1[n] = static_cast<double>(n);
    Vector j_m1 = Vector::Ones(n + 1);  // J_{-1} sized n+1 for conformability
    j_m1[n] = -1.0;

    const int dim = 3 * n + 2;
    Matrix a0 = Matrix::Zero(dim, dim);
    // top-right: voltage derivatives from the n+1 inductor currents
    Matrix fsj = f.asDiagonal() * sigma;
    fsj = fsj * j_m1.asDiagonal();
    a0.block(0, 2 * n + 1, n, n + 1) = -(1.0 / spec.c) * fsj;
    a0.block(n, 2 * n + 1, n + 1, n + 1) =
        (1.0 / spec.c) * Matrix::Identity(n + 1, n + 1);
    // bottom-left: current derivatives from the 2n+1 capacitor voltages
    const Vector j_np1_inv = j_np1.cwiseInverse();
    Matrix jjs = j_m1.asDiagonal() * sigma.transpose();
    jjs = j_np1_inv.asDiagonal() * jjs;
    a0.block(2 * n + 1, 0, n + 1, n) = (1.0 / spec.ell) * jjs;
    a0.block(2 * n + 1, n, n + 1, n + 1) =
        -(1.0 / spec.ell) * Matrix::Identity(n + 1, n + 1);

    const Matrix direct = scalar_equations(spec, f);
    const double scale = std::max(1.0, a0.cwiseAbs().maxCoeff());
    if (((a0 - direct).cwiseAbs().maxCoeff()) > 1e-12 * scale)
        throw std::logic_error("build_A0: block form disagrees with circuit equations");

    StateModel model;
    model.A0 = std::move(a0);
    model.omega0 = spec.omega0();
    model.T = spec.transfer_time();
    model.spec = spec;
    model.f = f;

    model.T0_diag.resize(dim);
    const double cl = std::sqrt(spec.c / spec.ell);
    for (int i = 0; i < n; ++i) model.T0_diag[i] = -cl / std::sqrt(f[i]);
    for (int i = 0; i <= n; ++i) model.T0_diag[n + i] = cl * std::sqrt(j_np1[i]);
    for (int i = 0; i <= n; ++i) model.T0_diag[2 * n + 1 + i] = std::sqrt(j_np1[i]);
    return model;
}

ModalReport modal_check(const StateModel& model, const Tolerances& tol) {
    const int n = model.spec.n;
    ModalReport report;
    report.expected_rank = 2 * n + 2;

    // a_k from the symmetric form of I + BF.
    Matrix bmat = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) bmat(i, i) = 2.0;
    bmat(n - 1, n - 1) = (n + 1.0) / n;
    for (int i = 0; i + 1 < n; ++i) {
        bmat(i, i + 1) = -1.0;
        bmat(i + 1, i) = -1.0;
    }
    const Vector sqrt_f = model.f.cwiseSqrt();
    const Matrix sym =
        Matrix::Identity(n, n) + sqrt_f.asDiagonal() * bmat * sqrt_f.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Matrix> saes(sym);
    report.a.resize(n);
    for (int i = 0; i < n; ++i) report.a[i] = std::sqrt(saes.eigenvalues()[i]);

    std::vector<std::complex<double>> expected;
    expected.reserve(model.dim());
    for (int i = 0; i < n; ++i) expected.emplace_back(0.0, 0.0);
    expected.emplace_back(0.0, model.omega0);
    expected.emplace_back(0.0, -model.omega0);
    for (int i = 0; i < n; ++i) {
        expected.emplace_back(0.0, model.omega0 * report.a[i]);
        expected.emplace_back(0.0, -model.omega0 * report.a[i]);
    }

    const Spectrum spectrum = eig(model.A0);
    std::vector<bool> used(model.dim(), false);
    double worst = 0.0;
    for (const auto& ev : expected) {
        double best = std::numeric_limits<double>::infinity();
        int best_j = -1;
        for (int j = 0; j < model.dim(); ++j) {
            if (used[j]) continue;
            const double d = std::abs(spectrum.values[j] - ev);
            if (d < best) {
                best = d;
                best_j = j;
            }
        }
        used[best_j] = true;
        worst = std::max(worst, best);
    }
    report.max_deviation = worst;

    Eigen::JacobiSVD<Matrix> svd(model.A0);
    const double sv_tol = 1e-9 * svd.singularValues()(0);
    report.rank = static_cast<int>(
        (svd.singularValues().array() > sv_tol).count());

    report.ok = worst <= tol.modal_match && report.rank == report.expected_rank;
    return report;
}

SimTrace simulate(const StateModel& model, double v0, int samples,
                  const Tolerances& tol) {
    if (samples < 2) throw std::invalid_argument("simulate: need at least 2 samples");
    const int n = model.spec.n;
    const int dim = model.dim();

    Vector x0 = Vector::Zero(dim);
    for (int i = 0; i < n; ++i) x0[n + i] = v0;

    SimTrace trace;
    trace.spec = model.spec;
    trace.v0 = v0;
    trace.times.resize(samples);
    trace.states.resize(samples, dim);
    trace.v_load.resize(samples);
    trace.energy.resize(samples);

    for (int j = 0; j < samples; ++j) {
        const double t = model.T * j / (samples - 1);
        trace.times[j] = t;
        const Vector x = expm(model.A0, t, tol) * x0;
        trace.states.row(j) = x.transpose();
        trace.v_load[j] = n * x[2 * n];
        const Vector scaled = model.T0_diag.cwiseProduct(x);
        trace.energy[j] = 0.5 * model.spec.ell * scaled.squaredNorm();
    }
    return trace;
}

TransferReport verify_transfer(const SimTrace& trace, const Tolerances& tol) {
    const int n = trace.spec.n;
    const Eigen::Index last = trace.times.size() - 1;
    Vector target = Vector::Zero(trace.states.cols());
    target[2 * n] = trace.v0;

    TransferReport report;
    report.endpoint_residual =
        (trace.states.row(last).transpose() - target).cwiseAbs().maxCoeff();
    report.v_load_error = std::abs(trace.v_load[last] - n * trace.v0);
    const double e0 = trace.energy[0];
    double drift = 0.0;
    for (Eigen::Index j = 0; j < trace.energy.size(); ++j)
        drift = std::max(drift, std::abs(trace.energy[j] - e0));
    report.energy_drift = e0 > 0.0 ? drift / e0 : drift;
    report.pass = report.endpoint_residual <= tol.transfer_endpoint &&
                  report.energy_drift <= tol.energy_drift;
    return report;
}

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void write_netlist(std::ostream& out, const DesignSpec& spec, const Vector& k,
                   double v0, const std::string& header_comment) {
    spec.validate();
    const int n = spec.n;
    if (k.size() != n) throw std::invalid_argument("write_netlist: k dimension mismatch");

    out << "* " << n << "-stage Marx generator LC ladder\n";
    if (!header_comment.empty()) out << "* " << header_comment << "\n";
    out << "* storage caps c=" << fmt12(spec.c) << " F charged to " << fmt12(v0)
        << " V; stage inductors l=" << fmt12(spec.ell) << " H\n"
        << "* parasitic caps c_i = k_i*c; load branch " << fmt12(n * spec.ell)
        << " H and " << fmt12(spec.c / n) << " F\n"
        << "* load current i_L flows from node t" << n
        << " into the load branch, opposite to the stage currents\n";
    for (int i = 1; i <= n; ++i) {
        const std::string prev_top = i == 1 ? "0" : "t" + std::to_string(i - 1);
        out << "CS" << i << " m" << i << " " << prev_top << " " << fmt12(spec.c)
            << " IC=" << fmt12(v0) << "\n";
        out << "L" << i << " t" << i << " m" << i << " " << fmt12(spec.ell) << "\n";
        out << "CP" << i << " t" << i << " 0 " << fmt12(spec.c * k[i - 1])
            << " IC=0\n";
    }
    out << "LL t" << n << " ml " << fmt12(n * spec.ell) << "\n";
    out << "CL ml 0 " << fmt12(spec.c / n) << " IC=0\n";
    const double T = spec.transfer_time();
    out << ".tran " << fmt12(T / 1000.0) << " " << fmt12(T) << " uic\n";
    out << ".end\n";
}

} // namespace marx
