// observables.hpp — Everything recorded along a propagation: norm, per-term
// energy expectations, autocorrelations, and the reduced system density.
// All expectation values are normalized by <Psi|Psi>; the norm itself is
// recorded separately so drift stays visible.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ccs/hamiltonian.hpp"
#include "ccs/model.hpp"

namespace ccs {

struct CcsState {
    double t{0.0};
    MatrixXcd basis;        // (f+1) x M displacement vectors
    VectorXcd amplitudes;   // M
};

// ------------------------------ Series record -------------------------------

struct ObservableSeries {
    int n_bath{0};
    std::vector<double> times;
    std::vector<double> norm;
    std::vector<double> e_system;       // T_S + V_S channel
    std::vector<double> e_interaction;
    std::vector<double> e_counter;
    std::vector<double> e_total;
    std::vector<VectorXd> e_bath;       // per record, one entry per oscillator
    std::vector<Complex> autocorr;      // 1D autocorrelation, empty unless recorded
    std::vector<double> c_s;            // reduced-density autocorrelation measure
    std::vector<double> condition;      // overlap condition estimate (CCS engines)
    std::vector<int> clamp_counts;      // negative-density clamps at each record

    VectorXd density_x;
    std::vector<double> density_times;
    std::vector<VectorXd> density_frames;

    std::size_t size() const { return times.size(); }
};

struct RecorderConfig {
    VectorXd x_grid;               // quadrature grid for rho_S and c_S
    bool record_autocorr{false};   // 1D only
    bool record_cs{true};
    bool record_density{false};
    int density_every{1};          // keep every k-th record's density frame
};

struct PropagationDiagnostics {
    double initial_norm{0.0};
    double max_norm_drift{0.0};
    double max_energy_drift_rel{0.0};
    double max_condition{0.0};
    int max_truncated{0};
    int total_clamps{0};
    long derivative_evaluations{0};
};

// Outcome of a full propagation, shared by the CCS and grid engines. On
// abort the partial series plus the last finite state are preserved.
struct PropagationResult {
    ObservableSeries series;
    CcsState final_state;
    PropagationDiagnostics diagnostics;
    bool aborted{false};
    std::string error;
};

inline VectorXd make_x_grid(double x_min = -3.5, double x_max = 3.5, int n = 141) {
    return VectorXd::LinSpaced(n, x_min, x_max);
}

// ------------------------------ CCS observables -----------------------------

inline double norm_squared(const CcsState& state) {
    const MatrixXcd om = overlap_matrix(state.basis);
    return std::real(state.amplitudes.dot(om * state.amplitudes));
}

struct EnergyBreakdownReal {
    double kinetic_s{0.0}, potential_s{0.0}, interaction{0.0}, counter{0.0};
    VectorXd bath_modes;

    double system() const { return kinetic_s + potential_s; }
    double total() const {
        return kinetic_s + potential_s + interaction + counter + bath_modes.sum();
    }
};

// Eq.-25-style expectation applied term by term, normalized by the norm.
inline EnergyBreakdownReal energy_breakdown(const CcsState& state, const ModelSpec& spec) {
    const EnergyKernels ek = energy_kernels(spec, state.basis);
    const MatrixXcd om = overlap_matrix(state.basis);
    const VectorXcd& a = state.amplitudes;
    const double nrm = std::real(a.dot(om * a));
    if (!(nrm > 0.0)) throw std::runtime_error("energy_breakdown: vanishing norm");

    auto expect = [&](const MatrixXcd& kernel) { return std::real(a.dot(kernel * a)) / nrm; };
    EnergyBreakdownReal e;
    e.kinetic_s = expect(ek.kinetic_s);
    e.potential_s = expect(ek.potential_s);
    e.interaction = expect(ek.interaction);
    e.counter = expect(ek.counter);
    e.bath_modes.resize(spec.bath.f);
    for (int n = 0; n < spec.bath.f; ++n) e.bath_modes[n] = expect(ek.bath_modes[n]);
    return e;
}

// c(t) = sum_{k,l} a_k^*(0) <z_k(0)|z_l(t)> a_l(t). Only meaningful without a
// bath; for coupled runs use system_autocorr instead.
inline Complex autocorrelation_1d(const CcsState& state, const MatrixXcd& initial_basis,
                                  const VectorXcd& initial_amplitudes) {
    if (state.basis.rows() != 1)
        throw std::invalid_argument("autocorrelation_1d: defined for f = 0 runs only");
    const MatrixXcd cross = overlap_matrix(initial_basis, state.basis);
    return initial_amplitudes.dot(cross * state.amplitudes);
}

// System-mode CS position wavefunctions on the grid, G(l, i) = G_l(x_i).
inline MatrixXcd system_cs_on_grid(const ModelSpec& spec, const MatrixXcd& basis,
                                   const VectorXd& x_grid) {
    const double gx = spec.well.gamma_x;
    const double pref = std::pow(gx / M_PI, 0.25);
    const double sq2g = std::sqrt(2.0 * gx);
    MatrixXcd G(basis.cols(), x_grid.size());
#pragma omp parallel for schedule(static)
    for (Eigen::Index l = 0; l < basis.cols(); ++l) {
        const Complex z = basis(0, l);
        const Complex c0 = -0.5 * z * z - 0.5 * std::norm(z);
        for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
            const double x = x_grid[i];
            G(l, i) = pref * std::exp(-0.5 * gx * x * x + sq2g * x * z + c0);
        }
    }
    return G;
}

// rho_S(x) = sum_{k,l} a_k^* a_l G_k^*(x) G_l(x) prod_n <z_{kn}|z_{ln}>.
// The bath integral is analytic; returned values may carry tiny negative
// round-off, clamping is left to the caller.
inline VectorXd reduced_density(const CcsState& state, const ModelSpec& spec,
                                const VectorXd& x_grid) {
    const int f = spec.bath.f;
    MatrixXcd bath_ov;
    if (f > 0)
        bath_ov = overlap_matrix(state.basis.bottomRows(f));
    else
        bath_ov = MatrixXcd::Ones(state.basis.cols(), state.basis.cols());

    const MatrixXcd G = system_cs_on_grid(spec, state.basis, x_grid);
    const VectorXcd& a = state.amplitudes;
    const MatrixXcd C = a.conjugate().asDiagonal() * bath_ov * a.asDiagonal();
    const MatrixXcd CG = C * G;
    return (G.conjugate().cwiseProduct(CG)).colwise().sum().real().transpose();
}

inline double trapezoid(const VectorXd& x, const VectorXd& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("trapezoid: need matching grids with >= 2 points");
    double s = 0.0;
    for (Eigen::Index i = 0; i + 1 < x.size(); ++i)
        s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
    return s;
}

// c_S(t) = int dx Psi(x,0) sqrt(rho_S(x,t)), Psi(x,0) real and positive.
// Negative round-off densities are clamped to zero and counted.
inline double system_autocorr_from_density(const ModelSpec& spec, const VectorXd& x_grid,
                                           const VectorXd& rho, int* clamp_count = nullptr) {
    VectorXd integrand(x_grid.size());
    int clamps = 0;
    for (Eigen::Index i = 0; i < x_grid.size(); ++i) {
        double r = rho[i];
        if (r < 0.0) {
            r = 0.0;
            ++clamps;
        }
        integrand[i] = initial_system_gaussian(spec, x_grid[i]) * std::sqrt(r);
    }
    if (clamp_count) *clamp_count += clamps;
    return trapezoid(x_grid, integrand);
}

inline double system_autocorr(const CcsState& state, const ModelSpec& spec,
                              const VectorXd& x_grid, int* clamp_count = nullptr) {
    return system_autocorr_from_density(spec, x_grid, reduced_density(state, spec, x_grid),
                                        clamp_count);
}

// ------------------------------ Time averages -------------------------------

// <<E>> = (1/T_tot) int_0^{T_tot} dt E_sys(t), trapezoidal in time.
inline double long_time_average(const ObservableSeries& series, double t_tot) {
    if (series.size() < 2) throw std::invalid_argument("long_time_average: series too short");
    if (series.times.back() < t_tot - 1e-9)
        throw std::invalid_argument("long_time_average: series does not span T_tot");
    double integral = 0.0;
    double covered = 0.0;
    for (std::size_t i = 0; i + 1 < series.size() && covered < t_tot - 1e-12; ++i) {
        double dt = series.times[i + 1] - series.times[i];
        if (series.times[i + 1] > t_tot) dt = t_tot - series.times[i];
        integral += 0.5 * dt * (series.e_system[i] + series.e_system[i + 1]);
        covered += dt;
    }
    return integral / t_tot;
}

}  // namespace ccs
