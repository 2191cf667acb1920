// propagator.hpp — Coupled integration of the CCS equations of motion: the
// complexified classical trajectories for every displacement vector and the
// variational linear system for the amplitudes, advanced together by one
// explicit Runge-Kutta scheme.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include "ccs/hamiltonian.hpp"
#include "ccs/linalg.hpp"
#include "ccs/observables.hpp"

namespace ccs {

struct IntegratorConfig {
    double dt{0.005};
    double t_final{10.0};
    std::string method{"rk4"};  // "rk4" (fixed step) or "dopri5" (adaptive)
    double eps_reg{1e-8};       // truncation threshold of the amplitude solve
    int record_stride{10};
    double rel_tol{1e-8};       // adaptive controller tolerances
    double abs_tol{1e-10};
    double min_dt{1e-9};
};

// Optional per-record hook: receives the state just recorded.
using RecordHook = std::function<void(const CcsState&)>;

namespace detail {

struct CcsDerivs {
    MatrixXcd zdot;
    VectorXcd adot;
    RegularizedSolveInfo solve_info;
};

inline CcsDerivs ccs_derivatives(const ModelSpec& spec, const MatrixXcd& Z, const VectorXcd& a,
                                 double eps_reg) {
    CcsDerivs d;
    const KernelMatrices km = assemble_kernels(spec, Z);
    d.zdot = -kImag * grad_matrix(spec, Z);
    d.adot = -kImag * solve_hermitian_regularized(km.omega, km.htilde * a, eps_reg,
                                                  &d.solve_info);
    return d;
}

}  // namespace detail

// One classical RK4 step of the coupled (z, a) system. Kernels are assembled
// and the regularized linear system solved at every stage point.
inline CcsState step(const CcsState& state, const IntegratorConfig& cfg, const ModelSpec& spec,
                     RegularizedSolveInfo* last_solve = nullptr) {
    const double dt = cfg.dt;
    using detail::ccs_derivatives;
    const auto k1 = ccs_derivatives(spec, state.basis, state.amplitudes, cfg.eps_reg);
    const auto k2 = ccs_derivatives(spec, state.basis + 0.5 * dt * k1.zdot,
                                    state.amplitudes + 0.5 * dt * k1.adot, cfg.eps_reg);
    const auto k3 = ccs_derivatives(spec, state.basis + 0.5 * dt * k2.zdot,
                                    state.amplitudes + 0.5 * dt * k2.adot, cfg.eps_reg);
    const auto k4 = ccs_derivatives(spec, state.basis + dt * k3.zdot,
                                    state.amplitudes + dt * k3.adot, cfg.eps_reg);
    CcsState next;
    next.t = state.t + dt;
    next.basis = state.basis + dt / 6.0 * (k1.zdot + 2.0 * k2.zdot + 2.0 * k3.zdot + k4.zdot);
    next.amplitudes =
        state.amplitudes + dt / 6.0 * (k1.adot + 2.0 * k2.adot + 2.0 * k3.adot + k4.adot);
    if (last_solve) *last_solve = k4.solve_info;
    return next;
}

namespace detail {

// Dormand-Prince 5(4) embedded pair for the adaptive mode.
struct Dopri5Tableau {
    static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
    static constexpr double b5[7] = {35.0 / 384,      0.0,         500.0 / 1113, 125.0 / 192,
                                     -2187.0 / 6784,  11.0 / 84,   0.0};
    static constexpr double b4[7] = {5179.0 / 57600,  0.0,         7571.0 / 16695, 393.0 / 640,
                                     -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

}  // namespace detail

// Full propagation with observable recording. Aborts (returning the partial
// series and the last finite state) on NaN/overflow or linear-solve failure.
inline PropagationResult propagate(const CcsState& initial, const IntegratorConfig& cfg,
                                   const ModelSpec& spec, const RecorderConfig& rec,
                                   const RecordHook& hook = {}) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
    if (cfg.t_final < 0.0) throw std::invalid_argument("propagate: t_final must be >= 0");
    const bool adaptive = cfg.method == "dopri5";
    if (!adaptive && cfg.method != "rk4")
        throw std::invalid_argument("propagate: unknown method '" + cfg.method + "'");

    PropagationResult out;
    ObservableSeries& s = out.series;
    s.n_bath = spec.bath.f;
    s.density_x = rec.x_grid;

    // Copies of the t=0 data for the 1D autocorrelation.
    const MatrixXcd basis0 = initial.basis;
    const VectorXcd amps0 = initial.amplitudes;

    CcsState state = initial;
    double e_total0 = 0.0, norm0 = 0.0;
    int record_index = 0;
    double last_condition = 0.0;
    int last_truncated = 0;

    auto record = [&](const CcsState& st) {
        const MatrixXcd om = overlap_matrix(st.basis);
        const double nrm = std::real(st.amplitudes.dot(om * st.amplitudes));
        const EnergyBreakdownReal e = energy_breakdown(st, spec);
        s.times.push_back(st.t);
        s.norm.push_back(nrm);
        s.e_system.push_back(e.system());
        s.e_interaction.push_back(e.interaction);
        s.e_counter.push_back(e.counter);
        s.e_total.push_back(e.total());
        s.e_bath.push_back(e.bath_modes);
        s.condition.push_back(last_condition);
        if (rec.record_autocorr)
            s.autocorr.push_back(autocorrelation_1d(st, basis0, amps0));
        int clamps = 0;
        if (rec.record_cs || rec.record_density) {
            const VectorXd rho = reduced_density(st, spec, rec.x_grid);
            if (rec.record_cs)
                s.c_s.push_back(system_autocorr_from_density(spec, rec.x_grid, rho, &clamps));
            if (rec.record_density && record_index % std::max(1, rec.density_every) == 0) {
                s.density_times.push_back(st.t);
                s.density_frames.push_back(rho.cwiseMax(0.0));
            }
        }
        s.clamp_counts.push_back(clamps);
        out.diagnostics.total_clamps += clamps;

        if (record_index == 0) {
            norm0 = nrm;
            e_total0 = e.total();
            out.diagnostics.initial_norm = nrm;
        }
        out.diagnostics.max_norm_drift =
            std::max(out.diagnostics.max_norm_drift, std::abs(nrm - norm0));
        if (std::abs(e_total0) > 0.0)
            out.diagnostics.max_energy_drift_rel =
                std::max(out.diagnostics.max_energy_drift_rel,
                         std::abs(e.total() - e_total0) / std::abs(e_total0));
        out.diagnostics.max_condition =
            std::max(out.diagnostics.max_condition, last_condition);
        ++record_index;
        if (hook) hook(st);
    };

    auto finite = [](const CcsState& st) {
        return st.basis.allFinite() && st.amplitudes.allFinite();
    };

    record(state);
    if (cfg.t_final == 0.0) {
        out.final_state = state;
        return out;
    }

    if (!adaptive) {
        const long n_steps = std::lround(cfg.t_final / cfg.dt);
        if (n_steps < 1) throw std::invalid_argument("propagate: t_final shorter than dt");
        IntegratorConfig stepcfg = cfg;
        stepcfg.dt = cfg.t_final / static_cast<double>(n_steps);
        const double t0 = initial.t;
        for (long i = 1; i <= n_steps; ++i) {
            RegularizedSolveInfo info;
            CcsState next = step(state, stepcfg, spec, &info);
            out.diagnostics.derivative_evaluations += 4;
            last_condition = info.lambda_min_raw > 0.0
                                 ? info.lambda_max / info.lambda_min_raw
                                 : std::numeric_limits<double>::infinity();
            last_truncated = info.truncated;
            out.diagnostics.max_truncated =
                std::max(out.diagnostics.max_truncated, last_truncated);
            if (!finite(next)) {
                out.aborted = true;
                out.error = "non-finite state detected at t = " + std::to_string(next.t)
                            + "; returning last good state";
                break;
            }
            state = std::move(next);
            state.t = t0 + stepcfg.dt * static_cast<double>(i);
            if (i % cfg.record_stride == 0 || i == n_steps) record(state);
        }
        out.final_state = state;
        return out;
    }

    // Adaptive Dormand-Prince with an elementary step controller.
    using detail::Dopri5Tableau;
    const double t0 = initial.t;
    const double t_end = initial.t + cfg.t_final;
    double t = t0;
    double dt = cfg.dt;
    double next_record = t0 + cfg.record_stride * cfg.dt;
    while (t < t_end - 1e-12) {
        dt = std::min(dt, t_end - t);
        detail::CcsDerivs k[7];
        bool solve_ok = true;
        MatrixXcd zs;
        VectorXcd as;
        for (int i = 0; i < 7; ++i) {
            zs = state.basis;
            as = state.amplitudes;
            for (int j = 0; j < i; ++j) {
                const double aij = Dopri5Tableau::a[i][j];
                if (aij != 0.0) {
                    zs += dt * aij * k[j].zdot;
                    as += dt * aij * k[j].adot;
                }
            }
            k[i] = detail::ccs_derivatives(spec, zs, as, cfg.eps_reg);
            ++out.diagnostics.derivative_evaluations;
        }
        MatrixXcd z5 = state.basis;
        VectorXcd a5 = state.amplitudes;
        MatrixXcd z4 = state.basis;
        VectorXcd a4 = state.amplitudes;
        for (int i = 0; i < 7; ++i) {
            if (Dopri5Tableau::b5[i] != 0.0) {
                z5 += dt * Dopri5Tableau::b5[i] * k[i].zdot;
                a5 += dt * Dopri5Tableau::b5[i] * k[i].adot;
            }
            if (Dopri5Tableau::b4[i] != 0.0) {
                z4 += dt * Dopri5Tableau::b4[i] * k[i].zdot;
                a4 += dt * Dopri5Tableau::b4[i] * k[i].adot;
            }
        }
        double err = 0.0;
        for (Eigen::Index c = 0; c < z5.size(); ++c) {
            const double scale = cfg.abs_tol + cfg.rel_tol * std::abs(z5(c));
            err = std::max(err, std::abs(z5(c) - z4(c)) / scale);
        }
        for (Eigen::Index c = 0; c < a5.size(); ++c) {
            const double scale = cfg.abs_tol + cfg.rel_tol * std::abs(a5[c]);
            err = std::max(err, std::abs(a5[c] - a4[c]) / scale);
        }
        if (!std::isfinite(err)) {
            out.aborted = true;
            out.error = "non-finite error estimate at t = " + std::to_string(t);
            break;
        }
        if (err <= 1.0) {
            t += dt;
            state.basis = std::move(z5);
            state.amplitudes = std::move(a5);
            state.t = t;
            RegularizedSolveInfo info = k[6].solve_info;
            last_condition = info.lambda_min_raw > 0.0
                                 ? info.lambda_max / info.lambda_min_raw
                                 : std::numeric_limits<double>::infinity();
            out.diagnostics.max_truncated =
                std::max(out.diagnostics.max_truncated, info.truncated);
            if (t >= next_record - 1e-12 || t >= t_end - 1e-12) {
                record(state);
                while (next_record <= t + 1e-12) next_record += cfg.record_stride * cfg.dt;
            }
        }
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        dt *= std::min(5.0, std::max(0.2, grow));
        if (dt < cfg.min_dt) {
            out.aborted = true;
            out.error = "step size underflow at t = " + std::to_string(t);
            break;
        }
    }
    out.final_state = state;
    return out;
}

}  // namespace ccs
