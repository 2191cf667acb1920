// model.hpp — Physical parameters of the bistable system, the harmonic bath,
// and the bilinear coupling, plus the factorized initial state.
// Units have hbar = 1 throughout.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccs/types.hpp"

namespace ccs {

// --------------------------- Parameter records ------------------------------

// Quartic double well V(x) = -(a/2) x^2 + (b/4) x^4 with a, b > 0.
struct DoubleWellParams {
    double a{2.0};        // quadratic coefficient (energy/length^2)
    double b{1.0};        // quartic coefficient (energy/length^4)
    double m_x{1.0};      // system mass
    double gamma_x{2.0};  // width parameter of the system coherent-state basis

    double barrier_height() const { return a * a / (4.0 * b); }
    double minimum() const { return std::sqrt(a / b); }  // x_+ ; x_- = -x_+
    double potential(double x) const { return -0.5 * a * x * x + 0.25 * b * x * x * x * x; }
};

struct BathParams {
    int f{0};               // number of oscillators
    double m{0.1};          // common oscillator mass
    double omega_co{4.0};   // cutoff frequency of the sampling density
    int f_co{0};            // discretization denominator, must exceed f
    VectorXd frequencies;   // omega_n, n = 1..f, strictly increasing
    VectorXd gammas;        // basis widths gamma_n = m * omega_n (derived, never user input)
};

struct CouplingParams {
    double g{0.1};              // bare coupling strength
    double g_n{0.0};            // per-oscillator coupling g / sqrt(f)
    double counter_coeff{0.0};  // sum_n g_n^2 / (2 m omega_n^2)
};

// Fully validated model. Immutable after build_model; safe to share across threads.
struct ModelSpec {
    DoubleWellParams well;
    BathParams bath;
    CouplingParams coupling;
    bool include_counter_term{true};
    VectorXd gamma;  // (f+1) basis widths: [gamma_x, m w_1, ..., m w_f]

    int dof() const { return bath.f + 1; }
    double mass(int mode) const { return mode == 0 ? well.m_x : bath.m; }

    // Full potential including bath, interaction, and (optionally) the counter term.
    // q = (x, y_1, ..., y_f).
    double potential(const VectorXd& q) const {
        double v = well.potential(q[0]);
        for (int n = 0; n < bath.f; ++n) {
            const double w = bath.frequencies[n];
            v += 0.5 * bath.m * w * w * q[n + 1] * q[n + 1];
            v -= coupling.g_n * q[0] * q[n + 1];
        }
        if (include_counter_term) v += coupling.counter_coeff * q[0] * q[0];
        return v;
    }
};

// Raw inputs to build_model. `frequencies` overrides the log discretization
// when non-empty (used for re-runs with externally chosen spectra).
struct ModelConfig {
    double a{2.0};
    double b{1.0};
    double m_x{1.0};
    double gamma_x{2.0};
    int f{0};
    double m{0.1};
    double omega_co{4.0};
    int f_co{0};
    std::vector<double> frequencies;
    double g{0.1};
    bool include_counter_term{true};
};

// ------------------------------ Operations ----------------------------------

// Frequencies from the inverted cumulative of the exponential density:
// w_k = -omega_co * ln(1 - k/f_co), k = 1..f. Requires f_co > f so the
// logarithm stays finite.
inline VectorXd discretize_frequencies(double omega_co, int f_co, int f) {
    if (f < 1) throw std::invalid_argument("discretize_frequencies: f must be >= 1");
    if (!(omega_co > 0.0)) throw std::invalid_argument("discretize_frequencies: omega_co must be positive");
    if (f_co <= f) throw std::invalid_argument("discretize_frequencies: requires f_co > f");
    VectorXd w(f);
    for (int k = 1; k <= f; ++k) {
        w[k - 1] = -omega_co * std::log1p(-static_cast<double>(k) / f_co);
    }
    return w;
}

inline ModelSpec build_model(const ModelConfig& cfg) {
    auto fail = [](const std::string& what) { throw std::invalid_argument("build_model: " + what); };
    if (!(cfg.a > 0.0)) fail("well coefficient a must be positive");
    if (!(cfg.b > 0.0)) fail("well coefficient b must be positive");
    if (!(cfg.m_x > 0.0)) fail("system mass m_x must be positive");
    if (!(cfg.gamma_x > 0.0)) fail("width parameter gamma_x must be positive");
    if (cfg.f < 0) fail("oscillator count f must be non-negative");

    ModelSpec spec;
    spec.well = DoubleWellParams{cfg.a, cfg.b, cfg.m_x, cfg.gamma_x};
    spec.include_counter_term = cfg.include_counter_term;
    spec.bath.f = cfg.f;
    spec.bath.m = cfg.m;
    spec.bath.omega_co = cfg.omega_co;
    spec.bath.f_co = cfg.f_co;

    if (cfg.f > 0) {
        if (!(cfg.m > 0.0)) fail("bath mass m must be positive");
        if (!cfg.frequencies.empty()) {
            if (static_cast<int>(cfg.frequencies.size()) != cfg.f)
                fail("explicit frequency list length must equal f");
            spec.bath.frequencies = Eigen::Map<const VectorXd>(cfg.frequencies.data(), cfg.f);
        } else {
            spec.bath.frequencies = discretize_frequencies(cfg.omega_co, cfg.f_co, cfg.f);
        }
        for (int n = 0; n < cfg.f; ++n) {
            if (!(spec.bath.frequencies[n] > 0.0)) fail("bath frequencies must be positive");
            if (n > 0 && !(spec.bath.frequencies[n] > spec.bath.frequencies[n - 1]))
                fail("bath frequencies must be strictly increasing");
        }
        spec.bath.gammas = cfg.m * spec.bath.frequencies;

        spec.coupling.g = cfg.g;
        spec.coupling.g_n = cfg.g / std::sqrt(static_cast<double>(cfg.f));
        double cc = 0.0;
        for (int n = 0; n < cfg.f; ++n) {
            const double w = spec.bath.frequencies[n];
            cc += spec.coupling.g_n * spec.coupling.g_n / (2.0 * cfg.m * w * w);
        }
        spec.coupling.counter_coeff = cc;
    } else {
        spec.bath.frequencies.resize(0);
        spec.bath.gammas.resize(0);
        spec.coupling.g = cfg.g;
        spec.coupling.g_n = 0.0;
        spec.coupling.counter_coeff = 0.0;
    }

    spec.gamma.resize(spec.dof());
    spec.gamma[0] = cfg.gamma_x;
    for (int n = 0; n < cfg.f; ++n) spec.gamma[n + 1] = spec.bath.gammas[n];
    return spec;
}

// ------------------------------ Initial state -------------------------------

// Product of the barrier-top Gaussian and the bath ground states. In the
// coherent-state basis with widths spec.gamma this is exactly the multi-mode
// CS with displacement zero.
struct InitialState {
    VectorXcd z0;            // (f+1) zeros
    double system_energy;    // gamma_x/(4 m_x) - a/(4 gamma_x) + 3 b/(16 gamma_x^2)
    double bath_zero_point;  // sum_n omega_n / 2
};

inline InitialState initial_state(const ModelSpec& spec) {
    InitialState st;
    st.z0 = VectorXcd::Zero(spec.dof());
    const double gx = spec.well.gamma_x;
    st.system_energy = gx / (4.0 * spec.well.m_x) - spec.well.a / (4.0 * gx)
                       + 3.0 * spec.well.b / (16.0 * gx * gx);
    st.bath_zero_point = 0.5 * spec.bath.frequencies.sum();
    return st;
}

// Barrier-top Gaussian (gamma_x/pi)^{1/4} exp(-gamma_x x^2 / 2).
inline double initial_system_gaussian(const ModelSpec& spec, double x) {
    const double gx = spec.well.gamma_x;
    return std::pow(gx / M_PI, 0.25) * std::exp(-0.5 * gx * x * x);
}

// -------------------------- Phase-space conversion ---------------------------

// z_j = (sqrt(gamma_j) q_j + i p_j / sqrt(gamma_j)) / sqrt(2)
inline VectorXcd displacement_from_phase_space(const VectorXd& q, const VectorXd& p,
                                               const VectorXd& gamma) {
    if (q.size() != gamma.size() || p.size() != gamma.size())
        throw std::invalid_argument("displacement_from_phase_space: dimension mismatch");
    VectorXcd z(q.size());
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        const double sg = std::sqrt(gamma[j]);
        z[j] = Complex(sg * q[j], p[j] / sg) / std::sqrt(2.0);
    }
    return z;
}

inline void phase_space_from_displacement(const VectorXcd& z, const VectorXd& gamma,
                                          VectorXd& q, VectorXd& p) {
    if (z.size() != gamma.size())
        throw std::invalid_argument("phase_space_from_displacement: dimension mismatch");
    q.resize(z.size());
    p.resize(z.size());
    for (Eigen::Index j = 0; j < z.size(); ++j) {
        const double sg = std::sqrt(gamma[j]);
        q[j] = std::sqrt(2.0) * z[j].real() / sg;
        p[j] = std::sqrt(2.0) * z[j].imag() * sg;
    }
}

}  // namespace ccs
