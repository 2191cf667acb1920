// sampler.hpp — Pancake sampling of the initial coherent-state basis around
// the barrier-top product state, and the regularized projection that turns
// Psi(0) into initial amplitudes.

#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include "ccs/hamiltonian.hpp"
#include "ccs/linalg.hpp"
#include "ccs/model.hpp"

namespace ccs {

struct SamplerConfig {
    int M{299};                // multiplicity
    double sigma{0.5};         // complex-Gaussian width per mode, E|dz|^2 = sigma^2
    std::uint64_t seed{1};
    double min_overlap{1e-3};  // redraw when |<z_i|z_j>| > 1 - min_overlap
    bool include_center{true}; // pin the initial state's CS as basis function 0
    int max_retries{1000};     // per basis function
    double eps_reg{1e-8};      // truncation threshold for the projection solve
};

// Identifier recorded in run metadata; the generator below must match it.
inline const char* sampler_rng_id() { return "mt19937_64+box-muller"; }

namespace detail {

// Box-Muller on top of mt19937_64 keeps the stream independent of the
// standard library's normal_distribution implementation.
class ComplexGaussian {
  public:
    explicit ComplexGaussian(std::uint64_t seed) : rng_(seed) {}

    Complex draw(double sigma) {
        const double u1 = unit_open_();
        const double u2 = unit_();
        const double r = sigma / std::sqrt(2.0) * std::sqrt(-2.0 * std::log(u1));
        return Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    }

  private:
    double unit_() { return static_cast<double>(rng_()) * 0x1.0p-64; }
    double unit_open_() {
        double u;
        do { u = unit_(); } while (u <= 0.0);
        return u;
    }
    std::mt19937_64 rng_;
};

}  // namespace detail

// Draws M displacement vectors i.i.d. per mode from a circular complex normal
// centered at the initial state (z = 0), redrawing candidates that nearly
// duplicate an accepted basis function. Deterministic given the seed.
inline MatrixXcd sample_basis(const SamplerConfig& cfg, const ModelSpec& spec) {
    if (cfg.M < 1) throw std::invalid_argument("sample_basis: M must be >= 1");
    if (!(cfg.sigma > 0.0)) throw std::invalid_argument("sample_basis: sigma must be positive");
    if (cfg.min_overlap < 0.0 || cfg.min_overlap >= 1.0)
        throw std::invalid_argument("sample_basis: min_overlap must lie in [0, 1)");

    const int dof = spec.dof();
    MatrixXcd Z(dof, cfg.M);
    detail::ComplexGaussian gauss(cfg.seed);
    const double accept_bound = 1.0 - cfg.min_overlap;
    const bool reject_duplicates = cfg.min_overlap > 0.0;

    int next = 0;
    if (cfg.include_center) Z.col(next++).setZero();
    while (next < cfg.M) {
        bool placed = false;
        for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
            VectorXcd cand(dof);
            for (int j = 0; j < dof; ++j) cand[j] = gauss.draw(cfg.sigma);
            bool distinct = true;
            if (reject_duplicates) {
                for (int i = 0; i < next; ++i) {
                    if (std::abs(overlap(Z.col(i), cand)) > accept_bound) {
                        distinct = false;
                        break;
                    }
                }
            }
            if (distinct) {
                Z.col(next++) = cand;
                placed = true;
                break;
            }
        }
        if (!placed)
            throw std::runtime_error(
                "sample_basis: could not place " + std::to_string(cfg.M)
                + " sufficiently distinct coherent states within the retry budget; "
                  "lower M or min_overlap, or raise sigma");
    }
    return Z;
}

struct ProjectionResult {
    VectorXcd amplitudes;
    double reconstructed_norm{0.0};  // a^H Omega a
    double residual{0.0};            // ||Omega a - b||
    RegularizedSolveInfo solve_info;
};

// Solves sum_l <z_k|z_l> a_l = <z_k|center> by truncated spectral inversion.
// For the model's initial state the center is z = 0.
inline ProjectionResult project_initial_amplitudes(const MatrixXcd& basis, const ModelSpec& spec,
                                                   double eps_reg = 1e-8,
                                                   const VectorXcd* center = nullptr) {
    const VectorXcd z0 =
        center ? *center : VectorXcd(VectorXcd::Zero(spec.dof()));
    if (basis.rows() != spec.dof())
        throw std::invalid_argument("project_initial_amplitudes: basis dimension mismatch");

    const MatrixXcd om = overlap_matrix(basis);
    VectorXcd rhs(basis.cols());
    for (Eigen::Index k = 0; k < basis.cols(); ++k) rhs[k] = overlap(basis.col(k), z0);

    ProjectionResult res;
    res.amplitudes = solve_hermitian_regularized(om, rhs, eps_reg, &res.solve_info);
    res.reconstructed_norm = std::real(res.amplitudes.dot(om * res.amplitudes));
    res.residual = (om * res.amplitudes - rhs).norm();
    return res;
}

}  // namespace ccs
