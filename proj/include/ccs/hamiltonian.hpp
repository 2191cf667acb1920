// hamiltonian.hpp — Normally ordered coherent-state matrix elements of the
// double-well + bath Hamiltonian, the complexified classical gradients, and
// the O(M^2) kernel assembly used by the propagator.
//
// Conventions: z is the (f+1)-dimensional displacement vector, index 0 the
// system mode, 1..f the bath modes. All matrix elements use the Klauder
// phase convention, under which the multi-mode overlap is
//   <z_k|z_l> = exp[-1/2(|z_k|^2 + |z_l|^2) + z_k^* . z_l].

#pragma once

#include <stdexcept>

#include "ccs/model.hpp"
#include "ccs/types.hpp"

namespace ccs {

// ------------------------------- Overlaps -----------------------------------

inline Complex overlap(const VectorXcd& zk, const VectorXcd& zl) {
    if (zk.size() != zl.size()) throw std::invalid_argument("overlap: dimension mismatch");
    const Complex cross = zk.dot(zl);  // Eigen dot conjugates the first argument
    return std::exp(cross - 0.5 * (zk.squaredNorm() + zl.squaredNorm()));
}

// ---------------------- Normally ordered matrix elements --------------------

// H_ord(z_k^*, z_l) split by physical origin. Off the diagonal the parts are
// complex; on the diagonal (z_k = z_l) each part is real up to round-off.
struct OrderedEnergyBreakdown {
    Complex kinetic_s{0.0, 0.0};
    Complex potential_s{0.0, 0.0};
    Complex bath{0.0, 0.0};
    Complex interaction{0.0, 0.0};
    Complex counter{0.0, 0.0};

    Complex total() const { return kinetic_s + potential_s + bath + interaction + counter; }
    Complex system() const { return kinetic_s + potential_s; }
};

inline OrderedEnergyBreakdown h_ord(const ModelSpec& spec, const VectorXcd& zk,
                                    const VectorXcd& zl) {
    if (zk.size() != spec.dof() || zl.size() != spec.dof())
        throw std::invalid_argument("h_ord: dimension mismatch");
    const double gx = spec.well.gamma_x;
    const double a = spec.well.a;
    const double b = spec.well.b;

    const Complex d = std::conj(zk[0]) - zl[0];
    const Complex s = std::conj(zk[0]) + zl[0];
    const Complex s2 = s * s;

    OrderedEnergyBreakdown e;
    e.kinetic_s = -gx / (4.0 * spec.well.m_x) * (d * d - 1.0);
    e.potential_s = -a / (4.0 * gx) * (s2 + 1.0)
                    + b / (16.0 * gx * gx) * (s2 * s2 + 6.0 * s2 + 3.0);

    Complex env = 0.0, cross = 0.0;
    for (int n = 0; n < spec.bath.f; ++n) {
        const double w = spec.bath.frequencies[n];
        env += w * (std::conj(zk[n + 1]) * zl[n + 1] + 0.5);
        cross += spec.coupling.g_n / std::sqrt(spec.bath.gammas[n])
                 * (std::conj(zk[n + 1]) + zl[n + 1]);
    }
    e.bath = env;
    e.interaction = -s / (2.0 * std::sqrt(gx)) * cross;
    if (spec.include_counter_term && spec.bath.f > 0) {
        // counter_coeff = sum g_n^2/(2 m w_n^2), so the CS element carries
        // counter_coeff/(2 gamma_x) as prefactor of (s^2 + 1).
        e.counter = (s2 + 1.0) * spec.coupling.counter_coeff / (2.0 * gx);
    }
    return e;
}

// ------------------------ Complexified classical flow ------------------------

// dH_ord/dz^* evaluated on the diagonal (z^* the conjugate of z). The
// trajectory EOM is i zdot = grad_h_ord(z).
inline VectorXcd grad_h_ord(const ModelSpec& spec, const VectorXcd& z) {
    if (z.size() != spec.dof()) throw std::invalid_argument("grad_h_ord: dimension mismatch");
    const double gx = spec.well.gamma_x;
    const double sqgx = std::sqrt(gx);

    VectorXcd grad(z.size());
    const Complex sx = std::conj(z[0]) + z[0];  // 2 Re z_x

    double bracket = -spec.well.a + 1.5 * spec.well.b / gx;
    if (spec.include_counter_term) bracket += 2.0 * spec.coupling.counter_coeff;

    Complex bath_pull = 0.0;
    for (int n = 0; n < spec.bath.f; ++n) {
        const double cn = spec.coupling.g_n / (2.0 * std::sqrt(gx * spec.bath.gammas[n]));
        bath_pull += cn * (std::conj(z[n + 1]) + z[n + 1]);
        grad[n + 1] = spec.bath.frequencies[n] * z[n + 1] - cn * sx;
    }
    grad[0] = -gx / (2.0 * spec.well.m_x) * (std::conj(z[0]) - z[0])
              + spec.well.b / (4.0 * gx * gx) * sx * sx * sx
              - bath_pull + sx / (2.0 * gx) * bracket;
    return grad;
}

// ----------------------------- H-tilde kernel -------------------------------

// Matrix element of the amplitude EOM, with both gradient factors taken at
// the diagonal point of z_l as displayed:
//   Htilde_kl = <z_k|z_l> [ H_ord(z_k^*, z_l)
//                           - 1/2 (z_l . dH/dz_l - dH/dz_l^* . z_l^*)
//                           - z_k^* . dH/dz_l^* ].
// On the diagonal H(z^*, z) is real, so dH/dz = conj(dH/dz^*) and the middle
// term reduces to -i Im(z_l . conj(D_l)) with D_l = grad_h_ord(z_l).
inline Complex h_tilde(const ModelSpec& spec, const VectorXcd& zk, const VectorXcd& zl) {
    const VectorXcd grad_l = grad_h_ord(spec, zl);
    const Complex w = grad_l.dot(zl);  // z_l . conj(D_l)
    const Complex middle = Complex(0.0, -1.0) * std::imag(w);
    const Complex last = zk.dot(grad_l);  // z_k^* . D_l
    return overlap(zk, zl) * (h_ord(spec, zk, zl).total() + middle - last);
}

// ------------------------------ O(M^2) assembly ------------------------------

// Basis matrices store one displacement vector per column: Z is (f+1) x M.

inline MatrixXcd overlap_matrix(const MatrixXcd& Zk, const MatrixXcd& Zl) {
    if (Zk.rows() != Zl.rows()) throw std::invalid_argument("overlap_matrix: dimension mismatch");
    const VectorXd nk = Zk.colwise().squaredNorm().real();
    const VectorXd nl = Zl.colwise().squaredNorm().real();
    MatrixXcd om = Zk.adjoint() * Zl;
    const Eigen::Index rows = om.rows(), cols = om.cols();
#pragma omp parallel for schedule(static)
    for (Eigen::Index l = 0; l < cols; ++l)
        for (Eigen::Index k = 0; k < rows; ++k)
            om(k, l) = std::exp(om(k, l) - 0.5 * (nk[k] + nl[l]));
    return om;
}

inline MatrixXcd overlap_matrix(const MatrixXcd& Z) { return overlap_matrix(Z, Z); }

// Gradient of every column, (f+1) x M.
inline MatrixXcd grad_matrix(const ModelSpec& spec, const MatrixXcd& Z) {
    MatrixXcd D(Z.rows(), Z.cols());
#pragma omp parallel for schedule(static)
    for (Eigen::Index l = 0; l < Z.cols(); ++l) D.col(l) = grad_h_ord(spec, Z.col(l));
    return D;
}

struct KernelMatrices {
    MatrixXcd omega;   // overlap matrix
    MatrixXcd htilde;  // amplitude-EOM kernel
};

// Assembles both stage kernels in one pass. Equivalent to elementwise
// overlap/h_ord/h_tilde but organized around two GEMMs (mode dot products
// and z_k^* . D_l) so that the per-pair work stays scalar.
inline KernelMatrices assemble_kernels(const ModelSpec& spec, const MatrixXcd& Z) {
    const Eigen::Index M = Z.cols();
    const int f = spec.bath.f;
    const double gx = spec.well.gamma_x;
    const double a = spec.well.a;
    const double b = spec.well.b;
    const double mx = spec.well.m_x;
    const double ccnt = (spec.include_counter_term && f > 0)
                            ? spec.coupling.counter_coeff / (2.0 * gx)
                            : 0.0;
    const double zero_point = 0.5 * spec.bath.frequencies.sum();

    // Bath mode dot products weighted by frequency, plus the coupling sums.
    MatrixXcd wb = MatrixXcd::Zero(M, M);
    VectorXcd u = VectorXcd::Zero(M);  // u_l = sum_n (g_n/sqrt(gamma_n)) z_{l,n}
    if (f > 0) {
        const MatrixXcd zb = Z.bottomRows(f);
        const VectorXd sqw = spec.bath.frequencies.cwiseSqrt();
        const MatrixXcd zb_w = sqw.asDiagonal() * zb;
        wb.noalias() = zb_w.adjoint() * zb_w;
        VectorXd cg(f);
        for (int n = 0; n < f; ++n)
            cg[n] = spec.coupling.g_n / std::sqrt(spec.bath.gammas[n]);
        u = zb.transpose() * cg.cast<Complex>();
    }

    const MatrixXcd D = grad_matrix(spec, Z);
    MatrixXcd zdotd = Z.adjoint() * D;         // z_k^* . D_l
    const MatrixXcd raw_cross = Z.adjoint() * Z;
    const VectorXd nrm = Z.colwise().squaredNorm().real();
    VectorXd phi(M);  // Im(z_l . conj(D_l))
    for (Eigen::Index l = 0; l < M; ++l)
        phi[l] = std::imag(D.col(l).dot(Z.col(l)));

    KernelMatrices out;
    out.omega.resize(M, M);
    out.htilde.resize(M, M);
    const Eigen::RowVectorXcd zx = Z.row(0);
#pragma omp parallel for schedule(static)
    for (Eigen::Index l = 0; l < M; ++l) {
        for (Eigen::Index k = 0; k < M; ++k) {
            const Complex zkc = std::conj(zx[k]);
            const Complex s = zkc + zx[l];
            const Complex d = zkc - zx[l];
            const Complex s2 = s * s;
            Complex h = -gx / (4.0 * mx) * (d * d - 1.0)
                        - a / (4.0 * gx) * (s2 + 1.0)
                        + b / (16.0 * gx * gx) * (s2 * s2 + 6.0 * s2 + 3.0)
                        + wb(k, l) + zero_point
                        + ccnt * (s2 + 1.0);
            if (f > 0)
                h -= s / (2.0 * std::sqrt(gx)) * (std::conj(u[k]) + u[l]);
            const Complex om = std::exp(raw_cross(k, l) - 0.5 * (nrm[k] + nrm[l]));
            out.omega(k, l) = om;
            out.htilde(k, l) = om * (h - kImag * phi[l] - zdotd(k, l));
        }
    }
    return out;
}

// Per-term kernels for disentangled energy expectations. Each matrix holds
// term(z_k^*, z_l) * <z_k|z_l>; bath_modes[n] carries only oscillator n.
struct EnergyKernels {
    MatrixXcd kinetic_s, potential_s, interaction, counter;
    std::vector<MatrixXcd> bath_modes;
};

inline EnergyKernels energy_kernels(const ModelSpec& spec, const MatrixXcd& Z) {
    const Eigen::Index M = Z.cols();
    const MatrixXcd om = overlap_matrix(Z);
    EnergyKernels ek;
    ek.kinetic_s.resize(M, M);
    ek.potential_s.resize(M, M);
    ek.interaction.resize(M, M);
    ek.counter.resize(M, M);
    ek.bath_modes.assign(spec.bath.f, MatrixXcd(M, M));
#pragma omp parallel for schedule(static)
    for (Eigen::Index l = 0; l < M; ++l) {
        for (Eigen::Index k = 0; k < M; ++k) {
            const OrderedEnergyBreakdown e = h_ord(spec, Z.col(k), Z.col(l));
            ek.kinetic_s(k, l) = e.kinetic_s * om(k, l);
            ek.potential_s(k, l) = e.potential_s * om(k, l);
            ek.interaction(k, l) = e.interaction * om(k, l);
            ek.counter(k, l) = e.counter * om(k, l);
            for (int n = 0; n < spec.bath.f; ++n) {
                const double w = spec.bath.frequencies[n];
                ek.bath_modes[n](k, l) =
                    w * (std::conj(Z(n + 1, k)) * Z(n + 1, l) + 0.5) * om(k, l);
            }
        }
    }
    return ek;
}

}  // namespace ccs
