// grid.hpp — Tensor-product position grids for the exact propagation oracle.
// Arrays are stored flat in row-major order (last axis contiguous); per-axis
// FFTs gather strided lines into contiguous buffers and run batches in
// parallel.

#pragma once

#include <unsupported/Eigen/FFT>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ccs/model.hpp"
#include "ccs/types.hpp"

namespace ccs {

struct GridAxis {
    double min{0.0};
    double max{0.0};  // exclusive: points at min + i*dx, i = 0..n-1 (periodic)
    int n{0};
    double mass{1.0};

    double dx() const { return (max - min) / n; }
    double point(int i) const { return min + dx() * i; }
    // FFT wavenumber of index i.
    double wavenumber(int i) const {
        const double dk = 2.0 * M_PI / (max - min);
        return dk * (i <= n / 2 - 1 ? i : i - n);
    }
};

inline constexpr std::int64_t kMaxGridPoints = std::int64_t(1) << 26;

class GridWavefunction {
  public:
    GridWavefunction() = default;

    explicit GridWavefunction(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
        if (axes_.empty() || axes_.size() > 4)
            throw std::invalid_argument("GridWavefunction: supports 1 to 4 dimensions");
        std::int64_t total = 1;
        for (const auto& ax : axes_) {
            if (ax.n < 2 || !(ax.max > ax.min) || !(ax.mass > 0.0))
                throw std::invalid_argument("GridWavefunction: malformed axis");
            total *= ax.n;
            if (total > kMaxGridPoints)
                throw std::invalid_argument("GridWavefunction: grid exceeds the point budget");
        }
        psi_ = VectorXcd::Zero(total);
    }

    const std::vector<GridAxis>& axes() const { return axes_; }
    int dims() const { return static_cast<int>(axes_.size()); }
    std::int64_t size() const { return psi_.size(); }
    VectorXcd& values() { return psi_; }
    const VectorXcd& values() const { return psi_; }

    double cell_volume() const {
        double v = 1.0;
        for (const auto& ax : axes_) v *= ax.dx();
        return v;
    }

    void decode(std::int64_t flat, std::vector<int>& idx) const {
        idx.resize(axes_.size());
        for (int d = dims() - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(flat % axes_[d].n);
            flat /= axes_[d].n;
        }
    }

    double norm_squared() const { return psi_.squaredNorm() * cell_volume(); }

    Complex inner(const GridWavefunction& other) const {
        if (other.size() != size())
            throw std::invalid_argument("GridWavefunction::inner: size mismatch");
        return psi_.dot(other.psi_) * cell_volume();
    }

    // Product of per-axis Gaussians (gamma_d/pi)^{1/4} exp(-gamma_d q^2/2).
    static GridWavefunction product_gaussian(std::vector<GridAxis> axes,
                                             const VectorXd& gamma) {
        GridWavefunction w(std::move(axes));
        if (gamma.size() != w.dims())
            throw std::invalid_argument("product_gaussian: width count mismatch");
        std::vector<int> idx;
        for (std::int64_t i = 0; i < w.size(); ++i) {
            w.decode(i, idx);
            double v = 1.0;
            for (int d = 0; d < w.dims(); ++d) {
                const double q = w.axes_[d].point(idx[d]);
                v *= std::pow(gamma[d] / M_PI, 0.25) * std::exp(-0.5 * gamma[d] * q * q);
            }
            w.psi_[i] = v;
        }
        return w;
    }

  private:
    std::vector<GridAxis> axes_;
    VectorXcd psi_;
};

namespace detail {

// In-place FFT along one axis of the flattened tensor. inverse=true applies
// the 1/n-scaled inverse so fwd followed by inv is the identity.
inline void fft_axis(VectorXcd& data, const std::vector<GridAxis>& axes, int axis,
                     bool inverse) {
    const int nd = static_cast<int>(axes.size());
    const int n = axes[axis].n;
    std::int64_t stride = 1;
    for (int d = axis + 1; d < nd; ++d) stride *= axes[d].n;
    const std::int64_t block = stride * n;
    const std::int64_t n_lines = data.size() / n;

#pragma omp parallel
    {
        thread_local Eigen::FFT<double> fft;
        VectorXcd in(n), out(n);
#pragma omp for schedule(static)
        for (std::int64_t line = 0; line < n_lines; ++line) {
            const std::int64_t outer = line / stride;
            const std::int64_t inner = line % stride;
            const std::int64_t base = outer * block + inner;
            for (int i = 0; i < n; ++i) in[i] = data[base + i * stride];
            if (inverse)
                fft.inv(out, in);
            else
                fft.fwd(out, in);
            for (int i = 0; i < n; ++i) data[base + i * stride] = out[i];
        }
    }
}

}  // namespace detail

// Kinetic energy carried by one axis, <p_axis^2>/(2 m_axis), via Parseval.
inline double axis_kinetic_energy(const GridWavefunction& w, int axis) {
    VectorXcd tmp = w.values();
    detail::fft_axis(tmp, w.axes(), axis, false);
    const GridAxis& ax = w.axes()[axis];
    std::int64_t stride = 1;
    for (std::size_t d = axis + 1; d < w.axes().size(); ++d) stride *= w.axes()[d].n;
    double e = 0.0;
#pragma omp parallel for reduction(+ : e) schedule(static)
    for (std::int64_t i = 0; i < tmp.size(); ++i) {
        const int ki = static_cast<int>((i / stride) % ax.n);
        const double k = ax.wavenumber(ki);
        e += std::norm(tmp[i]) * k * k;
    }
    return e / (2.0 * ax.mass) * w.cell_volume() / ax.n;
}

}  // namespace ccs
