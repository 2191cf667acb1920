#pragma once

#include <Eigen/Dense>

#include <complex>

namespace ccs {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr Complex kImag{0.0, 1.0};

}  // namespace ccs
