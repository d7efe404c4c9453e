#pragma once

#include <complex>

#include <Eigen/Dense>

namespace chiralkerr {

using cplx = std::complex<double>;
using Matrix2c = Eigen::Matrix<cplx, 2, 2>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Matrix16c = Eigen::Matrix<cplx, 16, 16>;
using Vector16c = Eigen::Matrix<cplx, 16, 1>;

}  // namespace chiralkerr
