#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace pwae {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Rng = std::mt19937_64;

}  // namespace pwae
