#ifndef RQCA_TYPES_HPP
#define RQCA_TYPES_HPP

#include <complex>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace rqca {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<cd>;
using Index = Eigen::Index;

inline constexpr cd iu{0.0, 1.0};

}  // namespace rqca

#endif
