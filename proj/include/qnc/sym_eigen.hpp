#pragma once

#include <Eigen/Dense>

namespace qnc {

/// Eigendecomposition of a real symmetric matrix, A = V diag(values) V^T,
/// eigenvalues ascending. Cyclic Jacobi rotations; dimensions up to 256.
struct SymEigenResult {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors; // columns are eigenvectors
};

SymEigenResult jacobi_eigen(const Eigen::MatrixXd& a);

double min_eigenvalue(const Eigen::MatrixXd& a);

/// Eigenvector of the smallest eigenvalue (last Jacobi column after sorting).
Eigen::VectorXd min_eigenvector(const Eigen::MatrixXd& a);

} // namespace qnc
