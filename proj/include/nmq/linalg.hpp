// linalg.hpp - dense symmetric eigensolver, real GEMM and a Lanczos propagator for sparse real H

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace nmq::linalg {

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct SymmetricEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns are eigenvectors
};

// Eigenvalues ascending. Throws std::runtime_error if the solver does not converge.
SymmetricEigen eigh(const Eigen::MatrixXd& h);

// C = A * B; C is resized.
void gemm(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, Eigen::MatrixXd& c);

struct KrylovOptions {
    int max_dim{30};
    double tol{1e-12};  // a-posteriori error bound per substep, relative to the vector norm
};

// psi <- exp(-i H dt) psi by short-iteration Lanczos with automatic substepping.
// Returns the number of substeps taken.
int krylov_propagate(const SparseRowMatrix& h, Eigen::VectorXcd& psi, double dt, const KrylovOptions& opt = {});

}  // namespace nmq::linalg
