#ifndef PSDC_EIGEN_ORACLE_HPP
#define PSDC_EIGEN_ORACLE_HPP

#include <Eigen/Dense>

#include "psdc/tridiagonal.hpp"

namespace psdc {

/// Full spectral decomposition: values ascending, column j of `vectors`
/// is the eigenvector for values[j].
struct EigenDecomposition {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

struct AccuracyReport {
    double orthogonality = 0.0;  ///< ||I - Q Q^T||_max
    double residual = 0.0;       ///< ||T - Q L Q^T||_c / ||T||_2
};

/// Reference dense eigensolver (implicit QL/QR on the tridiagonal form).
/// Serves both as the divide-and-conquer base case and as the test oracle.
/// `size_guard` rejects accidental large dense solves.
EigenDecomposition dense_eig_oracle(const TridiagonalMatrix& t,
                                    Eigen::Index size_guard = 4096);

/// ||I - Q Q^T||_max for a square Q.
double orthogonality(const Eigen::MatrixXd& q);

/// ||T - Q L Q^T||_c / ||T||_2 where ||.||_c is the largest per-column
/// Euclidean norm and ||T||_2 is taken as max|values| of the supplied
/// decomposition.  Defined as 0 when that scale is 0.
double residual(const TridiagonalMatrix& t, const EigenDecomposition& e);

AccuracyReport accuracy(const TridiagonalMatrix& t, const EigenDecomposition& e);

/// Singular values of a dense matrix, descending (LAPACK dgesdd).
Eigen::VectorXd singular_values(const Eigen::MatrixXd& a);

/// Number of singular values strictly above tol * sigma_max.
Eigen::Index eps_rank(const Eigen::MatrixXd& a, double tol);

}  // namespace psdc

#endif
