#include "psdc/eigen_oracle.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace psdc {

EigenDecomposition dense_eig_oracle(const TridiagonalMatrix& t,
                                    Eigen::Index size_guard) {
    t.validate();
    const Eigen::Index n = t.order();
    if (n > size_guard)
        throw std::invalid_argument("dense_eig_oracle: size guard exceeded");

    EigenDecomposition e;
    e.values = t.diag;
    Eigen::VectorXd sub = t.offdiag;
    e.vectors.setIdentity(n, n);
    if (n > 1) {
        const lapack_int info = LAPACKE_dsteqr(
            LAPACK_COL_MAJOR, 'I', lapack_int(n), e.values.data(), sub.data(),
            e.vectors.data(), lapack_int(n));
        if (info != 0)
            throw std::runtime_error("dense_eig_oracle: dsteqr failed to converge");
    }
    return e;
}

double orthogonality(const Eigen::MatrixXd& q) {
    if (q.rows() != q.cols())
        throw std::invalid_argument("orthogonality: matrix must be square");
    const Eigen::Index n = q.rows();
    Eigen::MatrixXd g = q * q.transpose();
    g -= Eigen::MatrixXd::Identity(n, n);
    return g.cwiseAbs().maxCoeff();
}

double residual(const TridiagonalMatrix& t, const EigenDecomposition& e) {
    t.validate();
    const Eigen::Index n = t.order();
    if (e.values.size() != n || e.vectors.rows() != n || e.vectors.cols() != n)
        throw std::invalid_argument("residual: dimension mismatch");

    const double scale = e.values.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;

    Eigen::MatrixXd r = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    r.diagonal() -= t.diag;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        r(i, i + 1) -= t.offdiag[i];
        r(i + 1, i) -= t.offdiag[i];
    }
    const double col_norm = r.colwise().norm().maxCoeff();
    return col_norm / scale;
}

AccuracyReport accuracy(const TridiagonalMatrix& t, const EigenDecomposition& e) {
    return AccuracyReport{orthogonality(e.vectors), residual(t, e)};
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& a) {
    const lapack_int m = lapack_int(a.rows());
    const lapack_int n = lapack_int(a.cols());
    Eigen::MatrixXd work = a;  // dgesdd destroys its input
    Eigen::VectorXd s(std::min(a.rows(), a.cols()));
    const lapack_int info =
        LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(),
                       nullptr, 1, nullptr, 1);
    if (info != 0) throw std::runtime_error("singular_values: dgesdd failed");
    return s;
}

Eigen::Index eps_rank(const Eigen::MatrixXd& a, double tol) {
    const Eigen::VectorXd s = singular_values(a);
    if (s.size() == 0 || s[0] == 0.0) return 0;
    const double cutoff = tol * s[0];
    Eigen::Index r = 0;
    while (r < s.size() && s[r] > cutoff) ++r;
    return r;
}

}  // namespace psdc
