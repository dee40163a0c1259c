#ifndef PSDC_TRIDIAGONAL_HPP
#define PSDC_TRIDIAGONAL_HPP

#include <iosfwd>
#include <string>

#include <Eigen/Dense>

namespace psdc {

/// Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal.
struct TridiagonalMatrix {
    Eigen::VectorXd diag;     ///< a_1..a_n
    Eigen::VectorXd offdiag;  ///< b_1..b_{n-1}

    Eigen::Index order() const { return diag.size(); }

    /// Throws std::invalid_argument on size mismatch or non-finite entries.
    void validate() const;

    Eigen::MatrixXd dense() const;
};

/// Clement-type matrix of order n+1: zero diagonal, off-diagonals
/// sqrt(i*(n+1-i)) for i=1..n.  Its spectrum is {-n, -n+2, ..., n}.
TridiagonalMatrix make_clement(Eigen::Index n);

/// Hermite-type matrix of order n: zero diagonal, off-diagonals sqrt(i).
TridiagonalMatrix make_hermite(Eigen::Index n);

/// Toeplitz-type matrix of order n: diagonal 2, off-diagonals 1.
TridiagonalMatrix make_toeplitz_type(Eigen::Index n);

/// Spherical-harmonic-transform matrix of order n with parameter m:
/// diagonal d_{m+2j} and off-diagonal c_{m+2j}, j = 0..n-1, where
///   c_l = sqrt((x+1)(x+2)(l+m+1)(l+m+2) / ((2l+1)(2l+3)^2(2l+5))), x = l-m,
///   d_l = (2l(l+1) - 2m^2 - 1) / ((2l-1)(2l+3)).
TridiagonalMatrix make_sht(Eigen::Index n, Eigen::Index m);

/// Diagonal entry helper for the SHT family (exposed for tests).
double sht_diag_term(Eigen::Index l, Eigen::Index m);
/// Off-diagonal entry helper for the SHT family.
double sht_offdiag_term(Eigen::Index l, Eigen::Index m);

/// Text format: line 1 holds n, line 2 the n diagonal entries, line 3 the
/// n-1 off-diagonal entries, all whitespace separated, 17 significant digits.
TridiagonalMatrix read_tridiagonal(std::istream& in);
TridiagonalMatrix read_tridiagonal_file(const std::string& path);
void write_tridiagonal(std::ostream& out, const TridiagonalMatrix& t);
void write_tridiagonal_file(const std::string& path, const TridiagonalMatrix& t);

}  // namespace psdc

#endif
