#ifndef PSDC_SECULAR_HPP
#define PSDC_SECULAR_HPP

#include <vector>

#include <Eigen/Dense>

namespace psdc {

/// Diagonal-plus-rank-one spectral subproblem  M = D + rho * z z^T.
/// d is sorted ascending (ties allowed until deflation has run); z is
/// normalized to unit 2-norm with rho carrying the magnitude.
struct RankOneProblem {
    Eigen::VectorXd d;
    Eigen::VectorXd z;
    double rho = 0.0;
};

/// One plane rotation acting on coordinates (i, j), i < j:
///   [ c  s ] [x_i]   [x_i']
///   [-s  c ] [x_j] = [x_j'].
/// Deflation picks c = z_i/t, s = z_j/t with t = hypot(z_i, z_j), which
/// keeps the rotated weight at position i and zeroes position j.
struct GivensRecord {
    Eigen::Index i = 0;
    Eigen::Index j = 0;
    double c = 1.0;
    double s = 0.0;
};

/// Result of deflating a RankOneProblem.  Applying `rotations` (in order)
/// and then gathering with `perm` maps the input (d, z) onto
/// (dbar ++ deflated_values, zbar ++ ~0).
struct DeflationOutcome {
    Eigen::Index kept = 0;                 ///< size of the surviving secular problem
    std::vector<Eigen::Index> perm;        ///< gather map: new position -> old position
    std::vector<GivensRecord> rotations;
    Eigen::VectorXd dbar;                  ///< surviving poles, strictly ascending
    Eigen::VectorXd zbar;                  ///< surviving weights, all above tolerance
    Eigen::VectorXd deflated_values;       ///< eigenvalues settled by deflation
};

/// LAPACK-convention deflation tolerance: 8 * eps * max(max|d|, |rho|).
double deflation_tolerance(const RankOneProblem& p);

/// Deflates negligible weights (|rho * z_i| <= tol) directly and near-equal
/// pole pairs through plane rotations, moving everything deflated to the tail.
/// Full deflation (kept == 0) is a valid outcome.
DeflationOutcome deflate(const RankOneProblem& p, double tol);

/// Roots of the secular equation f(x) = 1 + rho * sum z_k^2 / (d_k - x),
/// one per pole gap, with the gap representation carried exactly as the
/// root finder produced it:
///   gamma_j = lam_j - d_j  and  mu_j = d_{j+1} - lam_j,
/// the last mu measured from the upper bound d_K + rho * ||z||^2.
struct SecularSolution {
    Eigen::VectorXd d;       ///< poles (copy of the deflated dbar)
    Eigen::VectorXd lam;     ///< roots, ascending
    Eigen::VectorXd gamma;   ///< lam - d, positive
    Eigen::VectorXd mu;      ///< next pole minus lam, positive (mu_K >= 0)
    Eigen::VectorXd vnorm;   ///< column normalizers 1/sqrt(sum z_k^2/(d_k-lam_j)^2)
    double rho = 0.0;

    Eigen::Index size() const { return lam.size(); }
};

/// Requires dbar strictly ascending, every zbar entry nonzero, rho > 0.
/// (Negative rho is handled by the caller through the M -> -M symmetry.)
SecularSolution solve_secular(const Eigen::VectorXd& dbar,
                              const Eigen::VectorXd& zbar, double rho);

/// d_i - lam_j formed without cancellation (0-based indices):
///   (d_i - d_j) - gamma_j       for i <= j,
///   (d_i - d_{j+1}) + mu_j      for i > j.
double stable_diff(const SecularSolution& sol, Eigen::Index i, Eigen::Index j);

/// Five-generator representation of the eigenvector matrix of M:
/// entry (i, j) = u_i * v_j / (d_i - lam_j) with the denominator formed
/// through the gap representation.  u is the weight vector recomputed from
/// the computed roots (Loewner consistency), which is what keeps the
/// reconstructed columns orthogonal to working precision.
struct QhatGenerators {
    Eigen::VectorXd d;
    Eigen::VectorXd gamma;
    Eigen::VectorXd mu;
    Eigen::VectorXd u;
    Eigen::VectorXd v;

    Eigen::Index size() const { return d.size(); }
    double stable_diff(Eigen::Index i, Eigen::Index j) const;
    double entry(Eigen::Index i, Eigen::Index j) const;
    Eigen::MatrixXd dense() const;
};

QhatGenerators qhat_generators(const SecularSolution& sol,
                               const Eigen::VectorXd& zbar);

}  // namespace psdc

#endif
