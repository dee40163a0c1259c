#ifndef PSDC_SRRSC_HPP
#define PSDC_SRRSC_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "psdc/cauchy.hpp"

namespace psdc {

/// State of the pivoted Schur-complement elimination.  Everything lives in
/// permuted coordinates: position p of the working matrix is row `row_pos[p]`
/// / column `col_pos[p]` of the original CauchyLike.  Storage is O(m+n).
struct SchurState {
    Eigen::Index k = 0;                   ///< steps completed
    std::vector<Eigen::Index> row_pos;    ///< permuted row order
    std::vector<Eigen::Index> col_pos;    ///< permuted column order
    Eigen::VectorXd u;                    ///< current u^{(k)}; tail k..m-1 live
    Eigen::VectorXd v;                    ///< current v^{(k)}; tail k..n-1 live
    Eigen::VectorXd y;                    ///< y^{(k)}(0..k-1)

    static SchurState init(const CauchyLike& c);
};

/// Pivot estimate: the top candidates by |u| and |v| are combined and the
/// largest |u_i v_j / (d_i - w_j)| over those pairs wins.  Returns permuted
/// positions (>= k).
std::pair<Eigen::Index, Eigen::Index> pivot_select(const SchurState& s,
                                                   const CauchyLike& c);

/// Swaps the chosen pivot into the leading position of the active block.
void apply_pivot(SchurState& s, Eigen::Index prow, Eigen::Index pcol);

/// |A^{(k)}(0,0)| evaluated from the current generators.
double pivot_magnitude(const SchurState& s, const CauchyLike& c);

/// Entry (i, j) of the k-th Schur complement from the current generators
/// (positions relative to the active block).
double schur_entry(const SchurState& s, const CauchyLike& c, Eigen::Index i,
                   Eigen::Index j);

/// Advances the elimination one step: scales the u/v tails by the
/// generator recurrences and extends y.  Throws on a zero denominator
/// (coincident nodes); the caller must have pivoted those away.
void schur_step(SchurState& s, const CauchyLike& c);

/// Rank-revealing interpolative factorization  A P ~= A(:, cols) [I  Z].
struct LowRankFactor {
    Eigen::Index rank = 0;
    std::vector<Eigen::Index> cols;      ///< selected columns, pivot order
    std::vector<Eigen::Index> col_perm;  ///< full permuted column order P
    Eigen::VectorXd y;                   ///< y^{(rank)}
    Eigen::VectorXd v_tail;              ///< v^{(rank)} at positions rank..n-1
    bool truncated = false;              ///< max_rank hit before tolerance
    std::int64_t flops = 0;              ///< work spent inside the compressor

    /// Z^{(rank)}, evaluated as y_i * v_tail_j / (w_i - w_{rank+j}).
    Eigen::MatrixXd z_dense(const CauchyLike& c) const;
    /// Dense  A(:, cols) [I  Z] P^T  (for verification at small sizes).
    Eigen::MatrixXd reconstruct(const CauchyLike& c) const;
};

struct SrrscOptions {
    double tol = 1e-12;            ///< relative to the first pivot magnitude
    Eigen::Index max_rank = -1;    ///< <0 selects default_max_rank(m, n)
};

/// Default rank cap: beyond ~0.4*min(m,n)+64 compression loses to dense.
Eigen::Index default_max_rank(Eigen::Index m, Eigen::Index n);

/// Pivoted elimination until the pivot magnitude falls below
/// tol * (first pivot magnitude), the factorization is exact, or max_rank is
/// reached (-> truncated flag).  Peak working storage O(m+n).
LowRankFactor srrsc_compress(const CauchyLike& c, const SrrscOptions& opt = {});

/// a * (A(:, cols) [I  Z] P^T) using the factored form, where `a` multiplies
/// the compressed Cauchy-like matrix from the left.
Eigen::MatrixXd apply_factor(const Eigen::MatrixXd& a, const LowRankFactor& f,
                             const CauchyLike& c);

}  // namespace psdc

#endif
