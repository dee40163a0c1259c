#ifndef PSDC_DC_HPP
#define PSDC_DC_HPP

#include <cstdint>
#include <vector>

#include "psdc/dist_matrix.hpp"
#include "psdc/eigen_oracle.hpp"
#include "psdc/psmma.hpp"
#include "psdc/secular.hpp"
#include "psdc/tridiagonal.hpp"

namespace psdc {

struct PsdcConfig {
    Eigen::Index base_size = 64;   ///< leaf switch to the dense solver
    Eigen::Index k_threshold = 0;  ///< secular size that turns on the
                                   ///< structured path; 0 -> max(512, n/4)
    PsmmaVariant variant = PsmmaVariant::bdd;
    GridShape grid{1, 1};
    Eigen::Index nb = 64;
    double tol = 1e-15;            ///< merge compression tolerance
    Eigen::Index max_rank = -1;
    Schedule schedule = Schedule::sequential;
    Eigen::Index oracle_guard = 4096;

    Eigen::Index effective_k_threshold(Eigen::Index n) const;
};

enum class MergePath { gu_dense, psmma_structured, full_deflation };

const char* to_string(MergePath p);

/// One rank-one merge of the recursion.
struct MergeRecord {
    Eigen::Index offset = 0;       ///< submatrix position in the full matrix
    Eigen::Index size = 0;
    Eigen::Index split_index = 0;  ///< k of the rank-one tear
    double b_k = 0.0;
    bool flipped = false;          ///< solved through the M -> -M symmetry
    Eigen::Index kept = 0;
    MergePath path = MergePath::gu_dense;
    DeflationOutcome deflation;
    SecularSolution secular;
    Eigen::Index rank_sum = 0;     ///< compressed/effective ranks (psmma path)
    bool any_truncated = false;
    std::int64_t gu_flops = 0;     ///< dense-path multiply flops
};

struct PsdcResult {
    EigenDecomposition eig;
    std::vector<MergeRecord> merges;
    GridStats stats;               ///< accumulated over the distributed merges
    std::int64_t local_flops = 0;  ///< dense-path multiply flops, all merges

    Eigen::Index merges_on_path(MergePath p) const;
};

struct SplitResult {
    TridiagonalMatrix t1;
    TridiagonalMatrix t2;
    Eigen::Index k = 0;
    double b_k = 0.0;
};

/// Rank-one tear at k = floor(n/2): both touching diagonal entries give up
/// b_k, so T = diag(T1, T2) + b_k v v^T with v = e_k + e_{k+1}.
SplitResult split(const TridiagonalMatrix& t);

/// The update vector u = [last row of Q1; first row of Q2]^T.
Eigen::VectorXd form_u(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2);

/// Eigenvector update through Gu's grouping: columns of W are classified by
/// their support (top block, bottom block, or mixed) and the update collapses
/// to one product per row block against the matching rows of Qhat.
/// `w` is the n x n matrix blockdiag(Q1,Q2) * S * G^T * P with the kept
/// columns leading; `support` classifies its columns (bit 1 = top rows,
/// bit 2 = bottom rows).  Returns the full eigenvector matrix with deflated
/// columns appended untouched; adds the multiply flops to `flops`.
Eigen::MatrixXd update_eigvecs_gu(const Eigen::MatrixXd& w,
                                  const std::vector<int>& support,
                                  Eigen::Index n1, Eigen::Index kept,
                                  const QhatGenerators& qg,
                                  std::int64_t* flops = nullptr);

/// Structured update: the kept columns of W are scattered without any
/// regrouping (regrouping would destroy the off-diagonal low-rank structure
/// of Qhat) and multiplied against the generator form of Qhat with PSMMA.
/// Returns the distributed kept block of the eigenvector matrix.
PsmmaResult update_eigvecs_psmma(const Eigen::MatrixXd& w_kept,
                                 const QhatGenerators& qg,
                                 const PsdcConfig& cfg);

/// Recursive structured divide-and-conquer eigensolver.
PsdcResult psdc_solve(const TridiagonalMatrix& t, const PsdcConfig& cfg);

}  // namespace psdc

#endif
