#ifndef PSDC_PSMMA_HPP
#define PSDC_PSMMA_HPP

#include <vector>

#include "psdc/cauchy.hpp"
#include "psdc/dist_matrix.hpp"
#include "psdc/grid.hpp"
#include "psdc/srrsc.hpp"

namespace psdc {

enum class PsmmaVariant { bcdd, bdd, wredist, nlowrank };

const char* to_string(PsmmaVariant v);
PsmmaVariant psmma_variant_from_string(const std::string& s);

struct PsmmaOptions {
    PsmmaVariant variant = PsmmaVariant::bcdd;
    double tol = 1e-12;          ///< compression tolerance (relative)
    Eigen::Index max_rank = -1;  ///< <0 selects the srrsc default
    Schedule schedule = Schedule::sequential;
};

/// Index sets of the B window one rank multiplies at one shift step:
/// CIndex are the B columns this process column owns for C, RIndex the
/// global A columns currently resident (= required B rows).
struct IndexWindow {
    std::vector<Eigen::Index> r_index;
    std::vector<Eigen::Index> c_index;
};

/// True when the window is worth compressing: the row and column index
/// ranges do not overlap, so the nodes are separated and the block is
/// expected to be numerically low-rank.  Interleaved (block-cyclic) index
/// sets overlap as ranges at every step and stay dense.
bool lowrank_decision(const IndexWindow& win);

/// What happened at one (rank, shift) window.
struct WindowRecord {
    int rank = 0;
    int step = 0;
    Eigen::Index rows = 0;
    Eigen::Index cols = 0;
    Eigen::Index rank_used = 0;  ///< factor rank, or min(rows, cols) if dense
    bool compressed = false;
    bool truncated = false;      ///< compression hit max_rank and fell back
};

struct PsmmaResult {
    DistMatrix c;
    GridStats stats;
    std::vector<WindowRecord> windows;

    Eigen::Index rank_sum() const;
    bool any_truncated() const;
};

/// C = A * B where A is distributed and B is Cauchy-like with generators
/// replicated on every rank.  Loop per shift step: build B(RIndex, CIndex)
/// locally from the generators (B is never communicated), optionally
/// compress with SRRSC, accumulate, then shift A cyclically.  C inherits
/// A's layout parameters.  The wredist variant moves A to the block form
/// first and moves C back afterwards.
PsmmaResult psmma_multiply(const DistMatrix& a, const CauchyLike& b,
                           const PsmmaOptions& opt);

/// SUMMA-style dense baseline (panel broadcasts of both operands), the
/// counter stand-in for PDGEMM.
PsmmaResult baseline_dense_multiply(const DistMatrix& a, const DistMatrix& b,
                                    Schedule schedule = Schedule::sequential);

}  // namespace psdc

#endif
