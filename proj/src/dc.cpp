#include "psdc/dc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace psdc {

Eigen::Index PsdcConfig::effective_k_threshold(Eigen::Index n) const {
    if (k_threshold > 0) return k_threshold;
    return std::max<Eigen::Index>(512, n / 4);
}

const char* to_string(MergePath p) {
    switch (p) {
        case MergePath::gu_dense: return "gu_dense";
        case MergePath::psmma_structured: return "psmma_structured";
        case MergePath::full_deflation: return "full_deflation";
    }
    return "?";
}

Eigen::Index PsdcResult::merges_on_path(MergePath p) const {
    return Eigen::Index(std::count_if(
        merges.begin(), merges.end(),
        [p](const MergeRecord& m) { return m.path == p; }));
}

SplitResult split(const TridiagonalMatrix& t) {
    t.validate();
    const Eigen::Index n = t.order();
    if (n < 2) throw std::invalid_argument("split: order must be >= 2");
    SplitResult s;
    s.k = n / 2;
    s.b_k = t.offdiag[s.k - 1];
    s.t1.diag = t.diag.head(s.k);
    s.t1.offdiag = t.offdiag.head(s.k - 1);
    s.t1.diag[s.k - 1] -= s.b_k;
    s.t2.diag = t.diag.tail(n - s.k);
    s.t2.offdiag = t.offdiag.tail(n - s.k - 1);
    s.t2.diag[0] -= s.b_k;
    return s;
}

Eigen::VectorXd form_u(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2) {
    Eigen::VectorXd u(q1.cols() + q2.cols());
    u.head(q1.cols()) = q1.row(q1.rows() - 1).transpose();
    u.tail(q2.cols()) = q2.row(0).transpose();
    return u;
}

Eigen::MatrixXd update_eigvecs_gu(const Eigen::MatrixXd& w,
                                  const std::vector<int>& support,
                                  Eigen::Index n1, Eigen::Index kept,
                                  const QhatGenerators& qg,
                                  std::int64_t* flops) {
    const Eigen::Index n = w.rows();
    const Eigen::Index n2 = n - n1;
    Eigen::MatrixXd u(n, n);
    u.rightCols(n - kept) = w.rightCols(n - kept);
    if (kept == 0) return u;

    const Eigen::MatrixXd qhat = qg.dense();
    std::vector<Eigen::Index> top_cols, bot_cols;
    for (Eigen::Index c = 0; c < kept; ++c) {
        if (support[size_t(c)] & 1) top_cols.push_back(c);
        if (support[size_t(c)] & 2) bot_cols.push_back(c);
    }

    const auto product_rows = [&](Eigen::Index row0, Eigen::Index nrows,
                                  const std::vector<Eigen::Index>& cols) {
        Eigen::MatrixXd wpart(nrows, Eigen::Index(cols.size()));
        Eigen::MatrixXd qpart(Eigen::Index(cols.size()), kept);
        for (Eigen::Index t = 0; t < Eigen::Index(cols.size()); ++t) {
            wpart.col(t) = w.block(row0, cols[size_t(t)], nrows, 1);
            qpart.row(t) = qhat.row(cols[size_t(t)]);
        }
        u.block(row0, 0, nrows, kept).noalias() = wpart * qpart;
        if (flops) *flops += 2 * nrows * Eigen::Index(cols.size()) * kept;
    };
    if (n1 > 0) product_rows(0, n1, top_cols);
    if (n2 > 0) product_rows(n1, n2, bot_cols);
    return u;
}

PsmmaResult update_eigvecs_psmma(const Eigen::MatrixXd& w_kept,
                                 const QhatGenerators& qg,
                                 const PsdcConfig& cfg) {
    BlockCyclicLayout layout;
    layout.m = w_kept.rows();
    layout.n = w_kept.cols();
    layout.grid = cfg.grid;
    layout.nb = cfg.variant == PsmmaVariant::bdd
                    ? BlockCyclicLayout::bdd_block(layout.m, layout.n, cfg.grid)
                    : cfg.nb;
    const DistMatrix a = DistMatrix::scatter(w_kept, layout);
    const CauchyLike b = CauchyLike::from_generators(qg);
    PsmmaOptions opt;
    opt.variant = cfg.variant;
    opt.tol = cfg.tol;
    opt.max_rank = cfg.max_rank;
    opt.schedule = cfg.schedule;
    return psmma_multiply(a, b, opt);
}

namespace {

// Sorted-merge machinery for one rank-one update.
struct MergeScratch {
    std::vector<Eigen::Index> sort_perm;  // new -> old, concatenated order
    RankOneProblem problem;               // sorted (and flipped when rho < 0)
    bool flipped = false;
};

MergeScratch prepare_problem(const Eigen::VectorXd& d0, const Eigen::VectorXd& u,
                             double b_k) {
    MergeScratch ms;
    const Eigen::Index n = d0.size();
    const double unorm2 = u.squaredNorm();
    const double scale = std::sqrt(unorm2);
    double rho = b_k * unorm2;

    Eigen::VectorXd d = d0;
    ms.flipped = rho < 0.0;
    if (ms.flipped) {
        d = -d;
        rho = -rho;
    }
    ms.sort_perm.resize(size_t(n));
    std::iota(ms.sort_perm.begin(), ms.sort_perm.end(), Eigen::Index(0));
    std::stable_sort(ms.sort_perm.begin(), ms.sort_perm.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return d[a] < d[b]; });

    ms.problem.d.resize(n);
    ms.problem.z.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ms.problem.d[i] = d[ms.sort_perm[size_t(i)]];
        ms.problem.z[i] = u[ms.sort_perm[size_t(i)]] / (scale > 0.0 ? scale : 1.0);
    }
    ms.problem.rho = rho;
    return ms;
}

// W = blockdiag(Q1, Q2) * S * G^T * P with per-column support masks
// (bit 1: rows 0..n1, bit 2: rows n1..n).
void build_w(const Eigen::MatrixXd& q1, const Eigen::MatrixXd& q2,
             const MergeScratch& ms, const DeflationOutcome& defl,
             Eigen::MatrixXd& w, std::vector<int>& support) {
    const Eigen::Index n1 = q1.cols(), n2 = q2.cols();
    const Eigen::Index n = n1 + n2;
    Eigen::MatrixXd ws = Eigen::MatrixXd::Zero(n, n);
    std::vector<int> mask(size_t(n), 0);
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index src = ms.sort_perm[size_t(c)];
        if (src < n1) {
            ws.col(c).head(n1) = q1.col(src);
            mask[size_t(c)] = 1;
        } else {
            ws.col(c).tail(n2) = q2.col(src - n1);
            mask[size_t(c)] = 2;
        }
    }
    for (const GivensRecord& g : defl.rotations) {
        const Eigen::VectorXd wi = ws.col(g.i);
        const Eigen::VectorXd wj = ws.col(g.j);
        ws.col(g.i) = g.c * wi + g.s * wj;
        ws.col(g.j) = -g.s * wi + g.c * wj;
        mask[size_t(g.i)] |= mask[size_t(g.j)];
        mask[size_t(g.j)] = mask[size_t(g.i)];
    }
    w.resize(n, n);
    support.assign(size_t(n), 0);
    for (Eigen::Index c = 0; c < n; ++c) {
        w.col(c) = ws.col(defl.perm[size_t(c)]);
        support[size_t(c)] = mask[size_t(defl.perm[size_t(c)])];
    }
}

struct Solver {
    const PsdcConfig& cfg;
    Eigen::Index k_threshold;
    std::vector<MergeRecord> merges;
    GridStats stats;
    std::int64_t local_flops = 0;

    EigenDecomposition solve(const TridiagonalMatrix& t, Eigen::Index offset) {
        const Eigen::Index n = t.order();
        if (n <= cfg.base_size || n < 2)
            return dense_eig_oracle(t, cfg.oracle_guard);

        const SplitResult sp = split(t);
        const EigenDecomposition e1 = solve(sp.t1, offset);
        const EigenDecomposition e2 = solve(sp.t2, offset + sp.k);
        return merge(e1, e2, sp, offset, n);
    }

    EigenDecomposition merge(const EigenDecomposition& e1,
                             const EigenDecomposition& e2, const SplitResult& sp,
                             Eigen::Index offset, Eigen::Index n) {
        MergeRecord rec;
        rec.offset = offset;
        rec.size = n;
        rec.split_index = sp.k;
        rec.b_k = sp.b_k;

        Eigen::VectorXd d0(n);
        d0.head(sp.k) = e1.values;
        d0.tail(n - sp.k) = e2.values;
        const Eigen::VectorXd u = form_u(e1.vectors, e2.vectors);

        MergeScratch ms = prepare_problem(d0, u, sp.b_k);
        rec.flipped = ms.flipped;

        const double tol = std::max(deflation_tolerance(ms.problem),
                                    std::numeric_limits<double>::min());
        rec.deflation = deflate(ms.problem, tol);
        rec.kept = rec.deflation.kept;

        Eigen::MatrixXd w;
        std::vector<int> support;
        build_w(e1.vectors, e2.vectors, ms, rec.deflation, w, support);

        Eigen::VectorXd values(n);
        Eigen::MatrixXd vectors;
        if (rec.kept == 0) {
            rec.path = MergePath::full_deflation;
            values = rec.deflation.deflated_values;
            vectors = std::move(w);
        } else {
            rec.secular = solve_secular(rec.deflation.dbar, rec.deflation.zbar,
                                        ms.problem.rho);
            const QhatGenerators qg =
                qhat_generators(rec.secular, rec.deflation.zbar);
            values.head(rec.kept) = rec.secular.lam;
            values.tail(n - rec.kept) = rec.deflation.deflated_values;
            if (rec.kept >= k_threshold) {
                rec.path = MergePath::psmma_structured;
                PsmmaResult pr =
                    update_eigvecs_psmma(w.leftCols(rec.kept), qg, cfg);
                stats.accumulate(pr.stats);
                rec.rank_sum = pr.rank_sum();
                rec.any_truncated = pr.any_truncated();
                vectors.resize(n, n);
                vectors.leftCols(rec.kept) = pr.c.gather();
                vectors.rightCols(n - rec.kept) = w.rightCols(n - rec.kept);
            } else {
                rec.path = MergePath::gu_dense;
                vectors = update_eigvecs_gu(w, support, sp.k, rec.kept, qg,
                                            &rec.gu_flops);
                local_flops += rec.gu_flops;
            }
        }

        if (ms.flipped) values = -values;

        // Global ascending order with the matching column permutation.
        std::vector<Eigen::Index> order(size_t(n));
        std::iota(order.begin(), order.end(), Eigen::Index(0));
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) {
                             return values[a] < values[b];
                         });
        EigenDecomposition out;
        out.values.resize(n);
        out.vectors.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            out.values[i] = values[order[size_t(i)]];
            out.vectors.col(i) = vectors.col(order[size_t(i)]);
        }
        merges.push_back(std::move(rec));
        return out;
    }
};

}  // namespace

PsdcResult psdc_solve(const TridiagonalMatrix& t, const PsdcConfig& cfg) {
    t.validate();
    if (cfg.base_size < 1)
        throw std::invalid_argument("psdc_solve: base_size must be >= 1");
    Solver solver{cfg, cfg.effective_k_threshold(t.order()),
                  {}, GridStats(cfg.grid.ranks()), 0};
    PsdcResult res;
    res.eig = solver.solve(t, 0);
    res.merges = std::move(solver.merges);
    res.stats = std::move(solver.stats);
    res.local_flops = solver.local_flops;
    return res;
}

}  // namespace psdc
