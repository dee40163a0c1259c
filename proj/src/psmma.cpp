#include "psdc/psmma.hpp"

#include <algorithm>
#include <stdexcept>

namespace psdc {

const char* to_string(PsmmaVariant v) {
    switch (v) {
        case PsmmaVariant::bcdd: return "bcdd";
        case PsmmaVariant::bdd: return "bdd";
        case PsmmaVariant::wredist: return "wredist";
        case PsmmaVariant::nlowrank: return "nlowrank";
    }
    return "?";
}

PsmmaVariant psmma_variant_from_string(const std::string& s) {
    if (s == "bcdd") return PsmmaVariant::bcdd;
    if (s == "bdd") return PsmmaVariant::bdd;
    if (s == "wredist") return PsmmaVariant::wredist;
    if (s == "nlowrank") return PsmmaVariant::nlowrank;
    throw std::invalid_argument("unknown psmma variant: " + s);
}

bool lowrank_decision(const IndexWindow& win) {
    if (win.r_index.empty() || win.c_index.empty()) return true;
    const Eigen::Index rlo = win.r_index.front(), rhi = win.r_index.back();
    const Eigen::Index clo = win.c_index.front(), chi = win.c_index.back();
    return rhi < clo || chi < rlo;
}

Eigen::Index PsmmaResult::rank_sum() const {
    Eigen::Index s = 0;
    for (const WindowRecord& w : windows) s += w.rank_used;
    return s;
}

bool PsmmaResult::any_truncated() const {
    return std::any_of(windows.begin(), windows.end(),
                       [](const WindowRecord& w) { return w.truncated; });
}

namespace {

// Core cyclic-shift loop, run with A already in the layout the variant wants.
PsmmaResult psmma_core(const DistMatrix& a, const CauchyLike& b,
                       const PsmmaOptions& opt) {
    const BlockCyclicLayout& al = a.layout;
    const GridShape& g = al.grid;
    if (al.n != b.rows())
        throw std::invalid_argument("psmma: inner dimension mismatch");
    if (a.col_shift != 0)
        throw std::invalid_argument("psmma: A tiles are shifted");

    BlockCyclicLayout cl = al;
    cl.n = b.cols();

    PsmmaResult res;
    res.c = DistMatrix::zeros(cl);
    std::vector<std::vector<WindowRecord>> records(size_t(g.ranks()));

    res.stats = run_grid(
        g,
        [&](Rank& rank) {
            const int pr = rank.row(), pc = rank.col();
            const std::vector<Eigen::Index> c_index = cl.owned_cols(pc);
            Eigen::MatrixXd acur = a.local[size_t(rank.id())];
            Eigen::MatrixXd cloc = Eigen::MatrixXd::Zero(
                cl.local_rows(pr), Eigen::Index(c_index.size()));

            for (int step = 0; step < g.q; ++step) {
                const int resident = (pc + step) % g.q;
                const std::vector<Eigen::Index> r_index = al.owned_cols(resident);

                if (!r_index.empty() && !c_index.empty() && cloc.rows() > 0) {
                    const CauchyLike win = b.submatrix(r_index, c_index);
                    WindowRecord rec;
                    rec.rank = rank.id();
                    rec.step = step;
                    rec.rows = win.rows();
                    rec.cols = win.cols();

                    const bool separated = lowrank_decision(
                        IndexWindow{r_index, c_index});
                    const Eigen::Index mn = std::min(win.rows(), win.cols());
                    const Eigen::Index mx = std::max(win.rows(), win.cols());
                    bool attempt = separated;
                    if (!attempt && opt.variant == PsmmaVariant::bcdd && mx >= 4 * mn)
                        attempt = true;  // cheap win on very lopsided windows
                    if (opt.variant == PsmmaVariant::nlowrank) attempt = false;

                    bool done = false;
                    if (attempt) {
                        SrrscOptions so;
                        so.tol = opt.tol;
                        so.max_rank = opt.max_rank;
                        const LowRankFactor f = srrsc_compress(win, so);
                        if (!f.truncated) {
                            cloc.noalias() += apply_factor(acur, f, win);
                            rank.add_flops(f.flops + 3 * f.rank * win.rows() +
                                           2 * acur.rows() * acur.cols() * f.rank +
                                           3 * f.rank * (win.cols() - f.rank) +
                                           2 * acur.rows() * f.rank *
                                               (win.cols() - f.rank));
                            rec.compressed = true;
                            rec.rank_used = f.rank;
                            done = true;
                        } else {
                            rec.truncated = true;
                        }
                    }
                    if (!done) {
                        const Eigen::MatrixXd bwin = win.dense();
                        cloc.noalias() += acur * bwin;
                        rank.add_flops(3 * win.rows() * win.cols() +
                                       2 * acur.rows() * acur.cols() * win.cols());
                        rec.rank_used = mn;
                    }
                    records[size_t(rank.id())].push_back(rec);
                }

                if (step + 1 < g.q) {
                    const int dest = g.rank_of(pr, (pc - 1 + g.q) % g.q);
                    rank.send(dest,
                              std::span<const double>(acur.data(), size_t(acur.size())),
                              PayloadTag::matrix_a);
                    const int src = g.rank_of(pr, (pc + 1) % g.q);
                    const std::vector<double> buf = rank.recv(src);
                    const Eigen::Index rows = al.local_rows(pr);
                    const Eigen::Index cols = al.local_cols((pc + step + 1) % g.q);
                    if (Eigen::Index(buf.size()) != rows * cols)
                        throw std::runtime_error("psmma: shifted tile size mismatch");
                    acur = Eigen::Map<const Eigen::MatrixXd>(buf.data(), rows, cols);
                }
            }
            res.c.local[size_t(rank.id())] = std::move(cloc);
        },
        opt.schedule);

    for (auto& r : records)
        res.windows.insert(res.windows.end(), r.begin(), r.end());
    return res;
}

}  // namespace

PsmmaResult psmma_multiply(const DistMatrix& a, const CauchyLike& b,
                           const PsmmaOptions& opt) {
    if (opt.variant != PsmmaVariant::wredist) return psmma_core(a, b, opt);

    // wredist: move A to the block form, multiply there, bring C home.
    BlockCyclicLayout bdd = a.layout;
    bdd.nb = BlockCyclicLayout::bdd_block(a.layout.m, a.layout.n, a.layout.grid);
    GridStats moves(a.layout.grid.ranks());
    const DistMatrix a2 = redistribute(a, bdd, &moves, opt.schedule);
    PsmmaResult res = psmma_core(a2, b, opt);
    BlockCyclicLayout chome = a.layout;
    chome.n = b.cols();
    res.c = redistribute(res.c, chome, &moves, opt.schedule);
    res.stats.accumulate(moves);
    return res;
}

PsmmaResult baseline_dense_multiply(const DistMatrix& a, const DistMatrix& b,
                                    Schedule schedule) {
    const BlockCyclicLayout& al = a.layout;
    const BlockCyclicLayout& bl = b.layout;
    const GridShape& g = al.grid;
    if (al.n != bl.m)
        throw std::invalid_argument("baseline: inner dimension mismatch");
    if (bl.grid.p != g.p || bl.grid.q != g.q || bl.nb != al.nb)
        throw std::invalid_argument("baseline: layouts do not conform");
    if (a.col_shift != 0 || b.col_shift != 0)
        throw std::invalid_argument("baseline: tiles are shifted");

    BlockCyclicLayout cl = al;
    cl.n = bl.n;
    PsmmaResult res;
    res.c = DistMatrix::zeros(cl);

    const Eigen::Index kdim = al.n;
    const Eigen::Index nblocks = (kdim + al.nb - 1) / al.nb;

    res.stats = run_grid(
        g,
        [&](Rank& rank) {
            const int pr = rank.row(), pc = rank.col();
            const Eigen::MatrixXd& aloc = a.local[size_t(rank.id())];
            const Eigen::MatrixXd& bloc = b.local[size_t(rank.id())];
            Eigen::MatrixXd cloc =
                Eigen::MatrixXd::Zero(cl.local_rows(pr), cl.local_cols(pc));

            for (Eigen::Index t = 0; t < nblocks; ++t) {
                const Eigen::Index glo = t * al.nb;
                const Eigen::Index width = std::min(al.nb, kdim - glo);
                // A panel travels along the process row.
                const int aoc = al.owner_col(glo);
                Eigen::MatrixXd pa;
                if (pc == aoc) {
                    pa = aloc.middleCols(al.local_col(glo), width);
                    for (int jj = 0; jj < g.q; ++jj) {
                        if (jj == pc) continue;
                        rank.send(g.rank_of(pr, jj),
                                  std::span<const double>(pa.data(), size_t(pa.size())),
                                  PayloadTag::matrix_a);
                    }
                } else {
                    const std::vector<double> buf = rank.recv(g.rank_of(pr, aoc));
                    pa = Eigen::Map<const Eigen::MatrixXd>(
                        buf.data(), cl.local_rows(pr), width);
                }
                // B panel travels along the process column.
                const int bor = bl.owner_row(glo);
                Eigen::MatrixXd pb;
                if (pr == bor) {
                    pb = bloc.middleRows(bl.local_row(glo), width);
                    for (int ii = 0; ii < g.p; ++ii) {
                        if (ii == pr) continue;
                        rank.send(g.rank_of(ii, pc),
                                  std::span<const double>(pb.data(), size_t(pb.size())),
                                  PayloadTag::matrix_b);
                    }
                } else {
                    const std::vector<double> buf = rank.recv(g.rank_of(bor, pc));
                    pb = Eigen::Map<const Eigen::MatrixXd>(buf.data(), width,
                                                           cl.local_cols(pc));
                }
                cloc.noalias() += pa * pb;
                rank.add_flops(2 * cloc.rows() * width * cloc.cols());
            }
            res.c.local[size_t(rank.id())] = std::move(cloc);
        },
        schedule);
    return res;
}

}  // namespace psdc
