#include "psdc/dist_matrix.hpp"

#include <stdexcept>

namespace psdc {

DistMatrix DistMatrix::zeros(const BlockCyclicLayout& layout) {
    layout.validate();
    DistMatrix dm;
    dm.layout = layout;
    dm.local.resize(size_t(layout.grid.ranks()));
    for (int pr = 0; pr < layout.grid.p; ++pr)
        for (int pc = 0; pc < layout.grid.q; ++pc)
            dm.local[size_t(layout.grid.rank_of(pr, pc))] =
                Eigen::MatrixXd::Zero(layout.local_rows(pr), layout.local_cols(pc));
    return dm;
}

DistMatrix DistMatrix::scatter(const Eigen::MatrixXd& a,
                               const BlockCyclicLayout& layout) {
    if (a.rows() != layout.m || a.cols() != layout.n)
        throw std::invalid_argument("scatter: dimension mismatch");
    DistMatrix dm = zeros(layout);
    for (Eigen::Index gj = 0; gj < layout.n; ++gj) {
        const int pc = layout.owner_col(gj);
        const Eigen::Index lj = layout.local_col(gj);
        for (Eigen::Index gi = 0; gi < layout.m; ++gi) {
            const int r = layout.grid.rank_of(layout.owner_row(gi), pc);
            dm.local[size_t(r)](layout.local_row(gi), lj) = a(gi, gj);
        }
    }
    return dm;
}

int DistMatrix::held_home_col(int pc) const {
    return (pc + col_shift) % layout.grid.q;
}

Eigen::MatrixXd DistMatrix::gather() const {
    Eigen::MatrixXd a(layout.m, layout.n);
    for (int pr = 0; pr < layout.grid.p; ++pr) {
        for (int pc = 0; pc < layout.grid.q; ++pc) {
            const int hc = held_home_col(pc);
            const Eigen::MatrixXd& tile = local[size_t(layout.grid.rank_of(pr, pc))];
            for (Eigen::Index lj = 0; lj < tile.cols(); ++lj) {
                const Eigen::Index gj = layout.global_col(hc, lj);
                for (Eigen::Index li = 0; li < tile.rows(); ++li)
                    a(layout.global_row(pr, li), gj) = tile(li, lj);
            }
        }
    }
    return a;
}

double DistMatrix::at(Eigen::Index gi, Eigen::Index gj) const {
    const int home_col = layout.owner_col(gj);
    const int holder =
        (home_col - col_shift % layout.grid.q + layout.grid.q) % layout.grid.q;
    const int r = layout.grid.rank_of(layout.owner_row(gi), holder);
    return local[size_t(r)](layout.local_row(gi), layout.local_col(gj));
}

void DistMatrix::set(Eigen::Index gi, Eigen::Index gj, double value) {
    const int home_col = layout.owner_col(gj);
    const int holder =
        (home_col - col_shift % layout.grid.q + layout.grid.q) % layout.grid.q;
    const int r = layout.grid.rank_of(layout.owner_row(gi), holder);
    local[size_t(r)](layout.local_row(gi), layout.local_col(gj)) = value;
}

DistMatrix shift_left(const DistMatrix& dm, GridStats* stats,
                      Schedule schedule) {
    const GridShape& g = dm.layout.grid;
    DistMatrix out = dm;
    out.col_shift = (dm.col_shift + 1) % g.q;
    if (g.q == 1) return out;  // single process column: nothing moves

    GridStats run = run_grid(
        g,
        [&](Rank& rank) {
            const int pr = rank.row(), pc = rank.col();
            const Eigen::MatrixXd& tile = dm.local[size_t(rank.id())];
            const int dest = g.rank_of(pr, (pc - 1 + g.q) % g.q);
            rank.send(dest, std::span<const double>(tile.data(), size_t(tile.size())),
                      PayloadTag::matrix_a);
            const int src = g.rank_of(pr, (pc + 1) % g.q);
            const std::vector<double> buf = rank.recv(src);
            const int new_home = out.held_home_col(pc);
            const Eigen::Index rows = dm.layout.local_rows(pr);
            const Eigen::Index cols = dm.layout.local_cols(new_home);
            if (Eigen::Index(buf.size()) != rows * cols)
                throw std::runtime_error("shift_left: tile size mismatch");
            out.local[size_t(rank.id())] =
                Eigen::Map<const Eigen::MatrixXd>(buf.data(), rows, cols);
        },
        schedule);
    if (stats) stats->accumulate(run);
    return out;
}

DistMatrix redistribute(const DistMatrix& dm, const BlockCyclicLayout& target,
                        GridStats* stats, Schedule schedule) {
    if (dm.layout.m != target.m || dm.layout.n != target.n)
        throw std::invalid_argument("redistribute: dimension mismatch");
    if (dm.layout.grid.p != target.grid.p || dm.layout.grid.q != target.grid.q)
        throw std::invalid_argument("redistribute: grid mismatch");
    if (dm.col_shift != 0)
        throw std::invalid_argument("redistribute: matrix tiles are shifted");

    const BlockCyclicLayout& src = dm.layout;
    const GridShape& g = src.grid;
    DistMatrix out = DistMatrix::zeros(target);

    GridStats run = run_grid(
        g,
        [&](Rank& rank) {
            const int me = rank.id();
            const int nranks = g.ranks();
            // Canonical enumeration (column-major over global entries) fixes
            // both the payload order and the placement order.
            std::vector<std::vector<double>> outgoing(size_t(nranks));
            std::vector<std::vector<std::pair<Eigen::Index, Eigen::Index>>> incoming(
                size_t(nranks));
            for (Eigen::Index gj = 0; gj < src.n; ++gj) {
                const int sc = src.owner_col(gj);
                const int tc = target.owner_col(gj);
                for (Eigen::Index gi = 0; gi < src.m; ++gi) {
                    const int s = g.rank_of(src.owner_row(gi), sc);
                    const int t = g.rank_of(target.owner_row(gi), tc);
                    if (s == t) {
                        if (s == me)
                            out.local[size_t(me)](target.local_row(gi),
                                                  target.local_col(gj)) =
                                dm.local[size_t(me)](src.local_row(gi),
                                                     src.local_col(gj));
                        continue;
                    }
                    if (s == me)
                        outgoing[size_t(t)].push_back(dm.local[size_t(me)](
                            src.local_row(gi), src.local_col(gj)));
                    if (t == me)
                        incoming[size_t(s)].emplace_back(target.local_row(gi),
                                                         target.local_col(gj));
                }
            }
            for (int t = 0; t < nranks; ++t)
                if (!outgoing[size_t(t)].empty())
                    rank.send(t, outgoing[size_t(t)], PayloadTag::matrix_a);
            for (int s = 0; s < nranks; ++s) {
                if (incoming[size_t(s)].empty()) continue;
                const std::vector<double> buf = rank.recv(s);
                if (buf.size() != incoming[size_t(s)].size())
                    throw std::runtime_error("redistribute: payload size mismatch");
                for (size_t idx = 0; idx < buf.size(); ++idx) {
                    const auto [li, lj] = incoming[size_t(s)][idx];
                    out.local[size_t(me)](li, lj) = buf[idx];
                }
            }
        },
        schedule);
    if (stats) stats->accumulate(run);
    return out;
}

}  // namespace psdc
