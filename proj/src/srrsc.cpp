#include "psdc/srrsc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace psdc {

namespace {

// Running product that cannot overflow or underflow: the mantissa is kept in
// [0.5, 2) and the exponent is tracked separately.
struct ScaledProduct {
    double mantissa = 1.0;
    long exponent = 0;

    void mul(double x) {
        int e = 0;
        const double m = std::frexp(x, &e);
        mantissa *= m;
        exponent += e;
        int e2 = 0;
        mantissa = std::frexp(mantissa, &e2);
        exponent += e2;
    }
    void div(double x) {
        int e = 0;
        const double m = std::frexp(x, &e);
        mantissa /= m;
        exponent -= e;
        int e2 = 0;
        mantissa = std::frexp(mantissa, &e2);
        exponent += e2;
    }
    double value() const { return std::ldexp(mantissa, int(exponent)); }
};

// Indices of the (up to) `take` largest |values[pos]| for pos in [from, size).
void top_abs(const Eigen::VectorXd& values, Eigen::Index from, int take,
             std::vector<Eigen::Index>& out) {
    out.clear();
    for (Eigen::Index p = from; p < values.size(); ++p) {
        const double a = std::abs(values[p]);
        auto it = out.begin();
        while (it != out.end() && std::abs(values[*it]) >= a) ++it;
        if (it != out.end() || Eigen::Index(out.size()) < take)
            out.insert(it, p);
        if (Eigen::Index(out.size()) > take) out.pop_back();
    }
}

}  // namespace

SchurState SchurState::init(const CauchyLike& c) {
    SchurState s;
    s.row_pos.resize(size_t(c.rows()));
    s.col_pos.resize(size_t(c.cols()));
    s.u.resize(c.rows());
    s.v.resize(c.cols());
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        s.row_pos[size_t(i)] = i;
        s.u[i] = c.u(i);
    }
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        s.col_pos[size_t(j)] = j;
        s.v[j] = c.v(j);
    }
    return s;
}

std::pair<Eigen::Index, Eigen::Index> pivot_select(const SchurState& s,
                                                   const CauchyLike& c) {
    constexpr int kShortlist = 8;
    std::vector<Eigen::Index> rows, cols;
    top_abs(s.u, s.k, kShortlist, rows);
    top_abs(s.v, s.k, kShortlist, cols);
    double best = -1.0;
    std::pair<Eigen::Index, Eigen::Index> pick{s.k, s.k};
    for (const Eigen::Index i : rows) {
        for (const Eigen::Index j : cols) {
            const double diff =
                c.cross_diff(s.row_pos[size_t(i)], s.col_pos[size_t(j)]);
            if (diff == 0.0) continue;
            const double mag = std::abs(s.u[i] * s.v[j] / diff);
            if (mag > best) {
                best = mag;
                pick = {i, j};
            }
        }
    }
    return pick;
}

void apply_pivot(SchurState& s, Eigen::Index prow, Eigen::Index pcol) {
    if (prow < s.k || pcol < s.k)
        throw std::invalid_argument("apply_pivot: pivot inside eliminated block");
    std::swap(s.row_pos[size_t(s.k)], s.row_pos[size_t(prow)]);
    std::swap(s.u[s.k], s.u[prow]);
    std::swap(s.col_pos[size_t(s.k)], s.col_pos[size_t(pcol)]);
    std::swap(s.v[s.k], s.v[pcol]);
}

double schur_entry(const SchurState& s, const CauchyLike& c, Eigen::Index i,
                   Eigen::Index j) {
    const Eigen::Index pi = s.k + i, pj = s.k + j;
    const double diff =
        c.cross_diff(s.row_pos[size_t(pi)], s.col_pos[size_t(pj)]);
    return s.u[pi] * s.v[pj] / diff;
}

double pivot_magnitude(const SchurState& s, const CauchyLike& c) {
    return std::abs(schur_entry(s, c, 0, 0));
}

void schur_step(SchurState& s, const CauchyLike& c) {
    const Eigen::Index m = c.rows(), n = c.cols();
    const Eigen::Index k = s.k;
    if (k >= std::min(m, n))
        throw std::invalid_argument("schur_step: elimination exhausted");
    const Eigen::Index rk = s.row_pos[size_t(k)];
    const Eigen::Index ck = s.col_pos[size_t(k)];

    if (c.cross_diff(rk, ck) == 0.0)
        throw std::runtime_error("schur_step: pole at the pivot (d_k == w_k)");

    // u^{(k)}(t) = u^{(k-1)}(t) * (d_t - d_k) / (d_t - w_k)
    for (Eigen::Index t = k + 1; t < m; ++t) {
        const Eigen::Index rt = s.row_pos[size_t(t)];
        const double den = c.cross_diff(rt, ck);
        if (den == 0.0)
            throw std::runtime_error("schur_step: coincident nodes d_t == w_k");
        s.u[t] *= c.row_node_diff(rt, rk) / den;
    }
    // v^{(k)}(t) = v^{(k-1)}(t) * (w_t - w_k) / (w_t - d_k)
    for (Eigen::Index t = k + 1; t < n; ++t) {
        const Eigen::Index ct = s.col_pos[size_t(t)];
        const double den = -c.cross_diff(rk, ct);
        if (den == 0.0)
            throw std::runtime_error("schur_step: coincident nodes w_t == d_k");
        s.v[t] *= c.col_node_diff(ct, ck) / den;
    }
    // y^{(k)}(i) = y^{(k-1)}(i) * (d_k - w_i) / (w_k - w_i) for i < k,
    // and the new entry from the closed product, accumulated in scaled form.
    for (Eigen::Index i = 0; i < k; ++i) {
        const Eigen::Index ci = s.col_pos[size_t(i)];
        const double den = c.col_node_diff(ck, ci);
        if (den == 0.0)
            throw std::runtime_error("schur_step: duplicate column nodes");
        s.y[i] *= c.cross_diff(rk, ci) / den;
    }
    ScaledProduct prod;
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index cj = s.col_pos[size_t(j)];
        const Eigen::Index rj = s.row_pos[size_t(j)];
        prod.mul(-c.cross_diff(rj, ck));   // w_k - d_j
        const double den = c.col_node_diff(ck, cj);
        if (den == 0.0)
            throw std::runtime_error("schur_step: duplicate column nodes");
        prod.div(den);
    }
    prod.mul(c.cross_diff(rk, ck));
    prod.div(c.v(ck));
    s.y.conservativeResize(k + 1);
    s.y[k] = prod.value();

    s.k = k + 1;
}

Eigen::Index default_max_rank(Eigen::Index m, Eigen::Index n) {
    const Eigen::Index mn = std::min(m, n);
    return std::min(mn, Eigen::Index(0.4 * double(mn)) + 64);
}

LowRankFactor srrsc_compress(const CauchyLike& c, const SrrscOptions& opt) {
    if (!(opt.tol >= 0.0))
        throw std::invalid_argument("srrsc_compress: tol must be nonnegative");
    const Eigen::Index m = c.rows(), n = c.cols();
    const Eigen::Index mn = std::min(m, n);
    const Eigen::Index max_rank =
        opt.max_rank < 0 ? default_max_rank(m, n) : std::min(opt.max_rank, mn);

    SchurState s = SchurState::init(c);
    LowRankFactor f;
    double first = 0.0;
    std::int64_t flops = 0;
    while (true) {
        if (s.k == mn) break;  // exact factorization
        const auto [pr, pc] = pivot_select(s, c);
        apply_pivot(s, pr, pc);
        const double mag = pivot_magnitude(s, c);
        flops += 3 * 64 + (m - s.k) + (n - s.k);
        if (s.k == 0) first = mag;
        if (mag <= opt.tol * first) break;
        if (s.k == max_rank) {
            f.truncated = true;
            break;
        }
        schur_step(s, c);
        flops += 4 * (m - s.k) + 4 * (n - s.k) + 6 * s.k;
    }

    f.rank = s.k;
    f.cols.assign(s.col_pos.begin(), s.col_pos.begin() + s.k);
    f.col_perm = s.col_pos;
    f.y = s.y.head(s.k);
    f.v_tail = s.v.tail(n - s.k);
    f.flops = flops;
    return f;
}

Eigen::MatrixXd LowRankFactor::z_dense(const CauchyLike& c) const {
    const Eigen::Index n = c.cols();
    Eigen::MatrixXd z(rank, n - rank);
    for (Eigen::Index j = 0; j < n - rank; ++j) {
        for (Eigen::Index i = 0; i < rank; ++i) {
            const double den =
                c.col_node_diff(col_perm[size_t(i)], col_perm[size_t(rank + j)]);
            z(i, j) = y[i] * v_tail[j] / den;
        }
    }
    return z;
}

Eigen::MatrixXd LowRankFactor::reconstruct(const CauchyLike& c) const {
    const Eigen::Index m = c.rows(), n = c.cols();
    Eigen::MatrixXd acols(m, rank);
    for (Eigen::Index j = 0; j < rank; ++j)
        for (Eigen::Index i = 0; i < m; ++i) acols(i, j) = c.entry(i, cols[size_t(j)]);
    Eigen::MatrixXd out(m, n);
    for (Eigen::Index p = 0; p < rank; ++p)
        out.col(col_perm[size_t(p)]) = acols.col(p);
    if (rank < n) {
        const Eigen::MatrixXd tail = acols * z_dense(c);
        for (Eigen::Index p = rank; p < n; ++p)
            out.col(col_perm[size_t(p)]) = tail.col(p - rank);
    }
    return out;
}

Eigen::MatrixXd apply_factor(const Eigen::MatrixXd& a, const LowRankFactor& f,
                             const CauchyLike& c) {
    if (a.cols() != c.rows())
        throw std::invalid_argument("apply_factor: inner dimension mismatch");
    const Eigen::Index n = c.cols();
    Eigen::MatrixXd out(a.rows(), n);
    if (f.rank == 0) {
        out.setZero();
        return out;
    }
    Eigen::MatrixXd bcols(c.rows(), f.rank);
    for (Eigen::Index j = 0; j < f.rank; ++j)
        for (Eigen::Index i = 0; i < c.rows(); ++i)
            bcols(i, j) = c.entry(i, f.cols[size_t(j)]);
    const Eigen::MatrixXd y1 = a * bcols;
    for (Eigen::Index p = 0; p < f.rank; ++p)
        out.col(f.col_perm[size_t(p)]) = y1.col(p);
    if (f.rank < n) {
        const Eigen::MatrixXd y2 = y1 * f.z_dense(c);
        for (Eigen::Index p = f.rank; p < n; ++p)
            out.col(f.col_perm[size_t(p)]) = y2.col(p - f.rank);
    }
    return out;
}

}  // namespace psdc
