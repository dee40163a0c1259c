#include "psdc/secular.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace psdc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double gap_diff(const Eigen::VectorXd& d, const Eigen::VectorXd& gamma,
                const Eigen::VectorXd& mu, Eigen::Index i, Eigen::Index j) {
    if (i < 0 || j < 0 || i >= d.size() || j >= d.size())
        throw std::invalid_argument("stable_diff: index out of range");
    if (i <= j) return (d[i] - d[j]) - gamma[j];
    return (d[i] - d[j + 1]) + mu[j];
}

struct RootResult {
    double tau = 0.0;       // offset from the origin pole
    Eigen::Index origin = 0;
    double gamma = 0.0;
    double mu = 0.0;
    double vnorm = 0.0;
};

// Secular function in shifted coordinates: with offsets o_k = d_k - d_origin
// fixed, evaluates w(tau) = 1/rho + sum z_k^2 / (o_k - tau) together with its
// derivative and the magnitude sum used in the convergence estimate.
struct FEval {
    double w = 0.0;
    double dw = 0.0;
    double abs_sum = 0.0;
};

FEval eval_secular(const Eigen::VectorXd& offsets, const Eigen::VectorXd& z,
                   double rhoinv, double tau) {
    FEval r;
    r.w = rhoinv;
    r.abs_sum = std::abs(rhoinv);
    for (Eigen::Index k = 0; k < offsets.size(); ++k) {
        const double delta = offsets[k] - tau;
        const double t = z[k] * z[k] / delta;
        r.w += t;
        r.dw += t / delta;
        r.abs_sum += std::abs(t);
    }
    return r;
}

// One root of the secular equation for rho > 0, after LAPACK dlaed4: the
// iterate is kept as an offset from the nearest pole, steps come from a
// rational model with the exact weight at that pole, and a sign bracket
// guards every step.
RootResult solve_one_root(const Eigen::VectorXd& d, const Eigen::VectorXd& z,
                          double rho, Eigen::Index j) {
    const Eigen::Index k = d.size();
    const double rhoinv = 1.0 / rho;
    RootResult res;

    if (k == 1) {
        res.origin = 0;
        res.tau = rho * z[0] * z[0];
        res.gamma = res.tau;
        res.mu = 0.0;  // upper bound coincides with the root
        res.vnorm = std::abs(res.gamma) / std::abs(z[0]);
        return res;
    }

    const bool last = (j == k - 1);
    const double znorm2 = z.squaredNorm();
    // Width of the bracketing interval (d_j, d_{j+1}) or (d_K, d_K+rho|z|^2).
    const double gap = last ? rho * znorm2 : d[j + 1] - d[j];

    // Decide which pole to anchor to by the sign of f at the midpoint.
    Eigen::Index origin;
    {
        Eigen::VectorXd off_mid(k);
        for (Eigen::Index i = 0; i < k; ++i) off_mid[i] = d[i] - d[j];
        const FEval fm = eval_secular(off_mid, z, rhoinv, gap / 2.0);
        if (last)
            origin = k - 1;
        else
            origin = (fm.w >= 0.0) ? j : j + 1;
    }

    Eigen::VectorXd offsets(k);
    for (Eigen::Index i = 0; i < k; ++i) offsets[i] = d[i] - d[origin];

    // Bracket in tau with f(lo) < 0 < f(hi); pole ends are handled implicitly.
    double lo, hi;
    if (last) {
        lo = 0.0;
        hi = gap;
    } else if (origin == j) {
        lo = 0.0;
        hi = gap / 2.0;
    } else {
        lo = -gap / 2.0;
        hi = 0.0;
    }

    double tau = (lo + hi) / 2.0;
    FEval f = eval_secular(offsets, z, rhoinv, tau);

    // Indices of the model poles: the origin carries its exact weight.
    const Eigen::Index near = origin;
    const Eigen::Index other = last ? k - 2 : (origin == j ? j + 1 : j);

    const int max_iter = 100;
    for (int it = 0; it < max_iter; ++it) {
        const double tol_w = 8.0 * kEps * f.abs_sum;
        if (std::abs(f.w) <= tol_w) break;
        if (f.w >= 0.0)
            hi = tau;
        else
            lo = tau;
        if (hi - lo <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi))) break;

        const double dn = offsets[near] - tau;
        const double doth = offsets[other] - tau;
        double c = f.w - doth * f.dw -
                   (d[near] - d[other]) * (z[near] / dn) * (z[near] / dn);
        double a = (dn + doth) * f.w - dn * doth * f.dw;
        double b = dn * doth * f.w;
        double eta;
        if (c == 0.0) {
            if (a == 0.0)
                a = z[near] * z[near] + doth * doth * f.dw;
            eta = b / a;
        } else if (a <= 0.0) {
            eta = (a - std::sqrt(std::abs(a * a - 4.0 * b * c))) / (2.0 * c);
        } else {
            eta = 2.0 * b / (a + std::sqrt(std::abs(a * a - 4.0 * b * c)));
        }
        // f is increasing, so the step must oppose the sign of w.
        if (eta * f.w >= 0.0) eta = -f.w / f.dw;

        double next = tau + eta;
        if (!(next > lo && next < hi)) next = (lo + hi) / 2.0;
        if (next == tau) break;
        tau = next;
        f = eval_secular(offsets, z, rhoinv, tau);
    }

    res.tau = tau;
    res.origin = origin;
    if (last) {
        res.gamma = tau;
        res.mu = gap - tau;
    } else if (origin == j) {
        res.gamma = tau;
        res.mu = gap - tau;
    } else {
        res.gamma = gap + tau;
        res.mu = -tau;
    }
    res.vnorm = 1.0 / std::sqrt(f.dw);
    return res;
}

}  // namespace

double deflation_tolerance(const RankOneProblem& p) {
    const double dmax = p.d.size() ? p.d.cwiseAbs().maxCoeff() : 0.0;
    return 8.0 * kEps * std::max(dmax, std::abs(p.rho));
}

DeflationOutcome deflate(const RankOneProblem& p, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("deflate: tol must be positive");
    const Eigen::Index n = p.d.size();
    if (p.z.size() != n) throw std::invalid_argument("deflate: size mismatch");
    for (Eigen::Index i = 0; i + 1 < n; ++i)
        if (p.d[i] > p.d[i + 1])
            throw std::invalid_argument("deflate: d must be sorted ascending");

    Eigen::VectorXd d = p.d;
    Eigen::VectorXd z = p.z;
    std::vector<bool> alive(size_t(n), true);
    DeflationOutcome out;

    // Negligible weights settle an eigenpair outright.
    const double abs_rho = std::abs(p.rho);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (abs_rho * std::abs(z[i]) <= tol) {
            alive[size_t(i)] = false;
            z[i] = 0.0;
        }
    }

    // Near-equal pole pairs: rotate the pair so one weight vanishes, drop the
    // off-diagonal |t*c*s| <= tol the rotation creates, and deflate that entry.
    Eigen::Index prev = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!alive[size_t(i)]) continue;
        if (prev < 0) {
            prev = i;
            continue;
        }
        const double t = d[i] - d[prev];
        const double tau = std::hypot(z[prev], z[i]);
        const double c = z[prev] / tau;
        const double s = z[i] / tau;
        if (std::abs(t * c * s) <= tol) {
            out.rotations.push_back(GivensRecord{prev, i, c, s});
            z[prev] = tau;
            z[i] = 0.0;
            const double dp = d[prev];
            d[prev] = c * c * dp + s * s * d[i];
            d[i] = s * s * dp + c * c * d[i];
            alive[size_t(i)] = false;
        } else {
            prev = i;
        }
    }

    out.perm.reserve(size_t(n));
    for (Eigen::Index i = 0; i < n; ++i)
        if (alive[size_t(i)]) out.perm.push_back(i);
    out.kept = Eigen::Index(out.perm.size());
    for (Eigen::Index i = 0; i < n; ++i)
        if (!alive[size_t(i)]) out.perm.push_back(i);

    out.dbar.resize(out.kept);
    out.zbar.resize(out.kept);
    out.deflated_values.resize(n - out.kept);
    for (Eigen::Index i = 0; i < out.kept; ++i) {
        out.dbar[i] = d[out.perm[size_t(i)]];
        out.zbar[i] = z[out.perm[size_t(i)]];
    }
    for (Eigen::Index i = out.kept; i < n; ++i)
        out.deflated_values[i - out.kept] = d[out.perm[size_t(i)]];
    return out;
}

SecularSolution solve_secular(const Eigen::VectorXd& dbar,
                              const Eigen::VectorXd& zbar, double rho) {
    const Eigen::Index k = dbar.size();
    if (zbar.size() != k)
        throw std::invalid_argument("solve_secular: size mismatch");
    if (!(rho > 0.0))
        throw std::invalid_argument("solve_secular: rho must be positive");
    for (Eigen::Index i = 0; i + 1 < k; ++i)
        if (!(dbar[i] < dbar[i + 1]))
            throw std::invalid_argument("solve_secular: d must be strictly ascending");
    for (Eigen::Index i = 0; i < k; ++i)
        if (zbar[i] == 0.0)
            throw std::invalid_argument("solve_secular: zero weight; deflate first");

    SecularSolution sol;
    sol.d = dbar;
    sol.rho = rho;
    sol.lam.resize(k);
    sol.gamma.resize(k);
    sol.mu.resize(k);
    sol.vnorm.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        const RootResult r = solve_one_root(dbar, zbar, rho, j);
        sol.lam[j] = dbar[r.origin] + r.tau;
        sol.gamma[j] = r.gamma;
        sol.mu[j] = r.mu;
        sol.vnorm[j] = r.vnorm;
    }
    return sol;
}

double stable_diff(const SecularSolution& sol, Eigen::Index i, Eigen::Index j) {
    return gap_diff(sol.d, sol.gamma, sol.mu, i, j);
}

double QhatGenerators::stable_diff(Eigen::Index i, Eigen::Index j) const {
    return gap_diff(d, gamma, mu, i, j);
}

double QhatGenerators::entry(Eigen::Index i, Eigen::Index j) const {
    return u[i] * v[j] / stable_diff(i, j);
}

Eigen::MatrixXd QhatGenerators::dense() const {
    const Eigen::Index k = size();
    Eigen::MatrixXd q(k, k);
    for (Eigen::Index j = 0; j < k; ++j)
        for (Eigen::Index i = 0; i < k; ++i) q(i, j) = entry(i, j);
    return q;
}

QhatGenerators qhat_generators(const SecularSolution& sol,
                               const Eigen::VectorXd& zbar) {
    const Eigen::Index k = sol.size();
    if (zbar.size() != k)
        throw std::invalid_argument("qhat_generators: size mismatch");

    QhatGenerators g;
    g.d = sol.d;
    g.gamma = sol.gamma;
    g.mu = sol.mu;
    g.u.resize(k);
    g.v.resize(k);

    // Weights recomputed from the computed roots (Loewner's formula); the
    // computed roots are then the exact eigenvalues of D + u u^T, which is
    // what makes the reconstructed eigenvectors orthogonal.
    for (Eigen::Index i = 0; i < k; ++i) {
        double val = sol.gamma[i];
        for (Eigen::Index j = 0; j < k; ++j) {
            if (j == i) continue;
            val *= stable_diff(sol, i, j) / (sol.d[i] - sol.d[j]);
        }
        g.u[i] = std::copysign(std::sqrt(std::abs(val)), zbar[i]);
    }
    for (Eigen::Index j = 0; j < k; ++j) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < k; ++i) {
            const double diff = stable_diff(sol, i, j);
            const double t = g.u[i] / diff;
            sum += t * t;
        }
        g.v[j] = 1.0 / std::sqrt(sum);
    }
    return g;
}

}  // namespace psdc
