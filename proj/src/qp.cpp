#include "mdboost/qp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "mdboost/error.hpp"

namespace mdboost {

RestrictedProblem::RestrictedProblem(ScatterOperator scatter, double budget) : scatter_(scatter), budget_(budget)
{
    if (!(budget > 0.0) || !std::isfinite(budget))
        throw Error("weight budget D must be positive and finite");
}

void RestrictedProblem::add_column(std::span<const double> signed_column)
{
    const std::size_t m = n_examples();
    if (signed_column.size() != m)
        throw Error("column has length " + std::to_string(signed_column.size()) + ", expected " +
                    std::to_string(m));
    for (double v : signed_column)
        if (v != 1.0 && v != -1.0)
            throw Error("restricted problem columns must have entries in {-1, +1}");

    columns_.insert(columns_.end(), signed_column.begin(), signed_column.end());
    const std::size_t n = n_columns_;
    std::vector<double> row(n + 1);
    for (std::size_t j = 0; j < n; ++j) {
        const auto other = column(j);
        row[j] = std::inner_product(signed_column.begin(), signed_column.end(), other.begin(), 0.0);
        gram_[j].push_back(row[j]);
    }
    row[n] = static_cast<double>(m);
    gram_.push_back(std::move(row));
    sums_.push_back(std::accumulate(signed_column.begin(), signed_column.end(), 0.0));
    ++n_columns_;
}

std::optional<std::size_t> RestrictedProblem::find_column(std::span<const double> signed_column) const
{
    if (signed_column.size() != n_examples())
        return std::nullopt;
    for (std::size_t j = 0; j < n_columns_; ++j) {
        const auto c = column(j);
        if (std::equal(c.begin(), c.end(), signed_column.begin()))
            return j;
    }
    return std::nullopt;
}

std::vector<double> RestrictedProblem::margins(std::span<const double> w) const
{
    if (w.size() != n_columns_)
        throw Error("weight vector length does not match the number of columns");
    std::vector<double> rho(n_examples(), 0.0);
    for (std::size_t j = 0; j < n_columns_; ++j) {
        if (w[j] == 0.0)
            continue;
        const auto c = column(j);
        for (std::size_t i = 0; i < rho.size(); ++i)
            rho[i] += w[j] * c[i];
    }
    return rho;
}

std::vector<double> RestrictedProblem::edges(std::span<const double> u) const
{
    if (u.size() != n_examples())
        throw Error("dual vector length does not match the number of examples");
    std::vector<double> out(n_columns_);
    for (std::size_t j = 0; j < n_columns_; ++j) {
        const auto c = column(j);
        out[j] = std::inner_product(c.begin(), c.end(), u.begin(), 0.0);
    }
    return out;
}

std::vector<double> project_simplex(std::span<const double> v, double budget)
{
    if (!(budget > 0.0))
        throw Error("simplex budget must be positive");
    if (v.empty())
        throw Error("cannot project an empty vector");
    std::vector<double> sorted(v.begin(), v.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double running = 0.0;
    double theta = 0.0;
    for (std::size_t j = 0; j < sorted.size(); ++j) {
        running += sorted[j];
        const double candidate = (running - budget) / static_cast<double>(j + 1);
        if (sorted[j] - candidate > 0.0)
            theta = candidate;
    }
    std::vector<double> w(v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
        w[j] = std::max(v[j] - theta, 0.0);
    return w;
}

namespace {

// f(w) = 0.5 w^T Q w + lin^T w with Q = B^T (A + delta I) B
//      = M/(M-1) (G - s s^T / M) + delta G,  lin = -s,
// where G = B^T B and s = B^T 1.
struct ReducedQuadratic {
    std::size_t n;
    std::vector<double> q;
    std::vector<double> lin;

    explicit ReducedQuadratic(const RestrictedProblem& p) : n(p.n_columns()), q(n * n), lin(n)
    {
        const double m = static_cast<double>(p.n_examples());
        const double kappa = m * p.scatter().coupling();
        const double delta = p.scatter().delta();
        for (std::size_t i = 0; i < n; ++i) {
            lin[i] = -p.column_sum(i);
            for (std::size_t j = 0; j < n; ++j) {
                const double g = p.gram(i, j);
                q[i * n + j] = kappa * (g - p.column_sum(i) * p.column_sum(j) / m) + delta * g;
            }
        }
    }

    void gradient(std::span<const double> w, std::vector<double>& g) const
    {
        g.assign(lin.begin(), lin.end());
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = q.data() + i * n;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += row[j] * w[j];
            g[i] += acc;
        }
    }

    double value(std::span<const double> w) const
    {
        double quad = 0.0;
        double linear = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* row = q.data() + i * n;
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += row[j] * w[j];
            quad += w[i] * acc;
            linear += lin[i] * w[i];
        }
        return 0.5 * quad + linear;
    }

    double lipschitz_estimate(std::size_t iterations) const
    {
        // A generic start vector; the all-ones direction can sit in the null
        // space (e.g. a column and its negation).
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i)
            v[i] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(i));
        const double v_norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
        for (double& x : v)
            x /= v_norm;
        std::vector<double> next(n);
        // The largest diagonal entry is a lower bound on the top eigenvalue.
        double lambda = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            lambda = std::max(lambda, q[i * n + i]);
        for (std::size_t it = 0; it < iterations; ++it) {
            for (std::size_t i = 0; i < n; ++i) {
                const double* row = q.data() + i * n;
                next[i] = std::inner_product(row, row + n, v.begin(), 0.0);
            }
            const double norm = std::sqrt(std::inner_product(next.begin(), next.end(), next.begin(), 0.0));
            if (!(norm > 0.0))
                break;
            lambda = std::max(lambda, norm);
            for (std::size_t i = 0; i < n; ++i)
                v[i] = next[i] / norm;
        }
        return lambda;
    }
};

double gradient_mapping_norm(std::span<const double> w, std::span<const double> g, double lipschitz,
                             double budget)
{
    std::vector<double> step(w.size());
    for (std::size_t j = 0; j < w.size(); ++j)
        step[j] = w[j] - g[j] / lipschitz;
    const auto projected = project_simplex(step, budget);
    double sq = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j)
        sq += (w[j] - projected[j]) * (w[j] - projected[j]);
    return lipschitz * std::sqrt(sq);
}

double dot(std::span<const double> a, std::span<const double> b)
{
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Minimizer of f on the affine set {w_F free, 1^T w_F = budget, w_j = 0 off F}
// from the KKT system [Q_FF 1; 1^T 0] [w; nu] = [-lin_F; budget]. The system is
// always consistent (null directions of Q_FF are null directions of B and
// leave f unchanged), so a rank-revealing fallback gives a valid minimizer.
std::vector<double> affine_minimizer(const ReducedQuadratic& f, const std::vector<std::size_t>& free, double budget)
{
    const auto k = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd q(k, k);
    Eigen::VectorXd rhs(k);
    for (Eigen::Index a = 0; a < k; ++a) {
        rhs(a) = -f.lin[free[a]];
        for (Eigen::Index b = 0; b < k; ++b)
            q(a, b) = f.q[free[a] * f.n + free[b]];
    }
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k);
    const double scale = q.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();

    const Eigen::LDLT<Eigen::MatrixXd> ldlt(q);
    if (ldlt.info() == Eigen::Success) {
        const Eigen::VectorXd a = ldlt.solve(ones);
        const Eigen::VectorXd b = ldlt.solve(rhs);
        const double denom = a.sum();
        if (std::isfinite(denom) && std::abs(denom) > 0.0) {
            const double nu = (b.sum() - budget) / denom;
            const Eigen::VectorXd w = b - nu * a;
            const double residual = (q * w + nu * ones - rhs).cwiseAbs().maxCoeff();
            if (w.allFinite() && residual <= 1e-9 * std::max(1.0, scale))
                return {w.data(), w.data() + k};
        }
    }

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
    kkt.topLeftCorner(k, k) = q;
    kkt.topRightCorner(k, 1) = ones;
    kkt.bottomLeftCorner(1, k) = ones.transpose();
    Eigen::VectorXd full(k + 1);
    full.head(k) = rhs;
    full(k) = budget;
    const Eigen::VectorXd sol = kkt.completeOrthogonalDecomposition().solve(full);
    return {sol.data(), sol.data() + k};
}

// Primal active-set method started from a feasible x. Returns nothing if it
// fails to settle within the iteration cap.
std::optional<std::vector<double>> active_set(const ReducedQuadratic& f, std::vector<double> x, double budget,
                                              std::size_t& iterations)
{
    const std::size_t n = f.n;
    std::vector<char> is_free(n);
    for (std::size_t j = 0; j < n; ++j)
        is_free[j] = x[j] > 0.0;
    std::vector<double> g;
    const std::size_t cap = 10 * n + 100;

    for (std::size_t it = 0; it < cap; ++it) {
        ++iterations;
        std::vector<std::size_t> free;
        for (std::size_t j = 0; j < n; ++j)
            if (is_free[j])
                free.push_back(j);
        const auto target = affine_minimizer(f, free, budget);

        double alpha = 1.0;
        std::size_t blocking = n;
        for (std::size_t a = 0; a < free.size(); ++a) {
            const std::size_t j = free[a];
            if (target[a] < 0.0) {
                const double ratio = x[j] / (x[j] - target[a]);
                if (ratio < alpha) {
                    alpha = ratio;
                    blocking = j;
                }
            }
        }
        for (std::size_t a = 0; a < free.size(); ++a)
            x[free[a]] += alpha * (target[a] - x[free[a]]);

        if (blocking < n) {
            x[blocking] = 0.0;
            is_free[blocking] = 0;
            for (std::size_t j : free)
                if (x[j] <= 0.0) {
                    x[j] = 0.0;
                    is_free[j] = 0;
                }
            continue;
        }

        // At the minimizer over the free set: release the bound variable with
        // the most negative multiplier, if any.
        f.gradient(x, g);
        double nu = 0.0;
        double gmax = 0.0;
        for (std::size_t j : free)
            nu -= g[j] / static_cast<double>(free.size());
        for (double v : g)
            gmax = std::max(gmax, std::abs(v));
        std::size_t entering = n;
        double most_negative = -1e-12 * (1.0 + gmax);
        for (std::size_t j = 0; j < n; ++j)
            if (!is_free[j] && g[j] + nu < most_negative) {
                most_negative = g[j] + nu;
                entering = j;
            }
        if (entering == n)
            return x;
        is_free[entering] = 1;
    }
    return std::nullopt;
}

} // namespace

PrimalSolution solve_restricted(const RestrictedProblem& problem, std::optional<std::span<const double>> warm_start,
                                const SolverOptions& options)
{
    const std::size_t n = problem.n_columns();
    if (n == 0)
        throw Error("restricted problem has no columns");
    const double budget = problem.budget();

    std::vector<double> x;
    if (warm_start && !warm_start->empty()) {
        if (warm_start->size() != n && warm_start->size() + 1 != n)
            throw Error("warm start has length " + std::to_string(warm_start->size()) + " for " +
                        std::to_string(n) + " columns");
        x.assign(warm_start->begin(), warm_start->end());
        x.resize(n, 0.0);
        const double total = std::accumulate(x.begin(), x.end(), 0.0);
        if (total > 0.0 && std::all_of(x.begin(), x.end(), [](double v) { return v >= 0.0; }))
            for (double& v : x)
                v *= budget / total;
        x = project_simplex(x, budget);
    } else {
        x.assign(n, budget / static_cast<double>(n));
    }

    const ReducedQuadratic f(problem);
    const std::vector<double> start = x;

    // An exact active-set pass does the bulk of the work; the accelerated
    // gradient loop below only runs if its result misses the tolerance.
    std::size_t iteration = 0;
    if (auto settled = active_set(f, x, budget, iteration); settled && f.value(*settled) <= f.value(x))
        x = std::move(*settled);

    std::vector<double> g;
    f.gradient(x, g);
    double fx = f.value(x);
    double lipschitz = std::max(f.lipschitz_estimate(options.power_iterations) * 1.01, 1e-12);
    double pg = gradient_mapping_norm(x, g, lipschitz, budget);

    std::vector<double> y = x;
    std::vector<double> gy = g;
    std::vector<double> z(n);
    std::vector<double> step(n);
    double t = 1.0;

    while (pg > options.tolerance * std::max(1.0, std::abs(fx)) && iteration < options.max_iterations) {
        ++iteration;
        const double fy = f.value(y);
        // Backtracking: grow L until the quadratic upper bound holds at z.
        for (;;) {
            for (std::size_t j = 0; j < n; ++j)
                step[j] = y[j] - gy[j] / lipschitz;
            z = project_simplex(step, budget);
            double lin = 0.0;
            double sq = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = z[j] - y[j];
                lin += gy[j] * d;
                sq += d * d;
            }
            const double fz = f.value(z);
            if (fz <= fy + lin + 0.5 * lipschitz * sq + 1e-12 * std::max(1.0, std::abs(fy)))
                break;
            lipschitz *= 2.0;
        }
        const double fz = f.value(z);
        if (fz > fx) {
            // A plain projected-gradient step from x cannot increase f, so a
            // failure there means rounding dominates.
            if (t == 1.0)
                break;
            // Non-monotone step: drop the momentum and restart from x.
            t = 1.0;
            y = x;
            gy = g;
            continue;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double momentum = (t - 1.0) / t_next;
        for (std::size_t j = 0; j < n; ++j)
            y[j] = z[j] + momentum * (z[j] - x[j]);
        x = z;
        fx = fz;
        t = t_next;
        f.gradient(x, g);
        f.gradient(y, gy);
        pg = gradient_mapping_norm(x, g, lipschitz, budget);
    }

    PrimalSolution out;
    out.iterations = iteration;
    out.rho.values = problem.margins(x);
    out.objective = primal_objective(problem.scatter(), out.rho.values);
    out.w = std::move(x);
    out.projected_gradient_norm = pg;

    // Never return something worse than the start (keeps column generation
    // monotone even when the start is already optimal).
    const auto start_rho = problem.margins(start);
    const double start_objective = primal_objective(problem.scatter(), start_rho);
    if (start_objective < out.objective) {
        out.w = start;
        out.rho.values = start_rho;
        out.objective = start_objective;
        f.gradient(out.w, g);
        out.projected_gradient_norm = gradient_mapping_norm(out.w, g, lipschitz, budget);
    }
    return out;
}

DualState recover_dual(const RestrictedProblem& problem, const PrimalSolution& primal)
{
    DualState dual;
    const auto scattered = scatter_apply(problem.scatter(), primal.rho.values);
    dual.u.resize(scattered.size());
    for (std::size_t i = 0; i < scattered.size(); ++i)
        dual.u[i] = 1.0 - scattered[i];
    const auto e = problem.edges(dual.u);
    dual.r = *std::max_element(e.begin(), e.end());
    dual.slacks.resize(e.size());
    for (std::size_t j = 0; j < e.size(); ++j)
        dual.slacks[j] = dual.r - e[j];
    return dual;
}

double dual_objective(const RestrictedProblem& problem, const DualState& dual)
{
    std::vector<double> shifted(dual.u.size());
    for (std::size_t i = 0; i < shifted.size(); ++i)
        shifted[i] = dual.u[i] - 1.0;
    const auto solved = scatter_solve(problem.scatter(), shifted);
    return -problem.budget() * dual.r - 0.5 * dot(shifted, solved);
}

} // namespace mdboost
