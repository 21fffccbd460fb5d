#include "elw/el_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elw {

ConstraintMatrix::ConstraintMatrix(Mat values) : u(std::move(values)) {
    if (u.cols() < 1) throw std::invalid_argument("ConstraintMatrix: need m >= 1");
    if (u.rows() < u.cols() + 1)
        throw std::invalid_argument("ConstraintMatrix: need n >= m+1");
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < u.cols(); ++j)
            if (!std::isfinite(u(i, j)))
                throw std::invalid_argument("ConstraintMatrix: non-finite entry");
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::HullViolation: return "hull-violation";
        case SolveStatus::SingularConstraints: return "singular-constraints";
        case SolveStatus::NonConvergence: return "non-convergence";
    }
    return "unknown";
}

namespace {

// 1 + zeta'u_j for all rows; false when any is <= 0.
bool log_terms(const Mat& u, const Vec& zeta, Vec& t) {
    const std::size_t n = u.rows(), m = u.cols();
    t.resize(n);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double* r = u.row(i);
        double s = 1.0;
        for (std::size_t k = 0; k < m; ++k) s += r[k] * zeta[k];
        t[i] = s;
        ok = ok && (s > 0.0);
    }
    return ok;
}

double neg_log_sum(const Vec& t) {
    double f = 0.0;
    for (double v : t) f -= std::log(v);
    return f;
}

}  // namespace

double dual_objective(const ConstraintMatrix& u, const Vec& zeta) {
    if (zeta.size() != u.m()) throw std::invalid_argument("dual_objective: zeta size");
    Vec t;
    if (!log_terms(u.u, zeta, t))
        throw std::domain_error("dual_objective: 1 + zeta'u <= 0 at some observation");
    return neg_log_sum(t);
}

Vec dual_gradient(const ConstraintMatrix& u, const Vec& zeta) {
    if (zeta.size() != u.m()) throw std::invalid_argument("dual_gradient: zeta size");
    Vec t;
    if (!log_terms(u.u, zeta, t))
        throw std::domain_error("dual_gradient: 1 + zeta'u <= 0 at some observation");
    Vec g(u.m(), 0.0);
    for (std::size_t i = 0; i < u.n(); ++i) {
        const double* r = u.u.row(i);
        const double w = 1.0 / t[i];
        for (std::size_t k = 0; k < u.m(); ++k) g[k] -= r[k] * w;
    }
    return g;
}

Vec weights_from_zeta(const ConstraintMatrix& u, const Vec& zeta) {
    if (zeta.size() != u.m()) throw std::invalid_argument("weights_from_zeta: zeta size");
    Vec t;
    if (!log_terms(u.u, zeta, t))
        throw std::domain_error("weights_from_zeta: 1 + zeta'u <= 0 at some observation");
    const double n = static_cast<double>(u.n());
    Vec pi(u.n());
    for (std::size_t i = 0; i < u.n(); ++i) pi[i] = 1.0 / (n * t[i]);
    return pi;
}

ELSolution solve_dual(const ConstraintMatrix& cm, const SolverConfig& cfg) {
    if (!(cfg.tolerance > 0.0)) throw std::invalid_argument("solve_dual: tolerance must be > 0");
    if (cfg.max_iterations < 1) throw std::invalid_argument("solve_dual: max_iterations >= 1");
    if (!(cfg.line_search_shrink > 0.0 && cfg.line_search_shrink < 1.0))
        throw std::invalid_argument("solve_dual: line_search_shrink in (0,1)");

    const Mat& u = cm.u;
    const std::size_t n = cm.n(), m = cm.m();
    const double nd = static_cast<double>(n);

    ELSolution sol;
    sol.zeta.assign(m, 0.0);
    sol.pi.assign(n, 1.0 / nd);

    // Rank check on the constraint covariance; a flat direction means the
    // dual has no unique stationary point.
    {
        const Vec ev = jacobi_eigenvalues(row_covariance(u));
        if (!(ev.back() > 0.0) || ev.front() <= 1e-12 * ev.back()) {
            sol.status = SolveStatus::SingularConstraints;
            return sol;
        }
    }

    const double floor = 1.0 / (nd * nd);
    Vec zeta(m, 0.0), t, t_new, residual(m), step, trial(m);
    log_terms(u, zeta, t);
    double obj = 0.0;  // objective at zeta = 0

    for (int iter = 0; iter <= cfg.max_iterations; ++iter) {
        // Residual of the estimating equation (= minus the dual gradient).
        std::fill(residual.begin(), residual.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* r = u.row(i);
            const double w = 1.0 / t[i];
            for (std::size_t k = 0; k < m; ++k) residual[k] += r[k] * w;
        }
        const double rnorm = norm2(residual);

        // A genuine stationary point also forces sum(pi) = 1; the product
        // zeta'residual measures the gap n*(1 - sum pi). Checking it rejects
        // the false convergence of diverging iterates whose residual decays.
        if (rnorm <= nd * cfg.tolerance &&
            std::abs(dot(zeta, residual)) <= nd * 1e-12 + rnorm * 1e-6) {
            sol.zeta = zeta;
            sol.iterations = iter;
            sol.residual_norm = rnorm;
            for (std::size_t i = 0; i < n; ++i) sol.pi[i] = 1.0 / (nd * t[i]);
            sol.converged = true;
            sol.status = SolveStatus::Converged;
            return sol;
        }
        if (iter == cfg.max_iterations) break;

        // Newton direction on the convex dual: H = sum u u' / t^2.
        Mat hess(m, m, 0.0);
        Vec scaled(m);
        for (std::size_t i = 0; i < n; ++i) {
            const double* r = u.row(i);
            const double w = 1.0 / (t[i] * t[i]);
            for (std::size_t k = 0; k < m; ++k) scaled[k] = r[k];
            add_outer(hess, scaled.data(), scaled.data(), w);
        }
        auto solved = cholesky_solve(hess, residual);
        if (!solved) {
            // Ridge fallback for nearly flat curvature far from the optimum.
            double tr = 0.0;
            for (std::size_t k = 0; k < m; ++k) tr += hess(k, k);
            for (std::size_t k = 0; k < m; ++k) hess(k, k) += 1e-12 * (tr + 1.0);
            solved = cholesky_solve(hess, residual);
            if (!solved) {
                sol.status = SolveStatus::SingularConstraints;
                sol.zeta = zeta;
                sol.iterations = iter;
                sol.residual_norm = rnorm;
                return sol;
            }
        }
        step = *solved;

        // Backtracking: keep every log term at or above the floor and ask
        // for Armijo decrease (directional derivative is -residual'step).
        // Once the predicted decrease sinks below the rounding noise of an
        // n-term log sum, objective comparisons carry no information, so
        // acceptance falls back to contraction of the residual norm.
        const double slope = -dot(residual, step);
        double alpha = 1.0;
        bool accepted = false;
        while (alpha >= 1e-14) {
            for (std::size_t k = 0; k < m; ++k) trial[k] = zeta[k] + alpha * step[k];
            if (log_terms(u, trial, t_new)) {
                double lo = t_new[0];
                for (double v : t_new) lo = std::min(lo, v);
                if (lo >= floor) {
                    const double obj_new = neg_log_sum(t_new);
                    bool ok = obj_new <= obj + 1e-4 * alpha * slope;
                    if (!ok && -slope <= 1e-12 * (std::abs(obj) + 1.0)) {
                        Vec r_new(m, 0.0);
                        for (std::size_t i = 0; i < n; ++i) {
                            const double* r = u.row(i);
                            const double w = 1.0 / t_new[i];
                            for (std::size_t k = 0; k < m; ++k) r_new[k] += r[k] * w;
                        }
                        ok = norm2(r_new) <= 0.9 * rnorm;
                    }
                    if (ok) {
                        zeta = trial;
                        t.swap(t_new);
                        obj = obj_new;
                        accepted = true;
                        break;
                    }
                }
            }
            alpha *= cfg.line_search_shrink;
        }
        if (!accepted) {
            sol.status = SolveStatus::HullViolation;
            sol.zeta = zeta;
            sol.iterations = iter;
            sol.residual_norm = rnorm;
            return sol;
        }
        // Diverging iterates: the dual is unbounded below when zero lies
        // outside the hull, so the minimizing sequence runs off to infinity.
        if (norm2(zeta) > 1e12 || obj < -50.0 * nd) {
            sol.status = SolveStatus::HullViolation;
            sol.zeta = zeta;
            sol.iterations = iter;
            sol.residual_norm = rnorm;
            return sol;
        }
    }

    sol.status = SolveStatus::NonConvergence;
    sol.zeta = zeta;
    sol.iterations = cfg.max_iterations;
    sol.residual_norm = norm2(residual);
    return sol;
}

}  // namespace elw
