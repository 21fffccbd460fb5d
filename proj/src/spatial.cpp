#include "elw/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace elw {

namespace {

constexpr std::size_t kBlock = 2048;

Vec checked_weights(std::size_t n, const Vec* weights) {
    if (!weights) return Vec(n, 1.0 / static_cast<double>(n));
    if (weights->size() != n)
        throw std::invalid_argument("weights length does not match sample size");
    double sum = 0.0;
    for (double w : *weights) {
        if (!(w > 0.0)) throw std::invalid_argument("weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-8)
        throw std::invalid_argument("weights must sum to one");
    return *weights;
}

// Data spread used to scale anchor detection; zero only for a single point.
double typical_scale(const Mat& points) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i)
        for (std::size_t j = 0; j < points.cols(); ++j)
            s = std::max(s, std::abs(points(i, j)));
    return s > 0.0 ? s : 1.0;
}

}  // namespace

Vec spatial_sign(const Vec& x) {
    const double r = norm2(x);
    Vec s(x.size(), 0.0);
    if (r > 0.0)
        for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] / r;
    return s;
}

Mat sign_hessian(const Vec& x) {
    const std::size_t d = x.size();
    Mat h(d, d, 0.0);
    const double r = norm2(x);
    if (r == 0.0) return h;
    const double r2 = r * r;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            h(i, j) = (i == j ? 1.0 : 0.0) / r - x[i] * x[j] / (r * r2);
    }
    return h;
}

namespace detail {

WeiszfeldPass weiszfeld_pass(const Mat& points, const Vec& weights, const Vec& x,
                             double anchor_radius) {
    const std::size_t n = points.rows(), d = points.cols();
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;

    // Per-block partial sums, laid out [sign_sum(d), shifted_mean(d),
    // inv_sum, anchor_weight, objective, nearest_dist, nearest_index] and
    // combined in block order after the loop; results do not depend on how
    // blocks map to threads. Small inputs skip the parallel region: the
    // simulation harness already parallelizes one level up, and entering a
    // nested team per pass costs more than the pass itself.
    const std::size_t stride = 2 * d + 5;
    std::vector<double> parts(nblocks * stride, 0.0);

    const auto process_block = [&](std::size_t b) {
        double* p = parts.data() + b * stride;
        const std::size_t lo = b * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = lo;
        for (std::size_t i = lo; i < hi; ++i) {
            const double* row = points.row(i);
            double dist2 = 0.0;
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = x[j] - row[j];
                dist2 += diff * diff;
            }
            const double dist = std::sqrt(dist2);
            if (dist < best) {
                best = dist;
                best_i = i;
            }
            const double w = weights[i];
            p[2 * d + 2] += w * dist;
            if (dist <= anchor_radius) {
                p[2 * d + 1] += w;
                continue;
            }
            const double wi = w / dist;
            p[2 * d] += wi;
            for (std::size_t j = 0; j < d; ++j) {
                p[j] += wi * (x[j] - row[j]);
                p[d + j] += wi * row[j];
            }
        }
        p[2 * d + 3] = best;
        p[2 * d + 4] = static_cast<double>(best_i);
    };

#if defined(_OPENMP)
    if (nblocks > 4 && !omp_in_parallel()) {
#pragma omp parallel for schedule(static)
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b)
            process_block(static_cast<std::size_t>(b));
    } else {
        for (std::size_t b = 0; b < nblocks; ++b) process_block(b);
    }
#else
    for (std::size_t b = 0; b < nblocks; ++b) process_block(b);
#endif

    WeiszfeldPass out;
    out.sign_sum.assign(d, 0.0);
    out.shifted_mean.assign(d, 0.0);
    out.nearest_dist = std::numeric_limits<double>::infinity();
    for (std::size_t b = 0; b < nblocks; ++b) {
        const double* p = parts.data() + b * stride;
        for (std::size_t j = 0; j < d; ++j) {
            out.sign_sum[j] += p[j];
            out.shifted_mean[j] += p[d + j];
        }
        out.inv_sum += p[2 * d];
        out.anchor_weight += p[2 * d + 1];
        out.objective += p[2 * d + 2];
        if (p[2 * d + 3] < out.nearest_dist) {
            out.nearest_dist = p[2 * d + 3];
            out.nearest_index = static_cast<std::size_t>(p[2 * d + 4]);
        }
    }
    return out;
}

}  // namespace detail

DepthQuery depth(const Mat& points, const Vec& x, const Vec* weights) {
    if (x.size() != points.cols())
        throw std::invalid_argument("depth: query dimension mismatch");
    const Vec w = checked_weights(points.rows(), weights);
    // Exact coincidence only: S(0) = 0 at a sample point, no radius slack.
    const auto pass = detail::weiszfeld_pass(points, w, x, 0.0);
    DepthQuery q;
    q.point = x;
    q.depth_value = 1.0 - norm2(pass.sign_sum);
    // Guard the tiny negative excursions of floating point accumulation.
    q.depth_value = std::clamp(q.depth_value, 0.0, 1.0);
    return q;
}

namespace {

Vec componentwise_weighted_median(const Mat& points, const Vec& w) {
    const std::size_t n = points.rows(), d = points.cols();
    Vec med(d);
    std::vector<std::size_t> idx(n);
    for (std::size_t j = 0; j < d; ++j) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return points(a, j) < points(b, j);
        });
        double cum = 0.0;
        med[j] = points(idx.back(), j);
        for (std::size_t r = 0; r < n; ++r) {
            cum += w[idx[r]];
            if (cum >= 0.5) {
                med[j] = points(idx[r], j);
                break;
            }
        }
    }
    return med;
}

void check_not_collinear(const Mat& points) {
    const Vec ev = jacobi_eigenvalues(row_covariance(points));
    const double top = ev.back();
    if (!(top > 0.0) || ev[ev.size() - 2] <= 1e-12 * top)
        throw std::invalid_argument(
            "weighted_spatial_median: degenerate sample (points collinear)");
}

}  // namespace

SpatialResult weighted_spatial_median(const Mat& points, const Vec* weights,
                                      const MedianConfig& cfg) {
    const std::size_t n = points.rows(), d = points.cols();
    if (d < 2) throw std::invalid_argument("weighted_spatial_median: need d >= 2");
    if (n < 2) throw std::invalid_argument("weighted_spatial_median: need n >= 2");
    check_not_collinear(points);
    const Vec w = checked_weights(n, weights);

    const double anchor_radius = 1e-13 * typical_scale(points);

    SpatialResult res;
    res.median = componentwise_weighted_median(points, w);

    for (int iter = 0; iter <= cfg.max_iter; ++iter) {
        const auto pass = detail::weiszfeld_pass(points, w, res.median, anchor_radius);
        if (cfg.record_objective) res.objective_trace.push_back(pass.objective);
        const double pull = norm2(pass.sign_sum);
        res.iterations = iter;

        if (pass.anchor_weight > 0.0) {
            // Iterate sits on a data point; stationary iff its own mass
            // dominates the pull of the others.
            res.gradient_norm = std::max(0.0, pull - pass.anchor_weight);
            if (res.gradient_norm <= cfg.tol) {
                res.converged = true;
                break;
            }
            if (iter == cfg.max_iter) break;
            Vec t(d);
            for (std::size_t j = 0; j < d; ++j) t[j] = pass.shifted_mean[j] / pass.inv_sum;
            const double lam = std::min(1.0, pass.anchor_weight / pull);
            for (std::size_t j = 0; j < d; ++j)
                res.median[j] = (1.0 - lam) * t[j] + lam * res.median[j];
        } else {
            res.gradient_norm = pull;
            if (pull <= cfg.tol) {
                res.converged = true;
                break;
            }
            if (iter == cfg.max_iter) break;
            // The plain iteration crawls when the optimum lies at or near a
            // sample point (that point's 1/distance weight blows up). Two
            // exact escapes: the subgradient condition at the nearest
            // vertex, and a Newton step on the smooth objective, accepted
            // only when it actually decreases the objective.
            if (pull <= 1e3 * cfg.tol || (iter + 1) % 64 == 0) {
                Vec cand(d);
                for (std::size_t j = 0; j < d; ++j) cand[j] = points(pass.nearest_index, j);
                const auto vp = detail::weiszfeld_pass(points, w, cand, anchor_radius);
                const double vpull = norm2(vp.sign_sum);
                if (vpull <= vp.anchor_weight + cfg.tol &&
                    vp.objective <= pass.objective * (1.0 + 1e-15)) {
                    res.median = cand;
                    res.iterations = iter + 1;
                    res.gradient_norm = std::max(0.0, vpull - vp.anchor_weight);
                    res.converged = true;
                    if (cfg.record_objective) res.objective_trace.push_back(vp.objective);
                    break;
                }
            }
            bool stepped = false;
            if (pull <= 1e-2) {
                Mat hess(d, d, 0.0);
                Vec diff(d);
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < d; ++j) diff[j] = res.median[j] - points(i, j);
                    const double dist = norm2(diff);
                    if (dist <= anchor_radius) continue;
                    const double h = w[i] / dist;
                    for (std::size_t a = 0; a < d; ++a) {
                        hess(a, a) += h;
                        for (std::size_t b = 0; b < d; ++b)
                            hess(a, b) -= h * diff[a] * diff[b] / (dist * dist);
                    }
                }
                Vec rhs(d);
                for (std::size_t j = 0; j < d; ++j) rhs[j] = -pass.sign_sum[j];
                if (const auto delta = cholesky_solve(hess, rhs)) {
                    Vec cand(d);
                    for (std::size_t j = 0; j < d; ++j) cand[j] = res.median[j] + (*delta)[j];
                    const auto np = detail::weiszfeld_pass(points, w, cand, anchor_radius);
                    if (np.objective <= pass.objective) {
                        res.median = cand;
                        stepped = true;
                    }
                }
            }
            if (!stepped)
                for (std::size_t j = 0; j < d; ++j)
                    res.median[j] = pass.shifted_mean[j] / pass.inv_sum;
        }
    }

    // Plug-in curvature and sign second moment at the fitted point, with the
    // S(0) = 0 / H(0) = 0 convention for coincident points.
    res.j_hat = Mat(d, d, 0.0);
    res.k_hat = Mat(d, d, 0.0);
    Vec diff(d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) diff[j] = res.median[j] - points(i, j);
        const double dist = norm2(diff);
        if (dist <= anchor_radius) continue;
        const double s2 = w[i] / (dist * dist);
        add_outer(res.j_hat, diff.data(), diff.data(), s2);
        const double h2 = w[i] / dist;
        for (std::size_t a = 0; a < d; ++a) {
            res.k_hat(a, a) += h2;
            for (std::size_t b = 0; b < d; ++b)
                res.k_hat(a, b) -= h2 * diff[a] * diff[b] / (dist * dist);
        }
    }
    return res;
}

SpatialResult el_weighted_median_pipeline(const Mat& points, const ConstraintRecipe& recipe,
                                          const SolverConfig& solver_cfg,
                                          const MedianConfig& median_cfg) {
    const ConstraintMatrix u = build_constraints(points, recipe);
    const ELSolution el = solve_dual(u, solver_cfg);
    if (!el.converged)
        throw std::runtime_error(std::string("el_weighted_median_pipeline: dual solve ") +
                                 to_string(el.status));
    return weighted_spatial_median(points, &el.pi, median_cfg);
}

}  // namespace elw
