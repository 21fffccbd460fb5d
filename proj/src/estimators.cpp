#include "elw/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace elw {

FunctionalSpec psi_identity(std::size_t d) {
    FunctionalSpec s;
    s.r = d;
    s.description = "identity";
    s.psi = [](const double* z, std::size_t dim, double* out) {
        for (std::size_t j = 0; j < dim; ++j) out[j] = z[j];
    };
    return s;
}

FunctionalSpec psi_coordinate_sum() {
    FunctionalSpec s;
    s.r = 1;
    s.description = "x+y";
    s.psi = [](const double* z, std::size_t, double* out) { out[0] = z[0] + z[1]; };
    return s;
}

FunctionalSpec psi_coordinate_difference() {
    FunctionalSpec s;
    s.r = 1;
    s.description = "x-y";
    s.psi = [](const double* z, std::size_t, double* out) { out[0] = z[0] - z[1]; };
    return s;
}

FunctionalSpec psi_rectangle(double sx, double sy) {
    FunctionalSpec s;
    s.r = 1;
    s.description = "1[x<=" + std::to_string(sx) + ", y<=" + std::to_string(sy) + "]";
    s.psi = [sx, sy](const double* z, std::size_t, double* out) {
        out[0] = (z[0] <= sx && z[1] <= sy) ? 1.0 : 0.0;
    };
    return s;
}

EstimateReport el_estimate(const Mat& points, const FunctionalSpec& spec,
                           const ConstraintRecipe& recipe, const SolverConfig& cfg) {
    if (!spec.psi) throw std::invalid_argument("el_estimate: missing psi");
    if (spec.r < 1) throw std::invalid_argument("el_estimate: r >= 1");
    const std::size_t n = points.rows(), d = points.cols(), r = spec.r;

    const ConstraintMatrix u = build_constraints(points, recipe);
    const ELSolution el = solve_dual(u, cfg);
    if (!el.converged)
        throw std::runtime_error(std::string("el_estimate: dual solve ") +
                                 to_string(el.status));

    EstimateReport rep;
    rep.zeta = el.zeta;
    rep.m_used = u.m();
    rep.theta_plain.assign(r, 0.0);
    rep.theta_el.assign(r, 0.0);
    Vec val(r);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        spec.psi(points.row(i), d, val.data());
        for (std::size_t k = 0; k < r; ++k) {
            if (!std::isfinite(val[k]))
                throw std::domain_error("el_estimate: psi returned a non-finite value");
            rep.theta_plain[k] += inv_n * val[k];
            rep.theta_el[k] += el.pi[i] * val[k];
        }
    }
    return rep;
}

EstimateReport known_marginals_estimate(const Mat& xy, const FunctionalSpec& spec, int m,
                                        Cdf f, Cdf g, const SolverConfig& cfg) {
    KnownMarginals recipe;
    recipe.m = m;
    recipe.cdf_x = std::move(f);
    recipe.cdf_y = std::move(g);
    return el_estimate(xy, spec, ConstraintRecipe{recipe}, cfg);
}

EstimateReport equal_marginals_estimate(const Mat& xy, const FunctionalSpec& spec, int m,
                                        const SolverConfig& cfg) {
    EqualMarginalsEstimated recipe;
    recipe.m = m;
    return el_estimate(xy, spec, ConstraintRecipe{recipe}, cfg);
}

}  // namespace elw
