#ifndef ELW_CONSTRAINTS_HPP
#define ELW_CONSTRAINTS_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "elw/el_solver.hpp"
#include "elw/linalg.hpp"

namespace elw {

using Cdf = std::function<double(double)>;

// Right-continuous step CDF with sorted support; evaluation is a binary
// search, F(x) = cumulative at the last support point <= x (0 below all).
struct StepFunctionCdf {
    Vec support;     // strictly increasing
    Vec cumulative;  // nondecreasing, last entry 1

    double operator()(double x) const;
    static StepFunctionCdf from_values(Vec values);
};

// F(x) = (1/n) sum_j (1[e_j <= x] + 1[-e_j <= x]) / 2, the empirical CDF of
// the multiset {±e_j}; symmetric about zero by construction.
StepFunctionCdf symmetrized_edf(const Vec& residuals);

// H(t) = (1/2n) sum_j (1[x_j <= t] + 1[y_j <= t]).
StepFunctionCdf pooled_edf(const Vec& x, const Vec& y);

// (sin(pi t), ..., sin(m pi t)) for t in [-1,1]; values within 1e-12 of the
// ends are clamped, anything further out throws.
void sine_basis(double t, int m, double* out);
Vec sine_basis(double t, int m);

// (sqrt(2) cos(pi t), ..., sqrt(2) cos(m pi t)) for t in [0,1]; orthonormal
// for the uniform law on [0,1], row norm bounded by sqrt(2m).
void cosine_basis(double t, int m, double* out);
Vec cosine_basis(double t, int m);

// ---- Side-information recipes -------------------------------------------

// Known componentwise medians m0: row j = (1[x_j1 <= m0_1] - 1/2, ...).
struct KnownComponentwiseMedians {
    Vec medians;
};

// c'X symmetric about a known center, marginal CDF F known:
// row j = sine_basis(2 F(e_j) - 1, m) with e_j = c'X_j - center.
struct SymmetryKnownF {
    Vec axis;
    double center = 0.0;
    int m = 1;
    Cdf cdf;
};

// Same information with F replaced by the symmetrized EDF of the e_j.
struct SymmetryEstimatedF {
    Vec axis;
    double center = 0.0;
    int m = 1;
};

// Both marginals of a bivariate sample known: row j is the 2m-vector
// (cosine_basis(F(x_j)), cosine_basis(G(y_j))).
struct KnownMarginals {
    int m = 1;
    Cdf cdf_x;
    Cdf cdf_y;
};

// Marginals equal but unknown: row j = cosine_basis(H(x_j)) -
// cosine_basis(H(y_j)) with H the pooled EDF.
struct EqualMarginalsEstimated {
    int m = 1;
};

using ConstraintRecipe = std::variant<KnownComponentwiseMedians, SymmetryKnownF,
                                      SymmetryEstimatedF, KnownMarginals,
                                      EqualMarginalsEstimated>;

// Number of constraint columns the recipe produces on d-dimensional data.
std::size_t constraint_width(const ConstraintRecipe& recipe, std::size_t d);

ConstraintMatrix median_indicator_constraints(const Mat& points, const Vec& medians);

ConstraintMatrix build_constraints(const Mat& points, const ConstraintRecipe& recipe);

// Advisory growth-rate check: the sieve theory behind known-F recipes wants
// m^4/n small, the estimated-F ones m^6/n. Returns a warning string when the
// configured m is already past that point; never an error.
std::optional<std::string> growth_advisory(const ConstraintRecipe& recipe, std::size_t n);

}  // namespace elw

#endif
