#include "elw/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace elw {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.4142135623730950488;
}  // namespace

double StepFunctionCdf::operator()(double x) const {
    // Index of first support point > x; everything before it has jumped.
    const auto it = std::upper_bound(support.begin(), support.end(), x);
    if (it == support.begin()) return 0.0;
    return cumulative[static_cast<std::size_t>(it - support.begin()) - 1];
}

StepFunctionCdf StepFunctionCdf::from_values(Vec values) {
    if (values.empty()) throw std::invalid_argument("StepFunctionCdf: empty sample");
    std::sort(values.begin(), values.end());
    const double total = static_cast<double>(values.size());
    StepFunctionCdf f;
    std::size_t i = 0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        f.support.push_back(values[i]);
        f.cumulative.push_back(static_cast<double>(j) / total);
        i = j;
    }
    f.cumulative.back() = 1.0;
    return f;
}

StepFunctionCdf symmetrized_edf(const Vec& residuals) {
    if (residuals.empty()) throw std::invalid_argument("symmetrized_edf: empty sample");
    Vec doubled;
    doubled.reserve(2 * residuals.size());
    for (double e : residuals) {
        doubled.push_back(e);
        doubled.push_back(-e);
    }
    return StepFunctionCdf::from_values(std::move(doubled));
}

StepFunctionCdf pooled_edf(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("pooled_edf: unequal lengths");
    if (x.empty()) throw std::invalid_argument("pooled_edf: empty sample");
    Vec pooled;
    pooled.reserve(x.size() + y.size());
    pooled.insert(pooled.end(), x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    return StepFunctionCdf::from_values(std::move(pooled));
}

namespace {

double clamp_or_throw(double t, double lo, double hi, const char* what) {
    if (t < lo - 1e-12 || t > hi + 1e-12) throw std::domain_error(what);
    return std::clamp(t, lo, hi);
}

}  // namespace

void sine_basis(double t, int m, double* out) {
    if (m < 1) throw std::invalid_argument("sine_basis: m >= 1");
    t = clamp_or_throw(t, -1.0, 1.0, "sine_basis: t outside [-1,1]");
    for (int k = 1; k <= m; ++k) out[k - 1] = std::sin(k * kPi * t);
}

Vec sine_basis(double t, int m) {
    Vec out(static_cast<std::size_t>(m));
    sine_basis(t, m, out.data());
    return out;
}

void cosine_basis(double t, int m, double* out) {
    if (m < 1) throw std::invalid_argument("cosine_basis: m >= 1");
    t = clamp_or_throw(t, 0.0, 1.0, "cosine_basis: t outside [0,1]");
    for (int k = 1; k <= m; ++k) out[k - 1] = kSqrt2 * std::cos(k * kPi * t);
}

Vec cosine_basis(double t, int m) {
    Vec out(static_cast<std::size_t>(m));
    cosine_basis(t, m, out.data());
    return out;
}

ConstraintMatrix median_indicator_constraints(const Mat& points, const Vec& medians) {
    const std::size_t n = points.rows(), d = points.cols();
    if (medians.size() != d)
        throw std::invalid_argument("median_indicator_constraints: medians length != dim");
    Mat u(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            u(i, j) = (points(i, j) <= medians[j] ? 1.0 : 0.0) - 0.5;
    return ConstraintMatrix(std::move(u));
}

namespace {

Vec axis_residuals(const Mat& points, const Vec& axis, double center) {
    const std::size_t n = points.rows(), d = points.cols();
    if (axis.size() != d)
        throw std::invalid_argument("build_constraints: axis length != dim");
    if (norm2(axis) == 0.0) throw std::invalid_argument("build_constraints: zero axis");
    Vec eps(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += axis[j] * points(i, j);
        eps[i] = s - center;
    }
    return eps;
}

ConstraintMatrix symmetry_rows(const Vec& eps, int m, const std::function<double(double)>& g) {
    Mat u(eps.size(), static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < eps.size(); ++i) sine_basis(g(eps[i]), m, u.row(i));
    return ConstraintMatrix(std::move(u));
}

}  // namespace

ConstraintMatrix build_constraints(const Mat& points, const ConstraintRecipe& recipe) {
    const std::size_t n = points.rows(), d = points.cols();
    return std::visit(
        [&](const auto& r) -> ConstraintMatrix {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, KnownComponentwiseMedians>) {
                return median_indicator_constraints(points, r.medians);
            } else if constexpr (std::is_same_v<T, SymmetryKnownF>) {
                if (!r.cdf) throw std::invalid_argument("SymmetryKnownF: missing cdf");
                const Vec eps = axis_residuals(points, r.axis, r.center);
                return symmetry_rows(eps, r.m,
                                     [&](double e) { return 2.0 * r.cdf(e) - 1.0; });
            } else if constexpr (std::is_same_v<T, SymmetryEstimatedF>) {
                const Vec eps = axis_residuals(points, r.axis, r.center);
                const StepFunctionCdf f = symmetrized_edf(eps);
                // Keep the plug-in transform off the endpoints of [-1,1] by
                // half an EDF jump.
                const double cap = 1.0 - 1.0 / (2.0 * static_cast<double>(n));
                return symmetry_rows(eps, r.m, [&](double e) {
                    return std::clamp(2.0 * f(e) - 1.0, -cap, cap);
                });
            } else if constexpr (std::is_same_v<T, KnownMarginals>) {
                if (d != 2)
                    throw std::invalid_argument("KnownMarginals: needs paired (x,y) data");
                if (!r.cdf_x || !r.cdf_y)
                    throw std::invalid_argument("KnownMarginals: missing cdf");
                Mat u(n, 2 * static_cast<std::size_t>(r.m));
                for (std::size_t i = 0; i < n; ++i) {
                    const double fx = std::clamp(r.cdf_x(points(i, 0)), 0.0, 1.0);
                    const double gy = std::clamp(r.cdf_y(points(i, 1)), 0.0, 1.0);
                    cosine_basis(fx, r.m, u.row(i));
                    cosine_basis(gy, r.m, u.row(i) + r.m);
                }
                return ConstraintMatrix(std::move(u));
            } else {
                static_assert(std::is_same_v<T, EqualMarginalsEstimated>);
                if (d != 2)
                    throw std::invalid_argument(
                        "EqualMarginalsEstimated: needs paired (x,y) data");
                Vec xs(n), ys(n);
                for (std::size_t i = 0; i < n; ++i) {
                    xs[i] = points(i, 0);
                    ys[i] = points(i, 1);
                }
                const StepFunctionCdf h = pooled_edf(xs, ys);
                const double lo = 1.0 / (4.0 * static_cast<double>(n));
                const double hi = 1.0 - lo;
                Mat u(n, static_cast<std::size_t>(r.m));
                Vec bx(static_cast<std::size_t>(r.m)), by(static_cast<std::size_t>(r.m));
                for (std::size_t i = 0; i < n; ++i) {
                    cosine_basis(std::clamp(h(xs[i]), lo, hi), r.m, bx.data());
                    cosine_basis(std::clamp(h(ys[i]), lo, hi), r.m, by.data());
                    for (int k = 0; k < r.m; ++k) u(i, k) = bx[k] - by[k];
                }
                return ConstraintMatrix(std::move(u));
            }
        },
        recipe);
}

std::size_t constraint_width(const ConstraintRecipe& recipe, std::size_t d) {
    return std::visit(
        [&](const auto& r) -> std::size_t {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, KnownComponentwiseMedians>) return d;
            else if constexpr (std::is_same_v<T, KnownMarginals>)
                return 2 * static_cast<std::size_t>(r.m);
            else
                return static_cast<std::size_t>(r.m);
        },
        recipe);
}

std::optional<std::string> growth_advisory(const ConstraintRecipe& recipe, std::size_t n) {
    const double nd = static_cast<double>(n);
    return std::visit(
        [&](const auto& r) -> std::optional<std::string> {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, SymmetryKnownF> ||
                          std::is_same_v<T, KnownMarginals>) {
                const double m = static_cast<double>(r.m);
                if (m * m * m * m > nd)
                    return "constraint count m=" + std::to_string(r.m) +
                           " has m^4 > n=" + std::to_string(n) +
                           "; asymptotic guidance wants m^4/n small";
            } else if constexpr (std::is_same_v<T, SymmetryEstimatedF> ||
                                 std::is_same_v<T, EqualMarginalsEstimated>) {
                const double m = static_cast<double>(r.m);
                if (m * m * m * m * m * m > nd)
                    return "constraint count m=" + std::to_string(r.m) +
                           " has m^6 > n=" + std::to_string(n) +
                           "; asymptotic guidance wants m^6/n small";
            }
            return std::nullopt;
        },
        recipe);
}

}  // namespace elw
