#include <doctest.h>

#include <cmath>

#include "elw/distributions.hpp"
#include "elw/spatial.hpp"
#include "oracles.hpp"

using namespace elw;

TEST_SUITE_BEGIN("spatial");

namespace {

Mat sample_points(std::uint64_t seed, std::size_t n, int dim) {
    DistributionSpec spec;
    spec.kind = DistKind::T3;
    spec.dim = dim;
    spec.seed = seed;
    return draw_sample(spec, n).data;
}

}  // namespace

TEST_CASE("spatial sign basics") {
    const Vec s = spatial_sign({3.0, 4.0});
    CHECK(s[0] == doctest::Approx(0.6));
    CHECK(s[1] == doctest::Approx(0.8));
    CHECK(spatial_sign({0.0, 0.0}) == Vec{0.0, 0.0});
    Rng gen(1);
    for (int i = 0; i < 20; ++i) {
        Vec x{gen.normal(), gen.normal(), gen.normal()};
        CHECK(norm2(spatial_sign(x)) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sign hessian: closed form, annihilation, finite differences") {
    const Mat h = sign_hessian({1.0, 0.0});
    CHECK(h(0, 0) == doctest::Approx(0.0));
    CHECK(h(0, 1) == doctest::Approx(0.0));
    CHECK(h(1, 1) == doctest::Approx(1.0));

    Rng gen(77);
    for (int rep = 0; rep < 20; ++rep) {
        Vec x{gen.normal(), gen.normal(), gen.normal()};
        const Mat hx = sign_hessian(x);
        // H(x) x = 0 and symmetry.
        const Vec hxx = mat_vec(hx, x);
        CHECK(norm2(hxx) < 1e-12);
        CHECK(asymmetry(hx) < 1e-14);
        // Central differences of the sign field.
        const double step = 1e-6 * norm2(x);
        for (std::size_t a = 0; a < 3; ++a) {
            Vec xp = x, xm = x;
            xp[a] += step;
            xm[a] -= step;
            const Vec sp = spatial_sign(xp), sm = spatial_sign(xm);
            for (std::size_t b = 0; b < 3; ++b) {
                const double fd = (sp[b] - sm[b]) / (2.0 * step);
                CHECK(hx(b, a) == doctest::Approx(fd).epsilon(1e-5));
            }
        }
    }
}

TEST_CASE("depth at the center of a symmetric cross is one") {
    Mat pts(4, 2);
    pts(0, 0) = 1; pts(0, 1) = 0;
    pts(1, 0) = -1; pts(1, 1) = 0;
    pts(2, 0) = 0; pts(2, 1) = 1;
    pts(3, 0) = 0; pts(3, 1) = -1;
    CHECK(depth(pts, {0.0, 0.0}).depth_value == doctest::Approx(1.0));
    // Far outside, all signs align and depth collapses.
    CHECK(depth(pts, {1e6, 2e6}).depth_value < 0.01);
}

TEST_CASE("depth of a single point sample") {
    Mat pts(1, 2);
    pts(0, 0) = 0.5;
    pts(0, 1) = -0.25;
    CHECK(depth(pts, {1.0, 1.0}).depth_value == doctest::Approx(0.0));
    // At the sample point itself the S(0) = 0 convention gives full depth.
    CHECK(depth(pts, {0.5, -0.25}).depth_value == doctest::Approx(1.0));
}

TEST_CASE("depth stays within [0,1] and rejects bad weights") {
    const Mat pts = sample_points(3, 40, 2);
    Rng gen(9);
    for (int rep = 0; rep < 50; ++rep) {
        Vec x{4.0 * gen.normal(), 4.0 * gen.normal()};
        const double v = depth(pts, x).depth_value;
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    Vec bad(40, 1.0 / 39.0);  // does not sum to one
    CHECK_THROWS_AS(depth(pts, {0.0, 0.0}, &bad), std::invalid_argument);
    Vec neg(40, 1.0 / 40.0);
    neg[0] = -neg[0];
    CHECK_THROWS_AS(depth(pts, {0.0, 0.0}, &neg), std::invalid_argument);
}

TEST_CASE("unit square median is its center") {
    Mat pts(4, 2);
    pts(0, 0) = 0; pts(0, 1) = 0;
    pts(1, 0) = 1; pts(1, 1) = 0;
    pts(2, 0) = 0; pts(2, 1) = 1;
    pts(3, 0) = 1; pts(3, 1) = 1;
    const SpatialResult r = weighted_spatial_median(pts);
    REQUIRE(r.converged);
    CHECK(r.median[0] == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(r.median[1] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("triangle medians match the grid oracle") {
    Mat pts(3, 2);
    pts(0, 0) = 0; pts(0, 1) = 0;
    pts(1, 0) = 1; pts(1, 1) = 0;
    pts(2, 0) = 0; pts(2, 1) = 1;

    SUBCASE("uniform weights: the Fermat point") {
        const SpatialResult r = weighted_spatial_median(pts);
        REQUIRE(r.converged);
        const Vec ref = oracles::grid_fermat_weber_2d(pts, Vec(3, 1.0 / 3.0));
        CHECK(std::abs(r.median[0] - ref[0]) < 1e-2);
        CHECK(std::abs(r.median[1] - ref[1]) < 1e-2);
    }

    SUBCASE("dominant weight pins the median to the heavy point") {
        const Vec w{0.98, 0.01, 0.01};
        const SpatialResult r = weighted_spatial_median(pts, &w);
        REQUIRE(r.converged);
        CHECK(std::hypot(r.median[0] - pts(0, 0), r.median[1] - pts(0, 1)) < 0.05);
        const Vec ref = oracles::grid_fermat_weber_2d(pts, w);
        CHECK(std::abs(r.median[0] - ref[0]) < 1e-2);
        CHECK(std::abs(r.median[1] - ref[1]) < 1e-2);
    }
}

TEST_CASE("random weighted problems agree with the grid oracle") {
    Rng gen(555);
    for (int rep = 0; rep < 5; ++rep) {
        const Mat pts = sample_points(100 + rep, 12, 2);
        Vec w(12);
        double sum = 0.0;
        for (auto& v : w) {
            v = 0.05 + gen.uniform_open();
            sum += v;
        }
        for (auto& v : w) v /= sum;
        const SpatialResult r = weighted_spatial_median(pts, &w);
        REQUIRE(r.converged);
        const Vec ref = oracles::grid_fermat_weber_2d(pts, w);
        CHECK(std::abs(r.median[0] - ref[0]) < 1e-2);
        CHECK(std::abs(r.median[1] - ref[1]) < 1e-2);
    }
}

TEST_CASE("weiszfeld objective never increases") {
    Rng gen(303);
    MedianConfig cfg;
    cfg.record_objective = true;
    for (int rep = 0; rep < 100; ++rep) {
        const Mat pts = sample_points(1000 + rep, 30, 2);
        Vec w(30);
        double sum = 0.0;
        for (auto& v : w) {
            v = 0.1 + gen.uniform_open();
            sum += v;
        }
        for (auto& v : w) v /= sum;
        const SpatialResult r = weighted_spatial_median(pts, &w, cfg);
        REQUIRE(r.converged);
        for (std::size_t i = 1; i < r.objective_trace.size(); ++i)
            CHECK(r.objective_trace[i] <= r.objective_trace[i - 1] + 1e-12);
    }
}

TEST_CASE("translation and rotation equivariance") {
    const Mat pts = sample_points(42, 60, 2);
    const SpatialResult base = weighted_spatial_median(pts);
    REQUIRE(base.converged);

    SUBCASE("translation is exact") {
        const Vec shift{3.25, -1.5};
        Mat moved(60, 2);
        for (int i = 0; i < 60; ++i)
            for (int j = 0; j < 2; ++j) moved(i, j) = pts(i, j) + shift[j];
        const SpatialResult r = weighted_spatial_median(moved);
        REQUIRE(r.converged);
        // Same iteration path, shifted data: bit-for-bit agreement is too
        // strong under fp addition, but 1e-12 of slack is not.
        CHECK(r.median[0] == doctest::Approx(base.median[0] + shift[0]).epsilon(1e-12));
        CHECK(r.median[1] == doctest::Approx(base.median[1] + shift[1]).epsilon(1e-12));
    }

    SUBCASE("rotation to 1e-8") {
        const double c = std::cos(0.7), s = std::sin(0.7);
        Mat rot(60, 2);
        for (int i = 0; i < 60; ++i) {
            rot(i, 0) = c * pts(i, 0) - s * pts(i, 1);
            rot(i, 1) = s * pts(i, 0) + c * pts(i, 1);
        }
        const SpatialResult r = weighted_spatial_median(rot);
        REQUIRE(r.converged);
        CHECK(r.median[0] ==
              doctest::Approx(c * base.median[0] - s * base.median[1]).epsilon(1e-8));
        CHECK(r.median[1] ==
              doctest::Approx(s * base.median[0] + c * base.median[1]).epsilon(1e-8));
    }
}

TEST_CASE("explicit uniform weights reproduce the default bit-for-bit") {
    const Mat pts = sample_points(7, 45, 3);
    const Vec uniform(45, 1.0 / 45.0);
    const SpatialResult a = weighted_spatial_median(pts);
    const SpatialResult b = weighted_spatial_median(pts, &uniform);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(a.iterations == b.iterations);
    for (int j = 0; j < 3; ++j) CHECK(a.median[j] == b.median[j]);
}

TEST_CASE("plug-in matrices are symmetric with controlled spectra") {
    const Mat pts = sample_points(11, 80, 3);
    const SpatialResult r = weighted_spatial_median(pts);
    REQUIRE(r.converged);
    CHECK(asymmetry(r.j_hat) <= 1e-12);
    CHECK(asymmetry(r.k_hat) <= 1e-12);
    const Vec ev = jacobi_eigenvalues(r.j_hat);
    CHECK(ev.front() >= -1e-12);
    CHECK(ev.back() <= 1.0 + 1e-12);
    double trace = 0.0;
    for (int j = 0; j < 3; ++j) trace += r.j_hat(j, j);
    CHECK(trace <= 1.0 + 1e-12);
    const Vec evk = jacobi_eigenvalues(r.k_hat);
    CHECK(evk.front() >= -1e-12);
}

TEST_CASE("collinear samples are rejected") {
    Mat pts(5, 2);
    for (int i = 0; i < 5; ++i) {
        pts(i, 0) = i;
        pts(i, 1) = 2.0 * i + 1.0;
    }
    CHECK_THROWS_AS(weighted_spatial_median(pts), std::invalid_argument);
}

TEST_CASE("pipeline with balanced constraints reduces to the plain median") {
    const Mat pts = sample_points(21, 4, 2);
    Mat sym(8, 2);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) {
            sym(i, j) = pts(i, j);
            sym(4 + i, j) = -pts(i, j);
        }
    KnownComponentwiseMedians recipe;
    recipe.medians = {0.0, 0.0};
    const SpatialResult el = el_weighted_median_pipeline(sym, ConstraintRecipe{recipe});
    const SpatialResult plain = weighted_spatial_median(sym);
    REQUIRE(el.converged);
    for (int j = 0; j < 2; ++j) CHECK(el.median[j] == plain.median[j]);
}

TEST_CASE("EL-weighted median balances the weighted signs") {
    DistributionSpec spec;
    spec.kind = DistKind::Cauchy;
    spec.dim = 2;
    spec.seed = 2002;
    const Sample s = draw_sample(spec, 500);
    KnownComponentwiseMedians recipe;
    recipe.medians = {0.0, 0.0};
    const ConstraintMatrix u = build_constraints(s.data, ConstraintRecipe{recipe});
    const ELSolution el = solve_dual(u);
    REQUIRE(el.converged);
    MedianConfig cfg;
    cfg.tol = 1e-9;
    const SpatialResult r = weighted_spatial_median(s.data, &el.pi, cfg);
    REQUIRE(r.converged);
    // Fixed-point identity at the fitted median.
    Vec pull(2, 0.0);
    for (std::size_t i = 0; i < s.n(); ++i) {
        Vec diff{r.median[0] - s.data(i, 0), r.median[1] - s.data(i, 1)};
        const Vec sg = spatial_sign(diff);
        pull[0] += el.pi[i] * sg[0];
        pull[1] += el.pi[i] * sg[1];
    }
    CHECK(norm2(pull) <= 1e-8);
    // Statistical sanity: with informative constraints at the true center
    // the weighted median lands near the origin.
    CHECK(norm2(r.median) < 0.2);
}

TEST_SUITE_END();
