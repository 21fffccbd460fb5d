#include "elw/mc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace elw {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::MedianIndicators: return "medians";
        case Regime::SymmetryKnownF: return "sym-known";
        case Regime::SymmetryEstimatedF: return "sym-est";
    }
    return "unknown";
}

Regime regime_from_string(const std::string& name) {
    if (name == "medians") return Regime::MedianIndicators;
    if (name == "sym-known") return Regime::SymmetryKnownF;
    if (name == "sym-est") return Regime::SymmetryEstimatedF;
    throw std::invalid_argument("unknown regime: " + name);
}

void SimConfig::validate() const {
    dist.validate();
    if (reps < 2) throw std::invalid_argument("SimConfig: reps >= 2");
    if (m < 1) throw std::invalid_argument("SimConfig: m >= 1");
    if (n < 2 * static_cast<std::size_t>(m) + 2)
        throw std::invalid_argument("SimConfig: need n >= 2m + 2");
}

double max_eigenvalue(const Mat& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("max_eigenvalue: not square");
    double scale = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) scale = std::max(scale, std::abs(a(i, j)));
    if (asymmetry(a) > 1e-10 * std::max(1.0, scale))
        throw std::invalid_argument("max_eigenvalue: input not symmetric");
    return jacobi_eigenvalues(a).back();
}

std::uint64_t cell_seed(std::uint64_t master_seed, const DistributionSpec& dist,
                        std::size_t n, int m, Regime regime) {
    std::uint64_t h = master_seed;
    auto absorb = [&h](std::uint64_t v) {
        h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        h = splitmix64_next(h);
    };
    absorb(static_cast<std::uint64_t>(dist.kind));
    absorb(static_cast<std::uint64_t>(dist.dim));
    absorb(static_cast<std::uint64_t>(n));
    absorb(static_cast<std::uint64_t>(m));
    absorb(static_cast<std::uint64_t>(regime));
    return h;
}

namespace {

ConstraintRecipe cell_recipe(const SimConfig& cfg) {
    const std::size_t d = static_cast<std::size_t>(cfg.dist.dim);
    switch (cfg.regime) {
        case Regime::MedianIndicators: {
            KnownComponentwiseMedians r;
            r.medians.assign(d, 0.0);
            return r;
        }
        case Regime::SymmetryKnownF: {
            SymmetryKnownF r;
            r.axis.assign(d, 0.0);
            r.axis[0] = 1.0;
            r.center = 0.0;
            r.m = cfg.m;
            r.cdf = marginal_cdf(cfg.dist, 0);
            return r;
        }
        case Regime::SymmetryEstimatedF: {
            SymmetryEstimatedF r;
            r.axis.assign(d, 0.0);
            r.axis[0] = 1.0;
            r.center = 0.0;
            r.m = cfg.m;
            return r;
        }
    }
    throw std::logic_error("cell_recipe: unreachable");
}

}  // namespace

CellRow run_cell(const SimConfig& cfg) {
    cfg.validate();
    const std::size_t d = static_cast<std::size_t>(cfg.dist.dim);
    const int reps = cfg.reps;
    const ConstraintRecipe recipe = cell_recipe(cfg);

    // Per-rep results, indexed by repetition so aggregation order is fixed.
    Mat plain(static_cast<std::size_t>(reps), d);
    Mat weighted(static_cast<std::size_t>(reps), d);
    std::vector<char> ok(static_cast<std::size_t>(reps), 0);

#if defined(_OPENMP)
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
#endif
    for (int k = 0; k < reps; ++k) {
        Rng gen(cfg.master_seed, static_cast<std::uint64_t>(k));
        const Sample s = draw_sample(cfg.dist, cfg.n, gen);

        ConstraintMatrix u = build_constraints(s.data, recipe);
        const ELSolution el = solve_dual(u, cfg.solver);
        if (!el.converged) continue;

        const SpatialResult m0 = weighted_spatial_median(s.data, nullptr, cfg.median);
        const SpatialResult m1 = weighted_spatial_median(s.data, &el.pi, cfg.median);
        if (!m0.converged || !m1.converged) continue;

        for (std::size_t j = 0; j < d; ++j) {
            plain(static_cast<std::size_t>(k), j) = m0.median[j];
            weighted(static_cast<std::size_t>(k), j) = m1.median[j];
        }
        ok[static_cast<std::size_t>(k)] = 1;
    }

    int used = 0;
    for (char c : ok) used += c;
    CellRow row;
    row.distribution = to_string(cfg.dist.kind);
    row.dim = cfg.dist.dim;
    row.n = cfg.n;
    row.m = cfg.regime == Regime::MedianIndicators ? cfg.dist.dim : cfg.m;
    row.regime = to_string(cfg.regime);
    row.seed = cfg.master_seed;
    row.reps_used = used;
    row.failures = reps - used;
    row.valid = row.failures <= 0.05 * reps;
    if (used < 2) {
        row.valid = false;
        return row;
    }

    Mat plain_ok(static_cast<std::size_t>(used), d);
    Mat weighted_ok(static_cast<std::size_t>(used), d);
    std::size_t w = 0;
    for (int k = 0; k < reps; ++k) {
        if (!ok[static_cast<std::size_t>(k)]) continue;
        for (std::size_t j = 0; j < d; ++j) {
            plain_ok(w, j) = plain(static_cast<std::size_t>(k), j);
            weighted_ok(w, j) = weighted(static_cast<std::size_t>(k), j);
        }
        ++w;
    }
    row.lambda = max_eigenvalue(row_covariance(plain_ok));
    row.lambda_tilde = max_eigenvalue(row_covariance(weighted_ok));
    row.ratio = row.lambda > 0.0 ? row.lambda_tilde / row.lambda : 0.0;
    return row;
}

namespace {

DistributionSpec table_dist(DistKind kind, int dim) {
    DistributionSpec d;
    d.kind = kind;
    d.dim = dim;
    return d;
}

std::vector<std::size_t> grid_n(const TableOptions& opt) {
    if (!opt.n_values.empty()) return opt.n_values;
    return {50, 100, 200, 500};
}

std::vector<int> grid_m(const TableOptions& opt) {
    if (!opt.m_values.empty()) return opt.m_values;
    return {1, 3, 5};
}

CellRow run_grid_cell(const TableOptions& opt, const DistributionSpec& dist, std::size_t n,
                      int m, Regime regime) {
    SimConfig cfg;
    cfg.dist = dist;
    cfg.n = n;
    cfg.m = m;
    cfg.regime = regime;
    cfg.reps = opt.full ? 2000 : opt.reps;
    cfg.parallel = opt.parallel;
    cfg.master_seed = cell_seed(opt.master_seed, dist, n, m, regime);
    return run_cell(cfg);
}

}  // namespace

SimReport run_table(int table_id, const TableOptions& opt) {
    SimReport report;
    report.master_seed = opt.master_seed;
    if (table_id < 1 || table_id > 5)
        throw std::invalid_argument("run_table: table id must be 1..5");

    if (table_id == 1) {
        for (DistKind kind :
             {DistKind::Cauchy, DistKind::T3, DistKind::Copula2d, DistKind::AsymLaplace}) {
            for (int dim : {2, 3}) {
                DistKind k = kind;
                if (kind == DistKind::Copula2d && dim == 3) k = DistKind::Copula3d;
                for (std::size_t n : grid_n(opt)) {
                    report.rows.push_back(run_grid_cell(opt, table_dist(k, dim), n,
                                                        /*m=*/dim,
                                                        Regime::MedianIndicators));
                }
            }
        }
        return report;
    }

    static const DistKind kTableDist[4] = {DistKind::Cauchy, DistKind::T3,
                                           DistKind::Copula3d, DistKind::AsymLaplace};
    const DistributionSpec dist = table_dist(kTableDist[table_id - 2], 3);
    for (Regime regime : {Regime::SymmetryKnownF, Regime::SymmetryEstimatedF}) {
        for (int m : grid_m(opt)) {
            for (std::size_t n : grid_n(opt)) {
                report.rows.push_back(run_grid_cell(opt, dist, n, m, regime));
            }
        }
    }
    return report;
}

namespace {

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

void emit(const SimReport& report, OutputFormat format, std::ostream& os) {
    const char* cols =
        "distribution,dim,n,m,regime,lambda_tilde,lambda,ratio,failures,seed,generator";
    if (format == OutputFormat::Csv) {
        os << cols << "\n";
        for (const CellRow& r : report.rows) {
            os << r.distribution << ',' << r.dim << ',' << r.n << ',' << r.m << ','
               << r.regime << ',' << fixed4(r.lambda_tilde) << ',' << fixed4(r.lambda)
               << ',' << fixed4(r.ratio) << ',' << r.failures << ',' << r.seed << ','
               << report.generator << "\n";
        }
        return;
    }
    os << "| distribution | dim | n | m | regime | lambda_tilde | lambda | ratio "
          "| failures | seed | generator |\n";
    os << "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const CellRow& r : report.rows) {
        os << "| " << r.distribution << " | " << r.dim << " | " << r.n << " | " << r.m
           << " | " << r.regime << " | " << fixed4(r.lambda_tilde) << " | "
           << fixed4(r.lambda) << " | " << fixed4(r.ratio) << " | " << r.failures
           << " | " << r.seed << " | " << report.generator << " |\n";
    }
}

}  // namespace elw
