// Benchmark: the OpenMP execution paths against their serial references.
//
// Two comparisons are timed and validated:
//   1. run_cell with the repetition pool on vs off (results must be
//      byte-identical: repetitions own index-keyed generator streams).
//   2. the block-accumulated Weiszfeld pass against a naive textbook loop
//      on a large point cloud (agreement to near machine precision).
//
// --smoke shrinks the sizes so the binary can run inside the test suite.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "elw/mc.hpp"
#include "elw/spatial.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Naive single-loop reference for the kernel in detail::weiszfeld_pass.
elw::detail::WeiszfeldPass naive_pass(const elw::Mat& pts, const elw::Vec& w,
                                      const elw::Vec& x) {
    elw::detail::WeiszfeldPass out;
    const std::size_t n = pts.rows(), d = pts.cols();
    out.sign_sum.assign(d, 0.0);
    out.shifted_mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double dist2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - pts(i, j);
            dist2 += diff * diff;
        }
        const double dist = std::sqrt(dist2);
        out.objective += w[i] * dist;
        if (dist == 0.0) {
            out.anchor_weight += w[i];
            continue;
        }
        out.inv_sum += w[i] / dist;
        for (std::size_t j = 0; j < d; ++j) {
            out.sign_sum[j] += w[i] / dist * (x[j] - pts(i, j));
            out.shifted_mean[j] += w[i] / dist * pts(i, j);
        }
    }
    return out;
}

std::string cell_csv(const elw::CellRow& row) {
    std::ostringstream os;
    os.precision(17);
    os << row.lambda_tilde << ',' << row.lambda << ',' << row.ratio << ','
       << row.failures << ',' << row.reps_used;
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    const bool smoke = argc > 1 && std::strcmp(argv[1], "--smoke") == 0;

#if defined(_OPENMP)
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled in this build\n");
#endif

    // ---- repetition pool --------------------------------------------------
    elw::SimConfig cfg;
    cfg.dist.kind = elw::DistKind::T3;
    cfg.dist.dim = 3;
    cfg.n = smoke ? 100 : 200;
    cfg.m = 3;
    cfg.regime = elw::Regime::SymmetryKnownF;
    cfg.reps = smoke ? 60 : 400;
    cfg.master_seed = 99;

    cfg.parallel = false;
    auto t0 = Clock::now();
    const elw::CellRow serial_row = elw::run_cell(cfg);
    const double t_serial = seconds_since(t0);

    cfg.parallel = true;
    t0 = Clock::now();
    const elw::CellRow parallel_row = elw::run_cell(cfg);
    const double t_parallel = seconds_since(t0);

    const bool identical = cell_csv(serial_row) == cell_csv(parallel_row);
    std::printf("run_cell (n=%zu, reps=%d): serial %.3fs, pooled %.3fs, speedup %.2fx, %s\n",
                cfg.n, cfg.reps, t_serial, t_parallel,
                t_serial / (t_parallel > 0 ? t_parallel : 1e-9),
                identical ? "results identical" : "RESULTS DIFFER");

    // ---- weiszfeld pass kernel ---------------------------------------------
    const std::size_t big_n = smoke ? 200000 : 2000000;
    elw::DistributionSpec spec;
    spec.kind = elw::DistKind::T3;
    spec.dim = 3;
    spec.seed = 7;
    const elw::Sample big = elw::draw_sample(spec, big_n);
    const elw::Vec w(big_n, 1.0 / static_cast<double>(big_n));
    const elw::Vec x{0.1, -0.2, 0.3};

    t0 = Clock::now();
    const auto ref = naive_pass(big.data, w, x);
    const double t_naive = seconds_since(t0);

    t0 = Clock::now();
    const auto fast = elw::detail::weiszfeld_pass(big.data, w, x, 0.0);
    const double t_blocked = seconds_since(t0);

    double dev = std::abs(ref.inv_sum - fast.inv_sum) + std::abs(ref.objective - fast.objective);
    for (std::size_t j = 0; j < 3; ++j) {
        dev += std::abs(ref.sign_sum[j] - fast.sign_sum[j]);
        dev += std::abs(ref.shifted_mean[j] - fast.shifted_mean[j]);
    }
    std::printf("weiszfeld pass (n=%zu): naive %.3fs, blocked %.3fs, speedup %.2fx, "
                "max deviation %.2e\n",
                big_n, t_naive, t_blocked, t_naive / (t_blocked > 0 ? t_blocked : 1e-9), dev);

    const bool ok = identical && dev < 1e-9;
    if (!ok) std::printf("BENCH VALIDATION FAILED\n");
    return ok ? 0 : 1;
}
