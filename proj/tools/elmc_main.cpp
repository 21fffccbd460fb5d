// elmc: Monte Carlo study driver and ad-hoc estimation CLI.
//
// Subcommands:
//   table <1..5>   efficiency-ratio grid for one of the study tables
//   cell           a single simulation cell from explicit flags
//   estimate       EL-weighted estimate of a functional on a CSV dataset
//   median         (weighted) spatial median of a CSV dataset
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "elw/estimators.hpp"
#include "elw/io.hpp"
#include "elw/mc.hpp"
#include "elw/statfun.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::ostream& open_output(const std::string& path, std::ofstream& file) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw CLI::ValidationError("--out", "cannot open " + path);
    return file;
}

elw::Cdf named_cdf(const std::string& name) {
    if (name == "normal") return [](double x) { return elw::normal_cdf(x); };
    if (name == "cauchy") return [](double x) { return elw::cauchy_cdf(x); };
    if (name == "t3") return [](double x) { return elw::t3_cdf(x); };
    if (name == "uniform")
        return [](double x) { return std::clamp(x, 0.0, 1.0); };
    throw CLI::ValidationError("--f/--g", "unknown distribution function: " + name);
}

elw::FunctionalSpec named_psi(const std::string& name, std::size_t d) {
    if (name == "identity") return elw::psi_identity(d);
    if (name == "sum") return elw::psi_coordinate_sum();
    if (name == "diff") return elw::psi_coordinate_difference();
    if (name.rfind("rect:", 0) == 0) {
        double sx = 0.5, sy = 0.5;
        if (std::sscanf(name.c_str() + 5, "%lf,%lf", &sx, &sy) != 2)
            throw CLI::ValidationError("--psi", "expected rect:<sx>,<sy>");
        return elw::psi_rectangle(sx, sy);
    }
    throw CLI::ValidationError("--psi", "unknown functional: " + name);
}

struct RecipeFlags {
    std::string recipe = "sym-est";
    int m = 3;
    std::vector<double> medians;
    std::vector<double> axis;
    double center = 0.0;
    std::string f = "normal", g = "normal";

    void attach(CLI::App* cmd) {
        cmd->add_option("--recipe", recipe,
                        "constraint recipe: medians | sym-known | sym-est | "
                        "known-marginals | equal-marginals")
            ->default_val(recipe);
        cmd->add_option("--m", m, "constraint count per basis")->default_val(m);
        cmd->add_option("--medians", medians, "known componentwise medians");
        cmd->add_option("--axis", axis, "projection axis for symmetry recipes");
        cmd->add_option("--center", center, "symmetry center")->default_val(center);
        cmd->add_option("--f", f, "marginal CDF name (normal|cauchy|t3|uniform)");
        cmd->add_option("--g", g, "second marginal CDF name");
    }

    elw::ConstraintRecipe build(std::size_t d) const {
        if (recipe == "medians") {
            elw::KnownComponentwiseMedians r;
            r.medians = medians.empty() ? elw::Vec(d, 0.0) : medians;
            return r;
        }
        elw::Vec ax = axis.empty() ? elw::Vec(d, 0.0) : elw::Vec(axis);
        if (axis.empty() && d > 0) ax[0] = 1.0;
        if (recipe == "sym-known") {
            elw::SymmetryKnownF r;
            r.axis = ax;
            r.center = center;
            r.m = m;
            r.cdf = named_cdf(f);
            return r;
        }
        if (recipe == "sym-est") {
            elw::SymmetryEstimatedF r;
            r.axis = ax;
            r.center = center;
            r.m = m;
            return r;
        }
        if (recipe == "known-marginals") {
            elw::KnownMarginals r;
            r.m = m;
            r.cdf_x = named_cdf(f);
            r.cdf_y = named_cdf(g);
            return r;
        }
        if (recipe == "equal-marginals") {
            elw::EqualMarginalsEstimated r;
            r.m = m;
            return r;
        }
        throw CLI::ValidationError("--recipe", "unknown recipe: " + recipe);
    }
};

void warn_growth(const elw::ConstraintRecipe& recipe, std::size_t n) {
    if (auto note = elw::growth_advisory(recipe, n)) std::cerr << "note: " << *note << "\n";
}

void print_vector(std::ostream& os, const char* label, const elw::Vec& v) {
    os << label;
    for (double x : v) os << ' ' << x;
    os << "\n";
}

elw::OutputFormat parse_format(const std::string& f) {
    if (f == "csv") return elw::OutputFormat::Csv;
    if (f == "markdown") return elw::OutputFormat::Markdown;
    throw CLI::ValidationError("--format", "csv or markdown");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EL-weighted spatial median and linear-functional estimation"};
    app.set_config("--config", "", "declarative key=value configuration file");
    app.require_subcommand(1);

    // ---- table ------------------------------------------------------------
    auto* table_cmd = app.add_subcommand("table", "run one study table grid");
    table_cmd->configurable();
    int table_id = 1;
    elw::TableOptions topt;
    std::string table_format = "csv", table_out;
    bool table_serial = false;
    table_cmd->add_option("id", table_id, "table number (1..5)")->required();
    table_cmd->add_option("--reps", topt.reps, "repetitions per cell")->default_val(topt.reps);
    table_cmd->add_option("--seed", topt.master_seed, "master seed")
        ->default_val(topt.master_seed);
    table_cmd->add_flag("--full", topt.full, "reference scale (2000 repetitions)");
    table_cmd->add_option("--n", topt.n_values, "restrict the sample-size grid");
    table_cmd->add_option("--m", topt.m_values, "restrict the constraint-count grid");
    table_cmd->add_option("--format", table_format, "csv | markdown")->default_val("csv");
    table_cmd->add_option("--out", table_out, "output file (stdout when absent)");
    table_cmd->add_flag("--serial", table_serial, "disable the repetition worker pool");

    // ---- cell -------------------------------------------------------------
    auto* cell_cmd = app.add_subcommand("cell", "run a single simulation cell");
    cell_cmd->configurable();
    std::string cell_dist = "cauchy", cell_regime = "sym-known";
    int cell_dim = 2, cell_m = 3, cell_reps = 500;
    std::size_t cell_n = 200;
    std::uint64_t cell_seed_v = 20240808;
    std::string cell_format = "csv", cell_out;
    bool cell_serial = false;
    cell_cmd->add_option("--dist", cell_dist, "cauchy|t3|copula|asymlaplace")->required();
    cell_cmd->add_option("--dim", cell_dim, "dimension (2 or 3)")->default_val(2);
    cell_cmd->add_option("--n", cell_n, "sample size")->required();
    cell_cmd->add_option("--m", cell_m, "constraint count")->default_val(3);
    cell_cmd->add_option("--regime", cell_regime, "medians|sym-known|sym-est")->required();
    cell_cmd->add_option("--reps", cell_reps, "repetitions")->default_val(500);
    cell_cmd->add_option("--seed", cell_seed_v, "seed")->default_val(cell_seed_v);
    cell_cmd->add_option("--format", cell_format, "csv | markdown")->default_val("csv");
    cell_cmd->add_option("--out", cell_out, "output file");
    cell_cmd->add_flag("--serial", cell_serial, "disable the repetition worker pool");

    // ---- estimate -----------------------------------------------------------
    auto* est_cmd = app.add_subcommand("estimate", "EL-weighted functional estimate");
    est_cmd->configurable();
    std::string est_input, est_psi = "identity", est_out;
    RecipeFlags est_recipe;
    est_cmd->add_option("--input", est_input, "CSV dataset")->required();
    est_cmd->add_option("--psi", est_psi, "identity | sum | diff | rect:<sx>,<sy>")
        ->default_val("identity");
    est_recipe.attach(est_cmd);
    est_cmd->add_option("--out", est_out, "output file");

    // ---- median -------------------------------------------------------------
    auto* med_cmd = app.add_subcommand("median", "spatial median of a CSV dataset");
    med_cmd->configurable();
    std::string med_input, med_out;
    bool med_weighted = false;
    double med_tol = 1e-9;
    int med_iter = 500;
    RecipeFlags med_recipe;
    med_cmd->add_option("--input", med_input, "CSV dataset")->required();
    med_cmd->add_flag("--el", med_weighted, "reweight by the EL recipe first");
    med_recipe.attach(med_cmd);
    med_cmd->add_option("--tol", med_tol, "convergence tolerance")->default_val(1e-9);
    med_cmd->add_option("--max-iter", med_iter, "iteration cap")->default_val(500);
    med_cmd->add_option("--out", med_out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*table_cmd) {
            topt.parallel = !table_serial;
            const elw::SimReport report = elw::run_table(table_id, topt);
            std::ofstream file;
            emit(report, parse_format(table_format), open_output(table_out, file));
            for (const auto& row : report.rows) {
                if (!row.valid) {
                    std::cerr << "cell " << row.distribution << " n=" << row.n
                              << " m=" << row.m << " exceeded the failure budget\n";
                    return kExitNumeric;
                }
            }
            return 0;
        }

        if (*cell_cmd) {
            elw::SimConfig cfg;
            cfg.dist.kind = elw::dist_kind_from_string(
                cell_dist == "copula" ? (cell_dim == 2 ? "copula2d" : "copula3d")
                                      : cell_dist);
            cfg.dist.dim = cell_dim;
            cfg.n = cell_n;
            cfg.m = cell_m;
            cfg.regime = elw::regime_from_string(cell_regime);
            cfg.reps = cell_reps;
            cfg.master_seed = cell_seed_v;
            cfg.parallel = !cell_serial;
            elw::SimReport report;
            report.master_seed = cfg.master_seed;
            report.rows.push_back(elw::run_cell(cfg));
            std::ofstream file;
            emit(report, parse_format(cell_format), open_output(cell_out, file));
            return report.rows[0].valid ? 0 : kExitNumeric;
        }

        if (*est_cmd) {
            const elw::CsvTable data = elw::read_csv_file(est_input);
            const std::size_t d = data.values.cols();
            const elw::ConstraintRecipe recipe = est_recipe.build(d);
            warn_growth(recipe, data.values.rows());
            const elw::FunctionalSpec psi = named_psi(est_psi, d);
            const elw::EstimateReport rep = elw::el_estimate(data.values, psi, recipe);
            std::ofstream file;
            std::ostream& os = open_output(est_out, file);
            os << "psi: " << psi.description << "\n";
            os << "m_used: " << rep.m_used << "\n";
            print_vector(os, "theta_plain:", rep.theta_plain);
            print_vector(os, "theta_el:", rep.theta_el);
            print_vector(os, "zeta:", rep.zeta);
            return 0;
        }

        if (*med_cmd) {
            const elw::CsvTable data = elw::read_csv_file(med_input);
            elw::MedianConfig mcfg;
            mcfg.tol = med_tol;
            mcfg.max_iter = med_iter;
            elw::SpatialResult res;
            if (med_weighted) {
                const elw::ConstraintRecipe recipe = med_recipe.build(data.values.cols());
                warn_growth(recipe, data.values.rows());
                res = elw::el_weighted_median_pipeline(data.values, recipe, {}, mcfg);
            } else {
                res = elw::weighted_spatial_median(data.values, nullptr, mcfg);
            }
            std::ofstream file;
            std::ostream& os = open_output(med_out, file);
            print_vector(os, "median:", res.median);
            os << "iterations: " << res.iterations << "\n";
            os << "gradient_norm: " << res.gradient_norm << "\n";
            os << "converged: " << (res.converged ? "yes" : "no") << "\n";
            return res.converged ? 0 : kExitNumeric;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
