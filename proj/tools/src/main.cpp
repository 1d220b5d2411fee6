#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include <mdiica/bench.hpp>
#include <mdiica/io.hpp>
#include <mdiica/solvers.hpp>

#include "study_config.hpp"

namespace {

using mdiica::Matrix;
using mdiica::Vector;
using nlohmann::ordered_json;

ordered_json matrix_json(const Matrix& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(m(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json vector_json(const Vector& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

bool env_seed(std::uint64_t& out) {
    const char* raw = std::getenv("MDIICA_SEED");
    if (!raw || !*raw) {
        return false;
    }
    try {
        out = std::stoull(raw);
        return true;
    } catch (const std::exception&) {
        throw std::runtime_error("MDIICA_SEED is not an unsigned integer");
    }
}

int cmd_separate(const std::string& input, const std::string& method, std::uint64_t seed,
                 bool seed_given, const std::string& out_dir, int grid_l, double grid_range,
                 double tol, int max_iters) {
    std::uint64_t env;
    if (!seed_given && env_seed(env)) {
        seed = env;
    }

    mdiica::CsvMatrix csv;
    try {
        csv = mdiica::read_csv_matrix(input);
        if (csv.values.cols() < 2) {
            std::cerr << "error: need at least 2 channels, got " << csv.values.cols() << "\n";
            return 1;
        }
        mdiica::validate_data(csv.values);
    } catch (const std::exception& e) {
        std::cerr << "error: " << input << ": " << e.what() << "\n";
        return 1;
    }

    mdiica::SolverConfig cfg;
    cfg.max_outer_iters = max_iters;
    cfg.tol = tol;
    cfg.grid_l = grid_l;
    cfg.grid_range = grid_range;
    cfg.seed = seed;

    try {
        const auto t0 = std::chrono::steady_clock::now();
        const mdiica::WhiteningTransform wt = mdiica::fit_whitening(csv.values);
        const Matrix xw = mdiica::apply_whitening(wt, csv.values);
        const mdiica::SolverResult res = mdiica::run_method(method, xw, cfg);
        const Matrix sources = mdiica::recover_sources(res.w, wt, csv.values);
        const auto t1 = std::chrono::steady_clock::now();
        const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

        std::filesystem::create_directories(out_dir);
        std::vector<std::string> header;
        for (Eigen::Index j = 0; j < sources.cols(); ++j) {
            header.push_back("ic" + std::to_string(j + 1));
        }
        mdiica::write_text_atomic(std::filesystem::path(out_dir) / "sources.csv",
                                  mdiica::matrix_csv(sources, header));

        ordered_json side;
        side["input"] = input;
        side["method"] = method;
        side["seed"] = seed;
        side["n_samples"] = csv.values.rows();
        side["n_channels"] = csv.values.cols();
        side["converged"] = res.converged;
        side["iterations"] = res.iterations;
        side["wall_ms"] = wall_ms;
        side["w"] = matrix_json(res.w);
        side["whitening"]["mean"] = vector_json(wt.mean);
        side["whitening"]["whitener"] = matrix_json(wt.whitener);
        side["whitening"]["dewhitener"] = matrix_json(wt.dewhitener);
        side["tilts"] = ordered_json::array();
        for (const mdiica::TiltModel& t : res.tilts) {
            ordered_json tj;
            tj["beta"] = vector_json(t.beta);
            ordered_json names = ordered_json::array();
            for (mdiica::BasisId id : t.basis.ids) {
                names.push_back(mdiica::basis_id_name(id));
            }
            tj["basis"] = std::move(names);
            side["tilts"].push_back(std::move(tj));
        }
        side["kl_trace"] = res.kl_trace;
        mdiica::write_text_atomic(std::filesystem::path(out_dir) / "run.json",
                                  side.dump(2) + "\n");

        if (!res.converged) {
            std::cerr << "warning: not converged after " << res.iterations << " iterations\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_bench(const std::string& config_path, const std::string& out_dir, int jobs,
              bool no_timing) {
    mdiica::StudyConfig cfg;
    try {
        cfg = mdiica::cli::load_study_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << config_path << ": " << e.what() << "\n";
        return 1;
    }
    std::uint64_t env;
    try {
        if (env_seed(env)) {
            cfg.seed = env;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    if (no_timing) {
        cfg.timing = false;
    }

    try {
        const std::vector<mdiica::TrialResult> results = mdiica::run_study(cfg, jobs);
        std::filesystem::create_directories(out_dir);
        mdiica::write_text_atomic(std::filesystem::path(out_dir) / "results.csv",
                                  mdiica::trial_results_csv(results));
        mdiica::write_text_atomic(std::filesystem::path(out_dir) / "summary.json",
                                  mdiica::cli::summary_json(cfg, results));
        std::cout << mdiica::cli::summary_table(results);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MDIICA blind source separation toolkit"};
    app.require_subcommand(1);

    std::string input, out_dir, method = "mica2";
    std::uint64_t seed = 0;
    int grid_l = 500;
    double grid_range = 5.0;
    double tol = 1e-6;
    int max_iters = 50;

    CLI::App* sep = app.add_subcommand("separate", "Separate a CSV data matrix");
    sep->add_option("--input", input, "Input CSV, rows = samples")->required();
    sep->add_option("--method", method, "mica2|mica4|fastica-g0|fastica-g1")
        ->check(CLI::IsMember({"mica2", "mica4", "fastica-g0", "fastica-g1"}));
    CLI::Option* seed_opt = sep->add_option("--seed", seed, "Initialization seed");
    sep->add_option("--out", out_dir, "Output directory")->required();
    sep->add_option("--grid-l", grid_l, "Histogram bin count");
    sep->add_option("--grid-range", grid_range, "Histogram half width");
    sep->add_option("--tol", tol, "Convergence tolerance");
    sep->add_option("--max-iters", max_iters, "Outer iteration cap");

    std::string config_path;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    bool no_timing = false;

    CLI::App* bench = app.add_subcommand("bench", "Run the replication study");
    bench->add_option("--config", config_path, "Study config JSON")->required();
    bench->add_option("--out", out_dir, "Output directory")->required();
    bench->add_option("--jobs", jobs, "Worker thread count");
    bench->add_flag("--no-timing", no_timing, "Report elapsed_ms as 0 for reproducible output");

    CLI11_PARSE(app, argc, argv);

    if (sep->parsed()) {
        return cmd_separate(input, method, seed, seed_opt->count() > 0, out_dir, grid_l,
                            grid_range, tol, max_iters);
    }
    return cmd_bench(config_path, out_dir, jobs, no_timing);
}
