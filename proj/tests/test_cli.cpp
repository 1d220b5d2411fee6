#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include <mdiica/bench.hpp>
#include <mdiica/io.hpp>
#include <mdiica/prep.hpp>

using namespace mdiica;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
  public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("mdiica-cli-" + std::to_string(std::random_device{}()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    fs::path file(const std::string& name) const { return path_ / name; }
    const fs::path& path() const { return path_; }

  private:
    fs::path path_;
};

struct RunOutcome {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunOutcome run_cli(const TempDir& dir, const std::string& args, const std::string& env = "") {
    const fs::path out = dir.file("cli-stdout.txt");
    const fs::path err = dir.file("cli-stderr.txt");
    std::string cmd;
    if (!env.empty()) {
        cmd += env + " ";
    }
    cmd += std::string(MDIICA_CLI_PATH) + " " + args + " >" + out.string() + " 2>" +
           err.string();
    const int status = std::system(cmd.c_str());
    RunOutcome r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

Matrix json_matrix(const json& j) {
    Matrix m(j.size(), j[0].size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            m(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
        }
    }
    return m;
}

Vector json_vector(const json& j) {
    Vector v(j.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v[i] = j[static_cast<std::size_t>(i)].get<double>();
    }
    return v;
}

// two independent standardized uniform columns, written as CSV
fs::path write_sources_csv(const TempDir& dir, const std::string& name, std::uint64_t seed,
                           Matrix* data = nullptr) {
    std::mt19937_64 rng(seed);
    std::vector<SourceSpec> specs(2);
    for (auto& s : specs) s.family = Family::uniform;
    const Matrix src = generate_sources(specs, 1000, rng);
    const fs::path p = dir.file(name);
    write_text_atomic(p, matrix_csv(src, {}));
    if (data) *data = src;
    return p;
}

fs::path write_mixture_csv(const TempDir& dir, const std::string& name, std::uint64_t seed,
                           Matrix* data = nullptr) {
    std::mt19937_64 rng(seed);
    std::vector<SourceSpec> specs(2);
    specs[0].family = Family::uniform;
    specs[1].family = Family::exponential;
    const Matrix src = generate_sources(specs, 1000, rng);
    const Matrix a = random_mixing(2, rng);
    const Matrix raw = src * a.transpose();
    const fs::path p = dir.file(name);
    write_text_atomic(p, matrix_csv(raw, {}));
    if (data) *data = raw;
    return p;
}

std::string bench_config(const TempDir& dir, int reps, std::uint64_t seed) {
    json cfg;
    cfg["methods"] = {"mica2", "fastica-g0"};
    cfg["distributions"] = json::array({{{"id", "uniform"}, {"label", "uniform-pair"}}});
    cfg["n"] = 300;
    cfg["reps"] = reps;
    cfg["seed"] = seed;
    const fs::path p = dir.file("study.json");
    write_text_atomic(p, cfg.dump(2) + "\n");
    return p.string();
}

}  // namespace

TEST_CASE("separate rejects single-channel input") {
    TempDir dir;
    const fs::path in = dir.file("one.csv");
    write_text_atomic(in, "1\n2\n3\n4\n");
    const RunOutcome r = run_cli(dir, "separate --input " + in.string() + " --out " +
                                          (dir.path() / "out").string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("channels") != std::string::npos);
}

TEST_CASE("separate reports malformed rows with their line number") {
    TempDir dir;
    const fs::path in = dir.file("bad.csv");
    write_text_atomic(in, "1,2\n3,oops\n");
    const RunOutcome r = run_cli(dir, "separate --input " + in.string() + " --out " +
                                          (dir.path() / "out").string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("separating already-independent data is near-trivial") {
    TempDir dir;
    const fs::path in = write_sources_csv(dir, "src.csv", 1001);
    const fs::path out = dir.path() / "out";
    const RunOutcome r =
        run_cli(dir, "separate --input " + in.string() + " --seed 5 --out " + out.string());
    REQUIRE(r.exit_code == 0);

    const json side = json::parse(slurp(out / "run.json"));
    CHECK(side["method"] == "mica2");
    CHECK(side["seed"] == 5);
    CHECK(side["n_samples"] == 1000);
    CHECK(side["converged"].get<bool>());
    const Matrix w = json_matrix(side["w"]);
    const Matrix v = json_matrix(side["whitening"]["whitener"]);
    // the full transform applied to the raw data should be a signed permutation
    CHECK(amari_metric(w * v, Matrix::Identity(2, 2)) < 0.1);

    const CsvMatrix sources = read_csv_matrix(out / "sources.csv");
    REQUIRE(sources.header.size() == 2);
    CHECK(sources.header[0] == "ic1");
    CHECK(sources.header[1] == "ic2");
    CHECK(sources.values.rows() == 1000);
}

TEST_CASE("sidecar reproduces the sources file") {
    TempDir dir;
    Matrix raw;
    const fs::path in = write_mixture_csv(dir, "mix.csv", 2025, &raw);
    const fs::path out = dir.path() / "out";
    const RunOutcome r = run_cli(dir, "separate --input " + in.string() +
                                          " --method mica4 --seed 9 --out " + out.string());
    REQUIRE(r.exit_code == 0);

    const json side = json::parse(slurp(out / "run.json"));
    const Matrix w = json_matrix(side["w"]);
    const Vector mean = json_vector(side["whitening"]["mean"]);
    const Matrix v = json_matrix(side["whitening"]["whitener"]);
    REQUIRE(side["tilts"].size() == 2);
    CHECK(side["tilts"][0]["beta"].size() == 4);
    CHECK(side["kl_trace"].size() == side["iterations"].get<std::size_t>());

    // raw CSV values round-trip exactly, so the recomputation matches the
    // written sources to writeout precision
    const Matrix recomputed =
        (raw.rowwise() - mean.transpose()) * v.transpose() * w.transpose();
    const CsvMatrix sources = read_csv_matrix(out / "sources.csv");
    CHECK((recomputed - sources.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("iteration cap yields exit two with outputs intact") {
    TempDir dir;
    const fs::path in = write_mixture_csv(dir, "mix.csv", 77);
    const fs::path out = dir.path() / "out";
    const RunOutcome r = run_cli(dir, "separate --input " + in.string() +
                                          " --seed 5 --max-iters 1 --out " + out.string());
    CHECK(r.exit_code == 2);
    CHECK(fs::exists(out / "sources.csv"));
    const json side = json::parse(slurp(out / "run.json"));
    CHECK_FALSE(side["converged"].get<bool>());
    CHECK(side["iterations"] == 1);
}

TEST_CASE("unknown method is rejected at the flag level") {
    TempDir dir;
    const fs::path in = write_sources_csv(dir, "src.csv", 4);
    const RunOutcome r = run_cli(dir, "separate --input " + in.string() +
                                          " --method mica9 --out " +
                                          (dir.path() / "out").string());
    CHECK(r.exit_code != 0);
    CHECK(r.exit_code != 2);
}

TEST_CASE("bench writes the study outputs") {
    TempDir dir;
    const std::string cfg = bench_config(dir, 2, 99);
    const fs::path out = dir.path() / "bench";
    const RunOutcome r = run_cli(dir, "bench --config " + cfg + " --out " + out.string() +
                                          " --jobs 2");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("mica2") != std::string::npos);

    const std::string csv = slurp(out / "results.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 2 reps x 2 methods
    CHECK(csv.rfind("method,spec_id,rep,amari,amari_x100,elapsed_ms,converged\n", 0) == 0);

    const json summary = json::parse(slurp(out / "summary.json"));
    CHECK(summary["reps"] == 2);
    CHECK(summary["seed"] == 99);
    REQUIRE(summary["groups"].size() == 2);
    for (const auto& g : summary["groups"]) {
        CHECK(g["trials"] == 2);
        CHECK(g["failed"] == 0);
        CHECK(g["mean_amari"].get<double>() >= 0.0);
    }
}

TEST_CASE("bench rejects invalid configs with a field path") {
    TempDir dir;
    json cfg;
    cfg["methods"] = {"mica2"};
    cfg["distributions"] = json::array({{{"id", "uniform"}}});
    cfg["reps"] = 0;
    const fs::path p = dir.file("bad.json");
    write_text_atomic(p, cfg.dump() + "\n");
    const RunOutcome r = run_cli(dir, "bench --config " + p.string() + " --out " +
                                          (dir.path() / "o").string());
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("/reps") != std::string::npos);
}

TEST_CASE("bench output is deterministic across runs and job counts") {
    TempDir dir;
    const std::string cfg = bench_config(dir, 3, 1234);
    const fs::path a = dir.path() / "a";
    const fs::path b = dir.path() / "b";
    REQUIRE(run_cli(dir, "bench --config " + cfg + " --out " + a.string() +
                             " --jobs 1 --no-timing")
                .exit_code == 0);
    REQUIRE(run_cli(dir, "bench --config " + cfg + " --out " + b.string() +
                             " --jobs 4 --no-timing")
                .exit_code == 0);
    CHECK(slurp(a / "results.csv") == slurp(b / "results.csv"));
    CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
}

TEST_CASE("environment seed fills in when no flag is given") {
    TempDir dir;
    const fs::path in = write_sources_csv(dir, "src.csv", 6);
    const fs::path out1 = dir.path() / "e1";
    const fs::path out2 = dir.path() / "e2";
    const fs::path out3 = dir.path() / "e3";

    REQUIRE(run_cli(dir, "separate --input " + in.string() + " --out " + out1.string(),
                    "MDIICA_SEED=11")
                .exit_code == 0);
    CHECK(json::parse(slurp(out1 / "run.json"))["seed"] == 11);

    REQUIRE(run_cli(dir, "separate --input " + in.string() + " --out " + out2.string(),
                    "MDIICA_SEED=12")
                .exit_code == 0);
    CHECK(json::parse(slurp(out2 / "run.json"))["seed"] == 12);

    // an explicit flag wins over the environment
    REQUIRE(run_cli(dir, "separate --input " + in.string() + " --seed 5 --out " +
                             out3.string(),
                    "MDIICA_SEED=99")
                .exit_code == 0);
    CHECK(json::parse(slurp(out3 / "run.json"))["seed"] == 5);
}

TEST_CASE("environment seed overrides the bench config") {
    TempDir dir;
    const std::string cfg = bench_config(dir, 1, 42);
    const fs::path out = dir.path() / "bench";
    REQUIRE(run_cli(dir, "bench --config " + cfg + " --out " + out.string(), "MDIICA_SEED=7")
                .exit_code == 0);
    CHECK(json::parse(slurp(out / "summary.json"))["seed"] == 7);
}
