#include "study_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include <mdiica/io.hpp>

namespace mdiica::cli {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& pointer, const std::string& reason) {
    throw std::runtime_error(pointer + ": " + reason);
}

double require_number(const ordered_json& j, const std::string& pointer) {
    if (!j.is_number()) {
        fail(pointer, "expected a number");
    }
    return j.get<double>();
}

std::vector<double> require_number_array(const ordered_json& j, const std::string& pointer) {
    if (!j.is_array() || j.empty()) {
        fail(pointer, "expected a non-empty array of numbers");
    }
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number()) {
            fail(pointer + "/" + std::to_string(i), "expected a number");
        }
        out.push_back(j[i].get<double>());
    }
    return out;
}

SourceSpec parse_source(const ordered_json& j, const std::string& pointer) {
    if (!j.is_object()) {
        fail(pointer, "expected an object");
    }
    if (!j.contains("id") || !j["id"].is_string()) {
        fail(pointer + "/id", "expected a distribution family name");
    }
    SourceSpec spec;
    try {
        spec.family = family_from_name(j["id"].get<std::string>());
    } catch (const std::exception& e) {
        fail(pointer + "/id", e.what());
    }
    if (spec.family == Family::student_t) {
        if (!j.contains("dof")) {
            fail(pointer + "/dof", "student_t requires degrees of freedom");
        }
        spec.dof = require_number(j["dof"], pointer + "/dof");
        if (!(spec.dof > 2.0)) {
            fail(pointer + "/dof", "must exceed 2 for unit variance");
        }
    }
    if (spec.family == Family::gmm) {
        for (const char* key : {"weights", "means", "sigmas"}) {
            if (!j.contains(key)) {
                fail(pointer + "/" + key, "mixture requires this array");
            }
        }
        spec.weights = require_number_array(j["weights"], pointer + "/weights");
        spec.means = require_number_array(j["means"], pointer + "/means");
        spec.sigmas = require_number_array(j["sigmas"], pointer + "/sigmas");
        if (spec.weights.size() != spec.means.size() ||
            spec.weights.size() != spec.sigmas.size()) {
            fail(pointer, "weights, means, sigmas must have equal length");
        }
        for (std::size_t k = 0; k < spec.weights.size(); ++k) {
            if (!(spec.weights[k] > 0.0)) {
                fail(pointer + "/weights/" + std::to_string(k), "must be positive");
            }
            if (!(spec.sigmas[k] > 0.0)) {
                fail(pointer + "/sigmas/" + std::to_string(k), "must be positive");
            }
        }
    }
    return spec;
}

}  // namespace

StudyConfig load_study_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config " + path.string());
    }
    ordered_json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("config is not valid JSON: " + std::string(e.what()));
    }
    if (!j.is_object()) {
        fail("", "top level must be an object");
    }

    StudyConfig cfg;

    if (!j.contains("methods") || !j["methods"].is_array() || j["methods"].empty()) {
        fail("/methods", "expected a non-empty array of method names");
    }
    for (std::size_t i = 0; i < j["methods"].size(); ++i) {
        const auto& m = j["methods"][i];
        if (!m.is_string()) {
            fail("/methods/" + std::to_string(i), "expected a string");
        }
        const std::string name = m.get<std::string>();
        if (name != "mica2" && name != "mica4" && name != "fastica-g0" &&
            name != "fastica-g1") {
            fail("/methods/" + std::to_string(i), "unknown method " + name);
        }
        cfg.methods.push_back(name);
    }

    if (!j.contains("distributions") || !j["distributions"].is_array() ||
        j["distributions"].empty()) {
        fail("/distributions", "expected a non-empty array");
    }
    for (std::size_t d = 0; d < j["distributions"].size(); ++d) {
        const std::string pointer = "/distributions/" + std::to_string(d);
        const auto& ent = j["distributions"][d];
        if (!ent.is_object()) {
            fail(pointer, "expected an object");
        }
        DistributionEntry entry;
        if (ent.contains("sources")) {
            if (!ent["sources"].is_array() || ent["sources"].size() < 2) {
                fail(pointer + "/sources", "expected an array of at least two sources");
            }
            for (std::size_t s = 0; s < ent["sources"].size(); ++s) {
                entry.sources.push_back(
                    parse_source(ent["sources"][s], pointer + "/sources/" + std::to_string(s)));
            }
        } else {
            // shorthand: one spec replicated m times (default pair)
            int copies = 2;
            if (ent.contains("m")) {
                if (!ent["m"].is_number_integer() || ent["m"].get<int>() < 2) {
                    fail(pointer + "/m", "expected an integer >= 2");
                }
                copies = ent["m"].get<int>();
            }
            const SourceSpec spec = parse_source(ent, pointer);
            entry.sources.assign(copies, spec);
        }
        if (ent.contains("label")) {
            if (!ent["label"].is_string() || ent["label"].get<std::string>().empty()) {
                fail(pointer + "/label", "expected a non-empty string");
            }
            entry.label = ent["label"].get<std::string>();
        } else if (ent.contains("id")) {
            entry.label = ent["id"].get<std::string>() + "-" + std::to_string(d);
        } else {
            entry.label = "dist-" + std::to_string(d);
        }
        cfg.distributions.push_back(std::move(entry));
    }

    if (j.contains("n")) {
        const double n = require_number(j["n"], "/n");
        if (!(n >= 2.0)) fail("/n", "expected at least 2 samples");
        cfg.n = static_cast<long>(n);
    }
    if (j.contains("reps")) {
        const double r = require_number(j["reps"], "/reps");
        if (!(r >= 1.0)) fail("/reps", "expected at least 1 replication");
        cfg.reps = static_cast<int>(r);
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
            fail("/seed", "expected an integer");
        }
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("grid_l")) {
        const double l = require_number(j["grid_l"], "/grid_l");
        if (!(l >= 2.0)) fail("/grid_l", "expected at least 2 bins");
        cfg.grid_l = static_cast<int>(l);
    }
    if (j.contains("grid_range")) {
        cfg.grid_range = require_number(j["grid_range"], "/grid_range");
        if (!(cfg.grid_range > 0.0)) fail("/grid_range", "must be positive");
    }
    if (j.contains("tol")) {
        cfg.tol = require_number(j["tol"], "/tol");
        if (!(cfg.tol > 0.0)) fail("/tol", "must be positive");
    }
    if (j.contains("max_outer_iters")) {
        const double v = require_number(j["max_outer_iters"], "/max_outer_iters");
        if (!(v >= 1.0)) fail("/max_outer_iters", "expected at least 1");
        cfg.max_outer_iters = static_cast<int>(v);
    }
    if (j.contains("max_inner_iters")) {
        const double v = require_number(j["max_inner_iters"], "/max_inner_iters");
        if (!(v >= 1.0)) fail("/max_inner_iters", "expected at least 1");
        cfg.max_inner_iters = static_cast<int>(v);
    }
    if (j.contains("ridge")) {
        cfg.ridge = require_number(j["ridge"], "/ridge");
        if (cfg.ridge < 0.0) fail("/ridge", "must be non-negative");
    }
    if (j.contains("timing")) {
        if (!j["timing"].is_boolean()) fail("/timing", "expected a boolean");
        cfg.timing = j["timing"].get<bool>();
    }
    return cfg;
}

namespace {

struct Aggregate {
    long count = 0;
    long failed = 0;
    long converged = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
    double elapsed = 0.0;

    double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }

    double sd() const {
        if (count < 2) return 0.0;
        const double m = mean();
        return std::sqrt(std::max(0.0, (sum_sq - count * m * m) / (count - 1.0)));
    }
};

std::vector<std::pair<std::pair<std::string, std::string>, Aggregate>> aggregate_results(
    const std::vector<TrialResult>& results) {
    std::vector<std::pair<std::pair<std::string, std::string>, Aggregate>> groups;
    auto find = [&](const std::string& method,
                    const std::string& spec) -> Aggregate& {
        for (auto& g : groups) {
            if (g.first.first == method && g.first.second == spec) {
                return g.second;
            }
        }
        groups.push_back({{method, spec}, Aggregate{}});
        return groups.back().second;
    };
    for (const TrialResult& r : results) {
        Aggregate& g = find(r.method, r.spec_id);
        if (r.failed) {
            ++g.failed;
            continue;
        }
        ++g.count;
        g.sum += r.amari;
        g.sum_sq += r.amari * r.amari;
        g.elapsed += r.elapsed_ms;
        if (r.converged) ++g.converged;
    }
    return groups;
}

}  // namespace

std::string summary_json(const StudyConfig& cfg, const std::vector<TrialResult>& results) {
    ordered_json out;
    out["n"] = cfg.n;
    out["reps"] = cfg.reps;
    out["seed"] = cfg.seed;
    out["groups"] = ordered_json::array();
    for (const auto& [key, agg] : aggregate_results(results)) {
        ordered_json g;
        g["method"] = key.first;
        g["spec_id"] = key.second;
        g["trials"] = agg.count + agg.failed;
        g["failed"] = agg.failed;
        g["converged"] = agg.converged;
        g["mean_amari"] = agg.mean();
        g["sd_amari"] = agg.sd();
        g["mean_amari_x100"] = agg.mean() * 100.0;
        g["sd_amari_x100"] = agg.sd() * 100.0;
        g["mean_elapsed_ms"] = agg.count ? agg.elapsed / static_cast<double>(agg.count) : 0.0;
        out["groups"].push_back(std::move(g));
    }
    return out.dump(2) + "\n";
}

std::string summary_table(const std::vector<TrialResult>& results) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "method" << std::setw(22) << "spec_id"
        << std::right << std::setw(14) << "mean_amari" << std::setw(12) << "x100"
        << std::setw(10) << "sd_x100" << std::setw(8) << "conv" << std::setw(8) << "fail"
        << '\n';
    for (const auto& [key, agg] : aggregate_results(results)) {
        out << std::left << std::setw(12) << key.first << std::setw(22) << key.second
            << std::right << std::fixed << std::setprecision(6) << std::setw(14) << agg.mean()
            << std::setprecision(2) << std::setw(12) << agg.mean() * 100.0 << std::setw(10)
            << agg.sd() * 100.0 << std::setw(8) << agg.converged << std::setw(8) << agg.failed
            << '\n';
        out.unsetf(std::ios::fixed);
    }
    return out.str();
}

}  // namespace mdiica::cli
