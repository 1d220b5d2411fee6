#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <mdiica/bench.hpp>

namespace mdiica::cli {

// Parses the bench study configuration. Validation failures raise
// std::runtime_error whose message starts with a JSON-pointer-style path
// to the offending field (for example "/distributions/1/sigmas").
StudyConfig load_study_config(const std::filesystem::path& path);

// Per-(method, distribution) aggregate block for the summary output.
std::string summary_json(const StudyConfig& cfg, const std::vector<TrialResult>& results);

// Mean table printed to standard output after a study.
std::string summary_table(const std::vector<TrialResult>& results);

}  // namespace mdiica::cli
