#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mdiica/bench.hpp"
#include "mdiica/types.hpp"

namespace mdiica {

// Shortest decimal text that round-trips to the same double ("nan"/"inf"
// spelled out). Locale-independent.
std::string format_double(double v);

struct CsvMatrix {
    Matrix values;
    std::vector<std::string> header;  // empty when the file had none
};

// Reads a rectangular numeric CSV. A non-numeric first row is treated as a
// header. Parse problems raise InvalidRange with a line-numbered message.
CsvMatrix read_csv_matrix(const std::filesystem::path& path);

// Writes text via a temporary file in the same directory plus an atomic
// rename, so the destination is never partially written.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

// Matrix as CSV, optional header row.
std::string matrix_csv(const Matrix& values, const std::vector<std::string>& header);

// Benchmark results in the study output layout:
// method,spec_id,rep,amari,amari_x100,elapsed_ms,converged
std::string trial_results_csv(const std::vector<TrialResult>& results);

}  // namespace mdiica
