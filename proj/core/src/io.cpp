#include "mdiica/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace mdiica {

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

bool parse_double(std::string_view field, double& out) {
    // from_chars wants no leading whitespace; tolerate surrounding blanks
    std::size_t b = field.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return false;
    }
    std::size_t e = field.find_last_not_of(" \t\r");
    field = field.substr(b, e - b + 1);
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && field.front() == '+') {
        ++first;  // from_chars rejects an explicit plus
    }
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

CsvMatrix read_csv_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidRange("cannot open " + path.string());
    }
    CsvMatrix out;
    std::vector<std::vector<double>> rows;
    std::string line;
    long line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_fields(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!parse_double(fields[i], row[i])) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (line_no == 1) {
                out.header = fields;  // non-numeric first row = header
                width = fields.size();
                continue;
            }
            throw InvalidRange("line " + std::to_string(line_no) + ": non-numeric field");
        }
        if (width == 0) {
            width = row.size();
        } else if (row.size() != width) {
            throw InvalidRange("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(width) + " fields, got " +
                               std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw EmptyInput("no data rows in " + path.string());
    }
    out.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(width));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < width; ++j) {
            out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path dir =
        path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    const std::filesystem::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw InvalidRange("cannot write " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw InvalidRange("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string matrix_csv(const Matrix& values, const std::vector<std::string>& header) {
    std::ostringstream out;
    if (!header.empty()) {
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (j) out << ',';
            out << header[j];
        }
        out << '\n';
    }
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        for (Eigen::Index j = 0; j < values.cols(); ++j) {
            if (j) out << ',';
            out << format_double(values(i, j));
        }
        out << '\n';
    }
    return out.str();
}

std::string trial_results_csv(const std::vector<TrialResult>& results) {
    std::ostringstream out;
    out << "method,spec_id,rep,amari,amari_x100,elapsed_ms,converged\n";
    for (const TrialResult& r : results) {
        out << r.method << ',' << r.spec_id << ',' << r.rep << ','
            << format_double(r.amari) << ',' << format_double(r.amari * 100.0) << ','
            << format_double(r.elapsed_ms) << ',' << (r.converged ? "true" : "false") << '\n';
    }
    return out.str();
}

}  // namespace mdiica
