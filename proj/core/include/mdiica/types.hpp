#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mdiica {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct RankDeficient : std::runtime_error {
    explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyInput : std::runtime_error {
    explicit EmptyInput(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidRange : std::runtime_error {
    explicit InvalidRange(const std::string& what) : std::runtime_error(what) {}
};

struct SingularDesign : std::runtime_error {
    explicit SingularDesign(const std::string& what) : std::runtime_error(what) {}
};

struct NotWhitened : std::runtime_error {
    explicit NotWhitened(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownDistribution : std::runtime_error {
    explicit UnknownDistribution(const std::string& what) : std::runtime_error(what) {}
};

struct Singular : std::runtime_error {
    explicit Singular(const std::string& what) : std::runtime_error(what) {}
};

// Deterministic stream splitting for per-trial substreams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace mdiica
