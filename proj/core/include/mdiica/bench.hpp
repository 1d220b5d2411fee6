#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mdiica/solvers.hpp"
#include "mdiica/types.hpp"

namespace mdiica {

enum class Family { gaussian, uniform, exponential, laplace, student_t, gmm };

// One synthetic source distribution; samples are standardized to zero mean
// and unit variance using the family's closed-form moments.
struct SourceSpec {
    Family family = Family::gaussian;
    double dof = 5.0;                 // student_t only, must exceed 2
    std::vector<double> weights;      // gmm only
    std::vector<double> means;        // gmm only
    std::vector<double> sigmas;       // gmm only
};

Family family_from_name(const std::string& name);
const char* family_name(Family f);

// Draws one standardized value from the spec.
double sample_source(const SourceSpec& spec, std::mt19937_64& rng);

// Column i holds n i.i.d. standardized draws from specs[i].
Matrix generate_sources(const std::vector<SourceSpec>& specs, long n, std::mt19937_64& rng);

// i.i.d. standard-normal entries, redrawn until condition number <= 1e3.
Matrix random_mixing(int m, std::mt19937_64& rng);

// Permutation- and scale-invariant unmixing error in [0, 1]:
// row/column sums of R = W W0^{-1} relative to their peaks, normalized by
// 2m and by m-1.
double amari_metric(const Matrix& w, const Matrix& w0_true);

struct TrialResult {
    std::string method;
    std::string spec_id;
    int rep = 0;
    double amari = 0.0;
    double elapsed_ms = 0.0;
    std::uint64_t seed = 0;
    bool converged = false;
    bool failed = false;
    std::string error;
};

// One benchmark entry: a named set of sources mixed together.
struct DistributionEntry {
    std::string label;
    std::vector<SourceSpec> sources;
};

struct StudyConfig {
    std::vector<std::string> methods;  // mica2, mica4, fastica-g0, fastica-g1
    std::vector<DistributionEntry> distributions;
    long n = 1000;
    int reps = 100;
    std::uint64_t seed = 0;
    int grid_l = 500;
    double grid_range = 5.0;
    double tol = 1e-6;
    int max_outer_iters = 50;
    int max_inner_iters = 1;
    double ridge = 1e-8;
    bool timing = true;  // when false, elapsed_ms is reported as 0 for reproducible output
};

// Seed for the (distribution, rep) substream; method-independent so every
// method sees the same mixture.
std::uint64_t trial_seed(std::uint64_t base, std::size_t dist_index, int rep);

// Runs every method on the same mixture for each (distribution, rep) pair.
// Solver errors become per-trial failure records. Results are ordered by
// (distribution, rep, method) regardless of job count.
std::vector<TrialResult> run_study(const StudyConfig& cfg, int jobs = 1);

// Runs one method by its public name on whitened data.
SolverResult run_method(const std::string& method, const Matrix& data_whitened,
                        const SolverConfig& cfg);

}  // namespace mdiica
