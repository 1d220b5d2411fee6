#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdiica/mdi_density.hpp"
#include "mdiica/prep.hpp"
#include "mdiica/types.hpp"

namespace mdiica {

struct SolverConfig {
    int max_outer_iters = 50;
    int max_inner_iters = 1;   // fixed-point sweeps per density refit
    double tol = 1e-6;         // threshold on 1 - min_i |<w_i new, w_i old>|
    int grid_l = 500;
    double grid_range = 5.0;   // histogram spans (-grid_range, grid_range]
    double ridge = 1e-8;
    std::string basis = "mica2";
    std::uint64_t seed = 0;
    Matrix w_init;             // optional m x m start; empty draws one from seed
};

struct SolverResult {
    Matrix w;                        // orthonormal unmixing matrix, rows are components
    std::vector<TiltModel> tilts;    // per-component fitted tilt (empty for the baseline)
    std::vector<double> kl_trace;    // objective value per outer iteration
    int iterations = 0;
    bool converged = false;
    double ortho_dev_max = 0.0;      // max |WW' - I| entry seen across iterations
};

// Alternating estimation on whitened data: per component, histogram the
// projection and fit tilt coefficients by weighted least squares; then one
// fixed-point sweep w_i <- E{x f_i'(w_i'x)} - E{f_i''(w_i'x)} w_i for all
// rows followed by symmetric decorrelation. kl_trace records the summed
// divergence after each refit.
SolverResult mdiica(const Matrix& data_whitened, const SolverConfig& cfg);

// Symmetric fixed-point baseline with a single fixed nonlinearity (G0 or G1).
// kl_trace carries the contrast sum_i (E{G(w_i'x)} - E{G(nu)})^2 instead.
SolverResult fastica_single(const Matrix& data_whitened, BasisId nonlinearity,
                            const SolverConfig& cfg);

// Rows y = W * whitener * (x - mean) for every sample row x of raw.
Matrix recover_sources(const Matrix& w, const WhiteningTransform& t, const Matrix& raw);

}  // namespace mdiica
