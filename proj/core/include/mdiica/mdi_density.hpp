#pragma once

#include "mdiica/basis.hpp"
#include "mdiica/types.hpp"

namespace mdiica {

// Standard normal density.
double gaussian_pdf(double y);

// Equally spaced histogram with half-open bins (lo + l*step, lo + (l+1)*step].
// Samples outside (lo, hi] are dropped and counted in n_clipped.
struct GridHistogram {
    Vector centers;       // bin midpoints, strictly increasing
    double step = 0.0;    // uniform bin width
    Vector freqs;         // per-bin relative frequency, sums to <= 1
    long n_samples = 0;   // total samples offered (including clipped)
    long n_clipped = 0;   // samples outside the range
};

GridHistogram build_histogram(const Vector& samples, int l_bins, double lo, double hi);

struct TiltModel {
    Vector beta;
    BasisSet basis;
};

// Weighted least squares fit of the tilt coefficients: minimizes
//   sum_l w_l (beta'G(c_l) - r_l)^2,  w_l = step*phi(c_l),
//   r_l = (q_l - w_l) / w_l,
// via the normal equations (D'WD + ridge*I) beta = D'W r = D'(q - w).
TiltModel fit_tilt_wls(const GridHistogram& h, const BasisSet& basis, double ridge = 1e-8);

// Discretized divergence of the tilted density from the standard normal:
//   sum_l { q_l f(c_l) - step*phi(c_l) e^{f(c_l)} } + 1.
// Exponent arguments are clamped to [-30, 30]; *clamped reports if that fired.
double kl_min(const TiltModel& model, const GridHistogram& h, bool* clamped = nullptr);

// Diagnostic sum_l step*phi(c_l) e^{f(c_l)}; approximately 1 at a fitted optimum.
double partition_integral(const TiltModel& model, const GridHistogram& h, bool* clamped = nullptr);

}  // namespace mdiica
