#pragma once

#include <random>

#include "mdiica/types.hpp"

namespace mdiica {

// Centering plus linear map to unit sample covariance, with its inverse.
struct WhiteningTransform {
    Vector mean;
    Matrix whitener;
    Matrix dewhitener;
};

// Validates the sample-matrix invariants shared by all entry points:
// finite entries, n >= 2, m >= 2, n > m.
void validate_data(const Matrix& data);

// Eigendecomposition whitening: whitener = Lambda^{-1/2} U' from the sample
// covariance U Lambda U' (divisor n-1).
WhiteningTransform fit_whitening(const Matrix& data);

// Row j of the output = whitener * (row j - mean).
Matrix apply_whitening(const WhiteningTransform& t, const Matrix& data);

// W <- (W W')^{-1/2} W via eigendecomposition of W W'.
Matrix symmetric_decorrelation(const Matrix& w);

// Symmetric decorrelation of an i.i.d. standard-normal matrix.
Matrix random_orthonormal(int m, std::mt19937_64& rng);

}  // namespace mdiica
