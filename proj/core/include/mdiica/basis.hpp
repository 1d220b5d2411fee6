#pragma once

#include <string>
#include <vector>

#include "mdiica/types.hpp"

namespace mdiica {

// Nonlinearities with closed-form first and second derivatives.
//   G1bar(y) = y exp(-y^2/2)    G2bar(y) = exp(-y^2/2)
//   G0(y)    = y^4 / 4          G1(y)    = log cosh(y)
enum class BasisId { G1bar, G2bar, G0, G1 };

struct BasisEval {
    double value;
    double d1;
    double d2;
};

BasisEval eval_basis(BasisId id, double y);

// Gaussian expectation E{G(nu)}, nu ~ N(0,1). Closed form where available,
// quadrature for G1 (computed once, cached).
double gaussian_expectation(BasisId id);

const char* basis_id_name(BasisId id);

struct BasisSet {
    std::vector<BasisId> ids;

    int p() const { return static_cast<int>(ids.size()); }

    // "mica2" -> {G1bar, G2bar}; "mica4" -> {G1bar, G2bar, G0, G1}
    static BasisSet from_name(const std::string& name);
};

// Values and derivatives of every basis function at a scalar point,
// in declared order.
void eval_basis(const BasisSet& b, double y, double* values, double* d1, double* d2);

struct TiltEval {
    double f;
    double f1;
    double f2;
};

// f(y) = beta' G(y) and its first two derivatives.
TiltEval eval_tilt(const Vector& beta, const BasisSet& b, double y);

// Design matrices over a vector of points: out(i,k) = G_k(y_i) etc.
// Null destinations are skipped.
void basis_design(const BasisSet& b, const Vector& y, Matrix* values, Matrix* d1, Matrix* d2);

// Tilt f = beta'G and derivatives over a vector of points; null skipped.
void tilt_curves(const Vector& beta, const BasisSet& b, const Vector& y,
                 Vector* f, Vector* f1, Vector* f2);

}  // namespace mdiica
