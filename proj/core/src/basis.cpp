#include "mdiica/basis.hpp"

#include <cmath>

namespace mdiica {

namespace {

// log cosh without overflow: |y| + log((1 + e^{-2|y|})/2)
double log_cosh(double y) {
    const double a = std::abs(y);
    return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

// Simpson quadrature of g(y)*phi(y) over [-12, 12].
template <typename F>
double gauss_quadrature(F g) {
    const int n = 4000;  // even
    const double lo = -12.0, hi = 12.0;
    const double h = (hi - lo) / n;
    const double inv_sqrt2pi = 0.3989422804014327;
    auto integrand = [&](double y) {
        return g(y) * inv_sqrt2pi * std::exp(-0.5 * y * y);
    };
    double acc = integrand(lo) + integrand(hi);
    for (int i = 1; i < n; ++i) {
        acc += integrand(lo + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

// Evaluates one basis function over a vector of points, sharing the
// exp(-y^2/2) factor between the two Gaussian-kernel functions.
class ColumnEval {
  public:
    explicit ColumnEval(const Vector& y) : y_(y) {}

    void fill(BasisId id, Vector* val, Vector* d1, Vector* d2) {
        const auto a = y_.array();
        switch (id) {
            case BasisId::G1bar: {
                const Eigen::ArrayXd& ex = exp_half();
                if (val) *val = (a * ex).matrix();
                if (d1) *d1 = ((1.0 - a.square()) * ex).matrix();
                if (d2) *d2 = ((a.cube() - 3.0 * a) * ex).matrix();
                break;
            }
            case BasisId::G2bar: {
                const Eigen::ArrayXd& ex = exp_half();
                if (val) *val = ex.matrix();
                if (d1) *d1 = (-a * ex).matrix();
                if (d2) *d2 = ((a.square() - 1.0) * ex).matrix();
                break;
            }
            case BasisId::G0: {
                if (val) *val = (0.25 * a.square().square()).matrix();
                if (d1) *d1 = a.cube().matrix();
                if (d2) *d2 = (3.0 * a.square()).matrix();
                break;
            }
            case BasisId::G1: {
                const Eigen::ArrayXd t = a.tanh();
                if (val) {
                    const Eigen::ArrayXd aa = a.abs();
                    *val = (aa + (-2.0 * aa).exp().log1p() - std::log(2.0)).matrix();
                }
                if (d1) *d1 = t.matrix();
                if (d2) *d2 = (1.0 - t.square()).matrix();
                break;
            }
        }
    }

  private:
    const Eigen::ArrayXd& exp_half() {
        if (!have_e_) {
            e_ = (-0.5 * y_.array().square()).exp();
            have_e_ = true;
        }
        return e_;
    }

    const Vector& y_;
    Eigen::ArrayXd e_;
    bool have_e_ = false;
};

}  // namespace

BasisEval eval_basis(BasisId id, double y) {
    switch (id) {
        case BasisId::G1bar: {
            const double e = std::exp(-0.5 * y * y);
            return {y * e, (1.0 - y * y) * e, (y * y * y - 3.0 * y) * e};
        }
        case BasisId::G2bar: {
            const double e = std::exp(-0.5 * y * y);
            return {e, -y * e, (y * y - 1.0) * e};
        }
        case BasisId::G0:
            return {0.25 * y * y * y * y, y * y * y, 3.0 * y * y};
        case BasisId::G1: {
            const double t = std::tanh(y);
            return {log_cosh(y), t, 1.0 - t * t};
        }
    }
    return {0.0, 0.0, 0.0};
}

double gaussian_expectation(BasisId id) {
    switch (id) {
        case BasisId::G1bar:
            return 0.0;  // odd integrand
        case BasisId::G2bar:
            return 1.0 / std::sqrt(2.0);  // E exp(-nu^2/2)
        case BasisId::G0:
            return 0.75;  // E nu^4 / 4
        case BasisId::G1: {
            static const double v = gauss_quadrature(log_cosh);
            return v;
        }
    }
    return 0.0;
}

const char* basis_id_name(BasisId id) {
    switch (id) {
        case BasisId::G1bar: return "G1bar";
        case BasisId::G2bar: return "G2bar";
        case BasisId::G0: return "G0";
        case BasisId::G1: return "G1";
    }
    return "?";
}

BasisSet BasisSet::from_name(const std::string& name) {
    if (name == "mica2") {
        return {{BasisId::G1bar, BasisId::G2bar}};
    }
    if (name == "mica4") {
        return {{BasisId::G1bar, BasisId::G2bar, BasisId::G0, BasisId::G1}};
    }
    throw UnknownDistribution("unknown basis set: " + name);
}

void eval_basis(const BasisSet& b, double y, double* values, double* d1, double* d2) {
    for (int k = 0; k < b.p(); ++k) {
        const BasisEval e = eval_basis(b.ids[k], y);
        if (values) values[k] = e.value;
        if (d1) d1[k] = e.d1;
        if (d2) d2[k] = e.d2;
    }
}

TiltEval eval_tilt(const Vector& beta, const BasisSet& b, double y) {
    if (beta.size() != b.p()) {
        throw DimensionMismatch("tilt coefficient count does not match basis size");
    }
    TiltEval out{0.0, 0.0, 0.0};
    for (int k = 0; k < b.p(); ++k) {
        const BasisEval e = eval_basis(b.ids[k], y);
        out.f += beta[k] * e.value;
        out.f1 += beta[k] * e.d1;
        out.f2 += beta[k] * e.d2;
    }
    return out;
}

void basis_design(const BasisSet& b, const Vector& y, Matrix* values, Matrix* d1, Matrix* d2) {
    const Eigen::Index n = y.size();
    const int p = b.p();
    if (values) values->resize(n, p);
    if (d1) d1->resize(n, p);
    if (d2) d2->resize(n, p);
    ColumnEval ev(y);
    Vector v, c1, c2;
    for (int k = 0; k < p; ++k) {
        ev.fill(b.ids[k], values ? &v : nullptr, d1 ? &c1 : nullptr, d2 ? &c2 : nullptr);
        if (values) values->col(k) = v;
        if (d1) d1->col(k) = c1;
        if (d2) d2->col(k) = c2;
    }
}

void tilt_curves(const Vector& beta, const BasisSet& b, const Vector& y,
                 Vector* f, Vector* f1, Vector* f2) {
    if (beta.size() != b.p()) {
        throw DimensionMismatch("tilt coefficient count does not match basis size");
    }
    const Eigen::Index n = y.size();
    if (f) f->setZero(n);
    if (f1) f1->setZero(n);
    if (f2) f2->setZero(n);
    ColumnEval ev(y);
    Vector v, c1, c2;
    for (int k = 0; k < b.p(); ++k) {
        ev.fill(b.ids[k], f ? &v : nullptr, f1 ? &c1 : nullptr, f2 ? &c2 : nullptr);
        if (f) f->noalias() += beta[k] * v;
        if (f1) f1->noalias() += beta[k] * c1;
        if (f2) f2->noalias() += beta[k] * c2;
    }
}

}  // namespace mdiica
