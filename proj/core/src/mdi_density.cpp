#include "mdiica/mdi_density.hpp"

#include <cmath>

namespace mdiica {

double gaussian_pdf(double y) {
    const double inv_sqrt2pi = 0.3989422804014327;
    return inv_sqrt2pi * std::exp(-0.5 * y * y);
}

GridHistogram build_histogram(const Vector& samples, int l_bins, double lo, double hi) {
    if (samples.size() == 0) {
        throw EmptyInput("histogram needs at least one sample");
    }
    if (l_bins < 2) {
        throw InvalidRange("histogram needs at least two bins");
    }
    if (!(lo < hi)) {
        throw InvalidRange("histogram range is empty");
    }
    GridHistogram h;
    h.step = (hi - lo) / l_bins;
    h.centers = Vector::LinSpaced(l_bins, lo + 0.5 * h.step, hi - 0.5 * h.step);
    h.freqs = Vector::Zero(l_bins);
    h.n_samples = static_cast<long>(samples.size());
    for (Eigen::Index j = 0; j < samples.size(); ++j) {
        const double y = samples[j];
        if (!(y > lo) || y > hi) {
            ++h.n_clipped;
            continue;
        }
        // bin l covers (lo + l*step, lo + (l+1)*step]
        long l = static_cast<long>(std::ceil((y - lo) / h.step)) - 1;
        if (l < 0) l = 0;
        if (l >= l_bins) l = l_bins - 1;
        h.freqs[l] += 1.0;
    }
    h.freqs /= static_cast<double>(h.n_samples);
    return h;
}

TiltModel fit_tilt_wls(const GridHistogram& h, const BasisSet& basis, double ridge) {
    const int p = basis.p();
    Matrix design;
    basis_design(basis, h.centers, &design, nullptr, nullptr);

    Vector w(h.centers.size());
    for (Eigen::Index l = 0; l < h.centers.size(); ++l) {
        w[l] = h.step * gaussian_pdf(h.centers[l]);
    }

    // D'WD + ridge*I  and  D'W r with r = (q - w)/w, so D'W r = D'(q - w).
    Matrix normal = design.transpose() * w.asDiagonal() * design;
    normal.diagonal().array() += ridge;
    const Vector rhs = design.transpose() * (h.freqs - w);

    Eigen::JacobiSVD<Matrix> svd(normal, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smax = svd.singularValues()[0];
    const double smin = svd.singularValues()[p - 1];
    if (!(smin > 0.0) || smax / smin > 1e12) {
        throw SingularDesign("tilt normal equations are numerically singular");
    }

    TiltModel model;
    model.basis = basis;
    model.beta = svd.solve(rhs);
    return model;
}

namespace {

// Shared accumulation for kl_min / partition_integral.
struct TiltSums {
    double qf = 0.0;       // sum q_l f_l
    double zmass = 0.0;    // sum w_l exp(clamp(f_l))
    bool clamped = false;
};

TiltSums tilt_sums(const TiltModel& model, const GridHistogram& h) {
    Vector f;
    tilt_curves(model.beta, model.basis, h.centers, &f, nullptr, nullptr);
    TiltSums s;
    for (Eigen::Index l = 0; l < h.centers.size(); ++l) {
        double fl = f[l];
        s.qf += h.freqs[l] * fl;
        if (fl > 30.0 || fl < -30.0) {
            s.clamped = true;
            fl = fl > 30.0 ? 30.0 : -30.0;
        }
        s.zmass += h.step * gaussian_pdf(h.centers[l]) * std::exp(fl);
    }
    return s;
}

}  // namespace

double kl_min(const TiltModel& model, const GridHistogram& h, bool* clamped) {
    const TiltSums s = tilt_sums(model, h);
    if (clamped) *clamped = s.clamped;
    return s.qf - s.zmass + 1.0;
}

double partition_integral(const TiltModel& model, const GridHistogram& h, bool* clamped) {
    const TiltSums s = tilt_sums(model, h);
    if (clamped) *clamped = s.clamped;
    return s.zmass;
}

}  // namespace mdiica
