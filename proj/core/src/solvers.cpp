#include "mdiica/solvers.hpp"

#include <cmath>

namespace mdiica {

namespace {

void check_whitened(const Matrix& data) {
    validate_data(data);
    const Eigen::Index n = data.rows();
    const Vector mean = data.colwise().mean();
    const Matrix centered = data.rowwise() - mean.transpose();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);
    const double dev = (cov - Matrix::Identity(cov.rows(), cov.cols())).cwiseAbs().maxCoeff();
    if (dev > 0.2) {
        throw NotWhitened("input covariance deviates from identity; whiten first");
    }
}

double ortho_deviation(const Matrix& w) {
    return (w * w.transpose() - Matrix::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
}

// 1 - min_i |<w_i new, w_i old>|, sign-invariant row-wise change measure.
double unmixing_change(const Matrix& w_new, const Matrix& w_old) {
    double min_cos = 1.0;
    for (Eigen::Index i = 0; i < w_new.rows(); ++i) {
        min_cos = std::min(min_cos, std::abs(w_new.row(i).dot(w_old.row(i))));
    }
    return 1.0 - min_cos;
}

Matrix initial_unmixing(const SolverConfig& cfg, Eigen::Index m) {
    if (cfg.w_init.size() > 0) {
        if (cfg.w_init.rows() != m || cfg.w_init.cols() != m) {
            throw DimensionMismatch("w_init dimensions must match the channel count");
        }
        return symmetric_decorrelation(cfg.w_init);
    }
    std::mt19937_64 rng(cfg.seed);
    return random_orthonormal(static_cast<int>(m), rng);
}

}  // namespace

SolverResult mdiica(const Matrix& data_whitened, const SolverConfig& cfg) {
    check_whitened(data_whitened);
    if (cfg.max_outer_iters < 1 || cfg.max_inner_iters < 1 || !(cfg.tol > 0.0)) {
        throw InvalidRange("solver configuration out of range");
    }
    const Eigen::Index n = data_whitened.rows();
    const Eigen::Index m = data_whitened.cols();
    const BasisSet basis = BasisSet::from_name(cfg.basis);
    const double lo = -cfg.grid_range, hi = cfg.grid_range;

    SolverResult res;
    res.w = initial_unmixing(cfg, m);
    res.tilts.assign(m, TiltModel{Vector::Zero(basis.p()), basis});
    res.ortho_dev_max = ortho_deviation(res.w);

    Matrix u(m, m);
    Vector y(n), f1(n), f2(n);
    for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
        const Matrix w_old = res.w;

        // Stage 1: refit per-component densities at the current projections.
        double kl_total = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            y.noalias() = data_whitened * res.w.row(i).transpose();
            const GridHistogram h = build_histogram(y, cfg.grid_l, lo, hi);
            res.tilts[i] = fit_tilt_wls(h, basis, cfg.ridge);
            kl_total += kl_min(res.tilts[i], h);
        }
        res.kl_trace.push_back(kl_total);
        ++res.iterations;

        // Stage 2: fixed-point sweeps with the tilts held fixed.
        for (int inner = 0; inner < cfg.max_inner_iters; ++inner) {
            for (Eigen::Index i = 0; i < m; ++i) {
                y.noalias() = data_whitened * res.w.row(i).transpose();
                tilt_curves(res.tilts[i].beta, basis, y, nullptr, &f1, &f2);
                u.row(i) = (data_whitened.transpose() * f1).transpose() / static_cast<double>(n)
                         - f2.mean() * res.w.row(i);
            }
            res.w = symmetric_decorrelation(u);
        }
        res.ortho_dev_max = std::max(res.ortho_dev_max, ortho_deviation(res.w));

        if (unmixing_change(res.w, w_old) < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

SolverResult fastica_single(const Matrix& data_whitened, BasisId nonlinearity,
                            const SolverConfig& cfg) {
    check_whitened(data_whitened);
    if (nonlinearity != BasisId::G0 && nonlinearity != BasisId::G1) {
        throw UnknownDistribution("baseline nonlinearity must be G0 or G1");
    }
    if (cfg.max_outer_iters < 1 || !(cfg.tol > 0.0)) {
        throw InvalidRange("solver configuration out of range");
    }
    const Eigen::Index n = data_whitened.rows();
    const Eigen::Index m = data_whitened.cols();
    const double baseline = gaussian_expectation(nonlinearity);
    const BasisSet single{{nonlinearity}};
    const Vector one = Vector::Ones(1);

    SolverResult res;
    res.w = initial_unmixing(cfg, m);
    res.ortho_dev_max = ortho_deviation(res.w);

    Matrix u(m, m);
    Vector y(n), g(n), g1(n), g2(n);
    for (int iter = 0; iter < cfg.max_outer_iters; ++iter) {
        const Matrix w_old = res.w;

        double contrast = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            y.noalias() = data_whitened * res.w.row(i).transpose();
            tilt_curves(one, single, y, &g, &g1, &g2);
            const double gap = g.mean() - baseline;
            contrast += gap * gap;
            u.row(i) = (data_whitened.transpose() * g1).transpose() / static_cast<double>(n)
                     - g2.mean() * res.w.row(i);
        }
        res.kl_trace.push_back(contrast);
        ++res.iterations;

        res.w = symmetric_decorrelation(u);
        res.ortho_dev_max = std::max(res.ortho_dev_max, ortho_deviation(res.w));

        if (unmixing_change(res.w, w_old) < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

Matrix recover_sources(const Matrix& w, const WhiteningTransform& t, const Matrix& raw) {
    if (raw.cols() != t.mean.size() || w.cols() != t.whitener.rows()) {
        throw DimensionMismatch("unmixing, whitening, and data dimensions disagree");
    }
    return (raw.rowwise() - t.mean.transpose()) * t.whitener.transpose() * w.transpose();
}

}  // namespace mdiica
