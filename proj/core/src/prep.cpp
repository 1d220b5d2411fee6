#include "mdiica/prep.hpp"

#include <cmath>

namespace mdiica {

namespace {

constexpr double kRelativeRankEps = 1e-10;

}  // namespace

void validate_data(const Matrix& data) {
    if (data.rows() < 2 || data.cols() < 2) {
        throw DimensionMismatch("need at least 2 samples and 2 channels");
    }
    if (data.rows() <= data.cols()) {
        throw DimensionMismatch("need more samples than channels");
    }
    if (!data.allFinite()) {
        throw InvalidRange("data contains non-finite entries");
    }
}

WhiteningTransform fit_whitening(const Matrix& data) {
    validate_data(data);
    const Eigen::Index n = data.rows();
    WhiteningTransform t;
    t.mean = data.colwise().mean();
    const Matrix centered = data.rowwise() - t.mean.transpose();
    const Matrix cov = centered.transpose() * centered / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    const Vector evals = es.eigenvalues();  // ascending
    const double eps = kRelativeRankEps * evals[evals.size() - 1];
    if (!(evals[0] > eps)) {
        throw RankDeficient("sample covariance is numerically singular");
    }
    const Vector rsqrt = evals.array().max(eps).rsqrt();
    const Vector sqrtv = evals.array().max(eps).sqrt();
    t.whitener = rsqrt.asDiagonal() * es.eigenvectors().transpose();
    t.dewhitener = es.eigenvectors() * sqrtv.asDiagonal();
    return t;
}

Matrix apply_whitening(const WhiteningTransform& t, const Matrix& data) {
    if (data.cols() != t.mean.size()) {
        throw DimensionMismatch("channel count does not match fitted transform");
    }
    return (data.rowwise() - t.mean.transpose()) * t.whitener.transpose();
}

Matrix symmetric_decorrelation(const Matrix& w) {
    if (w.rows() != w.cols()) {
        throw DimensionMismatch("decorrelation expects a square matrix");
    }
    const Matrix wwt = w * w.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix> es(wwt);
    const Vector evals = es.eigenvalues();
    const double eps = kRelativeRankEps * evals[evals.size() - 1];
    if (!(evals[0] > eps)) {
        throw RankDeficient("matrix is numerically singular, cannot orthonormalize");
    }
    const Vector rsqrt = evals.array().max(eps).rsqrt();
    return es.eigenvectors() * rsqrt.asDiagonal() * es.eigenvectors().transpose() * w;
}

Matrix random_orthonormal(int m, std::mt19937_64& rng) {
    if (m < 2) {
        throw DimensionMismatch("need dimension >= 2");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            g(i, j) = normal(rng);
        }
    }
    return symmetric_decorrelation(g);
}

}  // namespace mdiica
