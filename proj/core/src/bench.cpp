#include "mdiica/bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace mdiica {

Family family_from_name(const std::string& name) {
    if (name == "gaussian") return Family::gaussian;
    if (name == "uniform") return Family::uniform;
    if (name == "exponential") return Family::exponential;
    if (name == "laplace") return Family::laplace;
    if (name == "student_t") return Family::student_t;
    if (name == "gmm") return Family::gmm;
    throw UnknownDistribution("unknown distribution family: " + name);
}

const char* family_name(Family f) {
    switch (f) {
        case Family::gaussian: return "gaussian";
        case Family::uniform: return "uniform";
        case Family::exponential: return "exponential";
        case Family::laplace: return "laplace";
        case Family::student_t: return "student_t";
        case Family::gmm: return "gmm";
    }
    return "?";
}

namespace {

struct GmmMoments {
    double mean;
    double sd;
};

GmmMoments gmm_moments(const SourceSpec& spec) {
    if (spec.weights.empty() || spec.weights.size() != spec.means.size() ||
        spec.weights.size() != spec.sigmas.size()) {
        throw UnknownDistribution("mixture needs matching weights, means, sigmas");
    }
    double wsum = 0.0, mean = 0.0, second = 0.0;
    for (std::size_t k = 0; k < spec.weights.size(); ++k) {
        if (!(spec.weights[k] > 0.0) || !(spec.sigmas[k] > 0.0)) {
            throw UnknownDistribution("mixture weights and sigmas must be positive");
        }
        wsum += spec.weights[k];
        mean += spec.weights[k] * spec.means[k];
        second += spec.weights[k] *
                  (spec.means[k] * spec.means[k] + spec.sigmas[k] * spec.sigmas[k]);
    }
    mean /= wsum;
    second /= wsum;
    const double var = second - mean * mean;
    if (!(var > 0.0)) {
        throw UnknownDistribution("mixture has zero variance");
    }
    return {mean, std::sqrt(var)};
}

}  // namespace

double sample_source(const SourceSpec& spec, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    switch (spec.family) {
        case Family::gaussian:
            return normal(rng);
        case Family::uniform: {
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            return (unif(rng) - 0.5) * std::sqrt(12.0);
        }
        case Family::exponential: {
            std::exponential_distribution<double> expo(1.0);
            return expo(rng) - 1.0;
        }
        case Family::laplace: {
            // sign times unit exponential; variance 2
            std::exponential_distribution<double> expo(1.0);
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            const double mag = expo(rng);
            const double sgn = unif(rng) < 0.5 ? -1.0 : 1.0;
            return sgn * mag / std::sqrt(2.0);
        }
        case Family::student_t: {
            if (!(spec.dof > 2.0)) {
                throw UnknownDistribution("student_t needs dof > 2 for unit variance");
            }
            std::student_t_distribution<double> st(spec.dof);
            return st(rng) / std::sqrt(spec.dof / (spec.dof - 2.0));
        }
        case Family::gmm: {
            const GmmMoments mom = gmm_moments(spec);
            std::discrete_distribution<int> pick(spec.weights.begin(), spec.weights.end());
            const int k = pick(rng);
            const double x = spec.means[k] + spec.sigmas[k] * normal(rng);
            return (x - mom.mean) / mom.sd;
        }
    }
    throw UnknownDistribution("unhandled distribution family");
}

Matrix generate_sources(const std::vector<SourceSpec>& specs, long n, std::mt19937_64& rng) {
    if (n < 1) {
        throw EmptyInput("need at least one sample");
    }
    Matrix s(n, static_cast<Eigen::Index>(specs.size()));
    for (std::size_t i = 0; i < specs.size(); ++i) {
        for (long j = 0; j < n; ++j) {
            s(j, static_cast<Eigen::Index>(i)) = sample_source(specs[i], rng);
        }
    }
    return s;
}

Matrix random_mixing(int m, std::mt19937_64& rng) {
    if (m < 2) {
        throw DimensionMismatch("need dimension >= 2");
    }
    std::normal_distribution<double> normal(0.0, 1.0);
    for (;;) {
        Matrix a(m, m);
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                a(i, j) = normal(rng);
            }
        }
        Eigen::JacobiSVD<Matrix> svd(a);
        const double smin = svd.singularValues()[m - 1];
        if (smin > 0.0 && svd.singularValues()[0] / smin <= 1e3) {
            return a;
        }
    }
}

double amari_metric(const Matrix& w, const Matrix& w0_true) {
    if (w.rows() != w.cols() || w0_true.rows() != w0_true.cols() || w.rows() != w0_true.rows()) {
        throw DimensionMismatch("both matrices must be square with equal size");
    }
    Eigen::FullPivLU<Matrix> lu(w0_true);
    if (!lu.isInvertible()) {
        throw Singular("reference unmixing matrix is not invertible");
    }
    const Matrix r = (w * lu.inverse()).cwiseAbs();
    const Eigen::Index m = r.rows();
    double rows = 0.0, cols = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        rows += r.row(i).sum() / r.row(i).maxCoeff() - 1.0;
        cols += r.col(i).sum() / r.col(i).maxCoeff() - 1.0;
    }
    const double raw = (rows + cols) / (2.0 * static_cast<double>(m));
    return raw / static_cast<double>(m - 1);
}

std::uint64_t trial_seed(std::uint64_t base, std::size_t dist_index, int rep) {
    std::uint64_t s = splitmix64(base);
    s = splitmix64(s ^ (0x1000003ULL * (static_cast<std::uint64_t>(dist_index) + 1)));
    s = splitmix64(s ^ (0x100000001b3ULL * (static_cast<std::uint64_t>(rep) + 1)));
    return s;
}

SolverResult run_method(const std::string& method, const Matrix& data_whitened,
                        const SolverConfig& cfg) {
    if (method == "mica2" || method == "mica4") {
        SolverConfig c = cfg;
        c.basis = method;
        return mdiica(data_whitened, c);
    }
    if (method == "fastica-g0") {
        return fastica_single(data_whitened, BasisId::G0, cfg);
    }
    if (method == "fastica-g1") {
        return fastica_single(data_whitened, BasisId::G1, cfg);
    }
    throw UnknownDistribution("unknown method: " + method);
}

namespace {

struct TrialTask {
    std::size_t dist_index;
    int rep;
};

}  // namespace

std::vector<TrialResult> run_study(const StudyConfig& cfg, int jobs) {
    if (cfg.reps < 1) {
        throw InvalidRange("need at least one replication");
    }
    if (cfg.methods.empty() || cfg.distributions.empty()) {
        throw InvalidRange("need at least one method and one distribution");
    }

    std::vector<TrialTask> tasks;
    tasks.reserve(cfg.distributions.size() * static_cast<std::size_t>(cfg.reps));
    for (std::size_t d = 0; d < cfg.distributions.size(); ++d) {
        for (int rep = 0; rep < cfg.reps; ++rep) {
            tasks.push_back({d, rep});
        }
    }

    const std::size_t n_methods = cfg.methods.size();
    std::vector<TrialResult> results(tasks.size() * n_methods);

    auto run_trial = [&](std::size_t t) {
        const auto [d, rep] = tasks[t];
        const DistributionEntry& entry = cfg.distributions[d];
        const std::uint64_t seed = trial_seed(cfg.seed, d, rep);
        TrialResult* out = &results[t * n_methods];

        try {
            std::mt19937_64 rng(seed);
            const Matrix s = generate_sources(entry.sources, cfg.n, rng);
            const int m = static_cast<int>(entry.sources.size());
            const Matrix a = random_mixing(m, rng);
            const Matrix x = s * a.transpose();
            const WhiteningTransform wt = fit_whitening(x);
            const Matrix xw = apply_whitening(wt, x);
            // Ground truth in whitened coordinates: the inverse of the
            // whitened mixing, rows normalized.
            Matrix w0 = (wt.whitener * a).inverse();
            for (int i = 0; i < m; ++i) {
                w0.row(i) /= w0.row(i).norm();
            }

            SolverConfig scfg;
            scfg.max_outer_iters = cfg.max_outer_iters;
            scfg.max_inner_iters = cfg.max_inner_iters;
            scfg.tol = cfg.tol;
            scfg.grid_l = cfg.grid_l;
            scfg.grid_range = cfg.grid_range;
            scfg.ridge = cfg.ridge;
            scfg.seed = seed;

            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                TrialResult& tr = out[mi];
                tr.method = cfg.methods[mi];
                tr.spec_id = entry.label;
                tr.rep = rep;
                tr.seed = seed;
                try {
                    const auto t0 = std::chrono::steady_clock::now();
                    const SolverResult res = run_method(cfg.methods[mi], xw, scfg);
                    const auto t1 = std::chrono::steady_clock::now();
                    tr.elapsed_ms = cfg.timing
                        ? std::chrono::duration<double, std::milli>(t1 - t0).count()
                        : 0.0;
                    tr.amari = amari_metric(res.w, w0);
                    tr.converged = res.converged;
                } catch (const std::exception& e) {
                    tr.failed = true;
                    tr.error = e.what();
                    tr.amari = std::numeric_limits<double>::quiet_NaN();
                }
            }
        } catch (const std::exception& e) {
            for (std::size_t mi = 0; mi < n_methods; ++mi) {
                TrialResult& tr = out[mi];
                tr.method = cfg.methods[mi];
                tr.spec_id = entry.label;
                tr.rep = rep;
                tr.seed = seed;
                tr.failed = true;
                tr.error = e.what();
                tr.amari = std::numeric_limits<double>::quiet_NaN();
            }
        }
    };

    if (jobs < 1) {
        jobs = 1;
    }
    const std::size_t workers = std::min<std::size_t>(jobs, tasks.size());
    if (workers <= 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            run_trial(t);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t k = 0; k < workers; ++k) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= tasks.size()) {
                        return;
                    }
                    run_trial(t);
                }
            });
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    return results;
}

}  // namespace mdiica
