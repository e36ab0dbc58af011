#include "spreadlab/regression.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "spreadlab/parallel.hpp"

namespace spreadlab {

Observation simulate_observation(const Eigen::Ref<const Matrix>& x,
                                 const Eigen::Ref<const Vector>& beta,
                                 const SymGeomParams& noise, std::uint64_t seed) {
    if (x.cols() != beta.size()) throw DimensionError("simulate_observation: shape mismatch");
    const auto eta = symgeom_sample(noise, static_cast<std::size_t>(x.rows()), seed);
    Observation obs;
    obs.y = x * beta;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double e = eta[static_cast<std::size_t>(i)];
        obs.y[i] += e;
        if (std::abs(e) <= noise.sigma) obs.inliers.push_back(i);
    }
    return obs;
}

namespace {

Vector weighted_ls(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                   const Vector& w) {
    const Matrix xw = x.array().colwise() * w.array();
    const Matrix gram = xw.transpose() * x;
    Eigen::LDLT<Matrix> ldlt(gram);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw SingularError("weighted least squares: normal equations not positive definite");
    return ldlt.solve(xw.transpose() * y);
}

}  // namespace

Vector estimate_least_squares(const Eigen::Ref<const Matrix>& x,
                              const Eigen::Ref<const Vector>& y) {
    if (x.rows() != y.size()) throw DimensionError("estimate_least_squares: shape mismatch");
    return weighted_ls(x, y, Vector::Ones(x.rows()));
}

HuberFit estimate_huber(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                        double tuning, int max_iters, double tol) {
    if (x.rows() != y.size()) throw DimensionError("estimate_huber: shape mismatch");
    if (!(tuning > 0.0)) throw ValidationError("estimate_huber: tuning must be positive");

    HuberFit fit;
    fit.estimate = estimate_least_squares(x, y);
    Vector w(x.rows());
    for (fit.iterations = 0; fit.iterations < max_iters; ++fit.iterations) {
        const Vector r = y - x * fit.estimate;
        for (Eigen::Index i = 0; i < r.size(); ++i) {
            const double ar = std::abs(r[i]);
            w[i] = ar <= tuning ? 1.0 : tuning / ar;
        }
        const Vector next = weighted_ls(x, y, w);
        const double step = (next - fit.estimate).lpNorm<Eigen::Infinity>();
        fit.estimate = next;
        if (step < tol * std::max(1.0, fit.estimate.lpNorm<Eigen::Infinity>())) {
            fit.converged = true;
            break;
        }
    }
    return fit;
}

Vector estimate_oracle_inlier_ls(const Eigen::Ref<const Matrix>& x,
                                 const Eigen::Ref<const Vector>& y,
                                 const std::vector<Eigen::Index>& inliers) {
    if (inliers.empty()) throw SingularError("estimate_oracle_inlier_ls: empty inlier set");
    Matrix xs(static_cast<Eigen::Index>(inliers.size()), x.cols());
    Vector ys(static_cast<Eigen::Index>(inliers.size()));
    for (std::size_t i = 0; i < inliers.size(); ++i) {
        xs.row(static_cast<Eigen::Index>(i)) = x.row(inliers[i]);
        ys[static_cast<Eigen::Index>(i)] = y[inliers[i]];
    }
    // Minimum-norm least squares: the inlier rows of a hard design may not
    // determine the parameter at all, and that failure is part of the measured
    // outcome rather than an error.
    return Eigen::CompleteOrthogonalDecomposition<Matrix>(xs).solve(ys);
}

std::string to_string(Estimator e) {
    switch (e) {
        case Estimator::huber_irls: return "huber-irls";
        case Estimator::least_squares: return "least-squares";
        case Estimator::oracle_inlier_ls: return "oracle-inlier-ls";
    }
    return "unknown";
}

Estimator estimator_from_string(const std::string& s) {
    if (s == "huber-irls") return Estimator::huber_irls;
    if (s == "least-squares") return Estimator::least_squares;
    if (s == "oracle-inlier-ls") return Estimator::oracle_inlier_ls;
    throw UnknownTagError("unknown estimator: " + s);
}

HardnessResult hardness_experiment(HardTag tag, Eigen::Index n, Eigen::Index d, double alpha,
                                   double gamma, Estimator estimator, int seeds,
                                   std::uint64_t seed, bool gaussian_control, double tuning) {
    if (seeds < 1) throw ValidationError("hardness_experiment: seeds must be >= 1");
    const double sigma = calibrate_sigma(tag, gamma, n, d, alpha);
    InstanceBundle bundle = tag == HardTag::d_over_alpha
                                ? gen_hard_d_over_alpha(n, d, alpha, sigma, seed)
                                : gen_hard_logd_over_alpha2(n, d, alpha, sigma, seed);
    if (gaussian_control) bundle.design = gen_gaussian_null(n, d, seed ^ 0xc0117011ull);

    HardnessResult res;
    res.gamma = gamma;
    res.sigma_used = sigma;
    res.design = gaussian_control ? "gaussian-control" : to_string(tag);
    res.param_errors.resize(static_cast<std::size_t>(seeds));
    res.prediction_errors.resize(static_cast<std::size_t>(seeds));

    parallel_for(static_cast<std::size_t>(seeds), [&](std::size_t s) {
        const std::uint64_t run_seed = seed + 1000003ull * (1 + static_cast<std::uint64_t>(s));
        const Vector beta_star = bundle.beta_sampler(run_seed);
        const Observation obs = simulate_observation(bundle.design, beta_star, bundle.noise_spec,
                                                     run_seed ^ 0x0b5e55ull);
        Vector estimate;
        switch (estimator) {
            case Estimator::huber_irls:
                estimate = estimate_huber(bundle.design, obs.y, tuning).estimate;
                break;
            case Estimator::least_squares:
                estimate = estimate_least_squares(bundle.design, obs.y);
                break;
            case Estimator::oracle_inlier_ls:
                estimate = estimate_oracle_inlier_ls(bundle.design, obs.y, obs.inliers);
                break;
        }
        const Vector diff = estimate - beta_star;
        res.param_errors[s] = diff.squaredNorm();
        res.prediction_errors[s] = (bundle.design * diff).squaredNorm() / static_cast<double>(n);
    });

    std::vector<double> sorted = res.param_errors;
    std::sort(sorted.begin(), sorted.end());
    res.median_error = sorted[sorted.size() / 2];
    double mean = 0.0;
    for (double e : res.param_errors) mean += e;
    mean /= static_cast<double>(seeds);
    res.mean_error = mean;
    double var = 0.0;
    for (double e : res.param_errors) var += (e - mean) * (e - mean);
    res.std_error_of_mean = seeds > 1 ? std::sqrt(var / (seeds - 1.0) / seeds) : 0.0;
    return res;
}

}  // namespace spreadlab
