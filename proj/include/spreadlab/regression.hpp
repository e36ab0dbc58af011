#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spreadlab/fano.hpp"
#include "spreadlab/instances.hpp"

namespace spreadlab {

struct Observation {
    Vector y;
    std::vector<Eigen::Index> inliers;  // rows with |eta| <= noise amplitude
};

/// y = X beta + eta with i.i.d. scaled symmetric-geometric noise.
Observation simulate_observation(const Eigen::Ref<const Matrix>& x,
                                 const Eigen::Ref<const Vector>& beta,
                                 const SymGeomParams& noise, std::uint64_t seed);

struct HuberFit {
    Vector estimate;
    bool converged = false;
    int iterations = 0;
};

/// Huber M-estimator by iteratively reweighted least squares. The default
/// tuning is the unit inlier threshold of the observation model (noise is
/// "small" when |eta| <= 1).
HuberFit estimate_huber(const Eigen::Ref<const Matrix>& x, const Eigen::Ref<const Vector>& y,
                        double tuning = 1.0, int max_iters = 200, double tol = 1e-10);

Vector estimate_least_squares(const Eigen::Ref<const Matrix>& x,
                              const Eigen::Ref<const Vector>& y);

/// Least squares restricted to the given rows.
Vector estimate_oracle_inlier_ls(const Eigen::Ref<const Matrix>& x,
                                 const Eigen::Ref<const Vector>& y,
                                 const std::vector<Eigen::Index>& inliers);

enum class Estimator { huber_irls, least_squares, oracle_inlier_ls };

std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& s);

struct HardnessResult {
    std::vector<double> param_errors;       // per seed, ||estimate - beta*||^2
    std::vector<double> prediction_errors;  // per seed, ||X(estimate - beta*)||^2 / n
    double mean_error = 0.0;
    double median_error = 0.0;
    double std_error_of_mean = 0.0;
    double gamma = 0.0;
    double sigma_used = 0.0;
    std::string design;
};

/// Build the construction at the gamma-calibrated amplitude, draw beta* per
/// seed, simulate, estimate, and aggregate errors. With gaussian_control the
/// design is replaced by a fresh Gaussian matrix (same shape, same noise, same
/// parameter scale), isolating the design's role in the hardness.
HardnessResult hardness_experiment(HardTag tag, Eigen::Index n, Eigen::Index d, double alpha,
                                   double gamma, Estimator estimator, int seeds,
                                   std::uint64_t seed, bool gaussian_control = false,
                                   double tuning = 1.0);

}  // namespace spreadlab
