#pragma once

#include <cstdint>
#include <gmpxx.h>
#include <vector>

#include "spreadlab/noise.hpp"
#include "spreadlab/numerics.hpp"

namespace spreadlab {

struct LowDegParams {
    Eigen::Index n = 0;
    Eigen::Index d = 0;
    double rho = 0.1;
    double sigma = 0.0;
    int degree = 4;       // D
    int degree_cap = 64;  // refuse degrees beyond this
};

enum class LowDegMode { exact_dp, paper_bound };

struct DegreeContribution {
    int k = 0;
    double sphere_moment = 0.0;
    double inner_sum = 0.0;
    double contribution = 0.0;
};

struct LowDegReport {
    double total = 1.0;
    std::vector<DegreeContribution> per_degree;
    LowDegMode method = LowDegMode::exact_dp;
    bool sigma_regime_ok = true;  // sigma^2 <= 1/(D-1)
};

/// Involution counts T(0..k_max): T(n) = T(n-1) + (n-1) T(n-2). Equals the sum
/// of absolute coefficients of the degree-n (physicists-normalized-free)
/// probabilists' Hermite polynomial.
std::vector<mpz_class> telephone_numbers(int k_max);

/// Exact integer coefficients c_0..c_k of He_k (probabilists' convention,
/// He_{k+1} = x He_k - k He_{k-1}).
std::vector<mpz_class> hermite_coefficients(int k);

/// E h_k(x) for x ~ NBR(rho, sigma), h_k the normalized Hermite polynomial
/// He_k / sqrt(k!). Zero for odd k by symmetry. Degrees above 30 run through a
/// signed log-domain accumulator.
double hermite_moment(const NBRParams& params, int k);

/// Exact E <u,u'>^k for independent uniform unit vectors in R^d:
/// 0 for odd k, prod_{i<k/2} (2i+1)/(d+2i) for even k.
double sphere_moment(Eigen::Index d, int k);

/// The coarser bound (k/d)^(k/2) used by the bound-chain mode.
double sphere_moment_bound(Eigen::Index d, int k);

/// Sum over compositions alpha of k into n parts of prod_i (E h_{alpha_i})^2,
/// evaluated in the log domain by conditioning on the number of nonzero parts
/// (admissible parts are the even integers >= 4).
double inner_sum(const NBRParams& params, Eigen::Index n, int k, int cap = 64);

LowDegReport lowdeg_norm(const LowDegParams& params, LowDegMode mode);

struct DistinguishResult {
    double mean_planted = 0.0;
    double mean_null = 0.0;
    double pooled_std = 0.0;
    double separation = 0.0;
    int trials = 0;
};

/// Monte-Carlo companion experiment: the degree-4 row-leverage statistic
/// s(A) = sum_i ||row_i of the orthonormalized A||^4 under the null and the
/// planted law, with the standardized mean separation.
DistinguishResult degree4_distinguish_experiment(Eigen::Index n, Eigen::Index d,
                                                 const NBRParams& params, int trials,
                                                 std::uint64_t seed);

}  // namespace spreadlab
