#pragma once

#include <cstdint>
#include <string>

#include "spreadlab/instances.hpp"
#include "spreadlab/noise.hpp"

namespace spreadlab {

/// Inputs to the multi-hypothesis estimation lower bound: a packing with
/// pairwise distance >= separation, its log-cardinality, and the largest
/// pairwise KL divergence between the induced observation laws.
struct FanoInput {
    double separation = 0.0;
    double log_cardinality = 0.0;
    double max_kl = 0.0;
};

/// separation^2/4 * (1 - (max_kl + log 2) / log_cardinality), clamped at 0.
double fano_bound(const FanoInput& input);

enum class HardTag { d_over_alpha, logd_over_alpha2 };

std::string to_string(HardTag tag);
HardTag hard_tag_from_string(const std::string& s);

/// Exact KL between the observation laws of beta and beta_prime under the
/// bundle's i.i.d. scaled symmetric-geometric noise: the per-coordinate shifts
/// X(beta - beta') / sigma must be integers (checked to 1e-6), and the chain
/// rule reduces the divergence to a sum of integer-shift terms.
double construction_kl(const InstanceBundle& bundle, const Vector& beta, const Vector& beta_prime);

/// Noise amplitude that makes the construction's lower bound hit gamma.
double calibrate_sigma(HardTag tag, double gamma, Eigen::Index n, Eigen::Index d, double alpha);

struct LowerBoundReport {
    double bound = 0.0;
    double kl_budget_used = 0.0;   // the value fed to the Fano bound
    double kl_sampled_max = 0.0;   // max over sampled pairs
    double kl_analytic_cap = 0.0;  // uniform cap (d-over-alpha only; 0 otherwise)
    bool analytic_binding = false;
    std::string construction;
    double sigma_used = 0.0;
    double gamma_target = 0.0;
    double separation = 0.0;
    double log_cardinality = 0.0;
    Eigen::Index pairs_sampled = 0;
    bool target_met = false;
};

/// Build the bundle at the calibrated amplitude, measure the packing KL
/// (exact for the replica construction; sampled pairs plus the analytic cap
/// for the Rademacher-block one), and evaluate the bound.
LowerBoundReport lower_bound_pipeline(HardTag tag, Eigen::Index n, Eigen::Index d, double alpha,
                                      double gamma, Eigen::Index pairs_to_sample,
                                      std::uint64_t seed);

}  // namespace spreadlab
