#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "spreadlab/noise.hpp"
#include "spreadlab/numerics.hpp"
#include "spreadlab/rng.hpp"
#include "spreadlab/spreadness.hpp"

namespace spreadlab {

struct InstanceMeta {
    std::string tag;
    Eigen::Index n = 0, d = 0;
    double alpha = 0.0;
    double sigma = 0.0;
    double lambda = 0.0;
    Eigen::Index m_or_k = 0;
    std::uint64_t seed = 0;
    double separation = 0.0;  // exact for the replica construction, nominal otherwise
    SpreadSpec claimed_spread;
    bool dense_rotation = false;
};

/// A generated design together with its parameter-vector sampler and noise
/// law. The parameter set is exposed as a sampler, never materialized.
struct InstanceBundle {
    Matrix design;  // X, n x d, X^T X = n I for the hard constructions
    std::function<Vector(std::uint64_t)> beta_sampler;
    // Pairs of parameter vectors at (near-)minimal distance, when the
    // construction knows them; used by the lower-bound pipeline.
    std::function<std::pair<Vector, Vector>(std::uint64_t)> beta_pair_probe;
    SymGeomParams noise_spec;
    InstanceMeta meta;
};

/// Planted-direction instance: observed = [hidden | Gaussian] * rotation.
struct PlantedInstance {
    Matrix observed;  // n x d
    Vector hidden;    // n, lies in the column span of observed
    NBRParams params;
    Matrix rotation;  // d x d Haar orthogonal
};

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the R
/// diagonal sign-normalized positive.
Matrix haar_orthogonal(Eigen::Index d, Rng& rng);

Matrix gen_gaussian_null(Eigen::Index n, Eigen::Index d, std::uint64_t seed);

PlantedInstance gen_planted(Eigen::Index n, Eigen::Index d, const NBRParams& params,
                            std::uint64_t seed);

/// Rademacher-block construction: an m x d Rademacher matrix (m =
/// ceil(d / (50 alpha)), screened for spreadness), orthonormalized and scaled
/// so X^T X = n I, padded with zero rows. Parameter vectors are scaled
/// preimages of integer combinations Y v, v uniform in [d]^d, so noiseless
/// observations are exact integer multiples of sigma. Requires m >= d.
InstanceBundle gen_hard_d_over_alpha(Eigen::Index n, Eigen::Index d, double alpha, double sigma,
                                     std::uint64_t seed, bool dense_rotation = false);

/// Replicated-rotation construction: k = ceil(log(d) / (200 alpha^2)) stacked
/// copies of [Q; Q] for Haar Q, scaled so X^T X = n I, padded with zero rows.
/// The d parameter vectors map to disjoint 0/sigma patterns with exactly 2k
/// nonzeros each. Requires n >= 2 k d.
InstanceBundle gen_hard_logd_over_alpha2(Eigen::Index n, Eigen::Index d, double alpha, double sigma,
                                         std::uint64_t seed);

enum class CounterexampleKind {
    rip_not_spread,   // near-isometric but its span contains e_1
    spread_not_rip,   // well-spread span with two parallel columns
};

Matrix gen_counterexamples(CounterexampleKind kind, Eigen::Index n, Eigen::Index d,
                           std::uint64_t seed);

}  // namespace spreadlab
