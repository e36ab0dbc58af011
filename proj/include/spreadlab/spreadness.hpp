#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spreadlab/numerics.hpp"

namespace spreadlab {

/// Query triple: subset budget m, threshold delta, norm index p.
struct SpreadSpec {
    Eigen::Index m = 1;
    double delta = 0.5;
    double p = 2.0;
};

enum class SpreadMethod { exact_enumeration, heuristic, distortion_certificate };

std::string to_string(SpreadMethod m);

/// Outcome of a spreadness query.
///
/// `is_spread` is one-sided for non-exact methods: heuristic true means "no
/// violation found", distortion-certificate false means "certificate failed",
/// neither is a proof. `certified` marks conclusions that are proven
/// (exact verdicts, verified heuristic refutations, successful certificates).
/// Refuting verdicts always carry a witness, recomputed from scratch.
struct SpreadVerdict {
    bool is_spread = false;
    bool certified = false;
    SpreadMethod method = SpreadMethod::exact_enumeration;
    double achieved_ratio = 0.0;
    std::optional<Vector> witness_vector;                 // ambient-space vector
    std::optional<std::vector<Eigen::Index>> witness_set; // 0-based indices
};

/// Largest fraction of the l_p mass of v attainable on at most m coordinates,
/// attained on the m largest-magnitude coordinates (ties: lowest index).
std::pair<double, std::vector<Eigen::Index>> vector_spread_ratio(
    const Eigen::Ref<const Vector>& v, Eigen::Index m, double p);

/// Exact (m, delta)-l2 decision for the column span of an orthonormal basis,
/// by enumerating all row subsets of size exactly m (ratios are monotone in
/// the subset, so size m suffices).
SpreadVerdict subspace_spread_exact(const Eigen::Ref<const Matrix>& basis, const SpreadSpec& spec,
                                    std::uint64_t enumeration_cap = 2000000);

/// Heuristic refutation search by alternating maximization: from a start
/// vector, pick the m rows where Bu is largest, then the top right-singular
/// vector of that row block, and repeat. Never certifies; refutations are
/// sound (ratio re-verified). Extra deterministic starts (supplied hints,
/// largest rows) are added to the random restarts.
SpreadVerdict spread_witness_search(const Eigen::Ref<const Matrix>& basis, const SpreadSpec& spec,
                                    int restarts, std::uint64_t seed,
                                    const std::vector<Vector>& hints = {});

/// Two-sided distortion record for a subspace of R^n: lower is a found value,
/// upper a certified bound (trivially n^(1/p-1/q) unless merged with a
/// certificate).
struct DistortionBound {
    double p = 2.0;
    double q = 4.0;
    double lower = 1.0;
    double upper = 1.0;
    Eigen::Index n = 0;
};

/// Convert a certified distortion upper bound into a spreadness certificate.
/// query.p == bound.p uses the l_p conversion; query.p == bound.q the l_q one.
/// One-sided: never refutes.
SpreadVerdict spread_from_distortion(const DistortionBound& bound, Eigen::Index n,
                                     const SpreadSpec& query);

/// Lower-bound the l_p-vs-l_q distortion of the column span by projected
/// gradient ascent on ||Bu||_q / ||Bu||_p over unit u, multiple restarts.
DistortionBound distortion_lower_bound(const Eigen::Ref<const Matrix>& basis, double p, double q,
                                       int restarts, std::uint64_t seed);

/// Shared helper: indices of the m largest |v_i| (ties: lowest index).
std::vector<Eigen::Index> top_m_indices(const Eigen::Ref<const Vector>& v, Eigen::Index m);

}  // namespace spreadlab
