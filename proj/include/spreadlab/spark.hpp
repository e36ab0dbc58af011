#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spreadlab/rational.hpp"
#include "spreadlab/spreadness.hpp"

namespace spreadlab {

/// Minimum number of linearly dependent columns, with an exact kernel witness
/// supported on those columns. No value means the columns are independent.
struct SparkResult {
    std::optional<Eigen::Index> spark;
    std::optional<std::vector<mpq_class>> witness;  // length n, A * witness = 0 exactly
};

/// Exact spark by subset enumeration in increasing size with early exit.
/// Any rank(A)+1 columns are dependent, so sizes beyond rank+1 never occur.
SparkResult compute_spark(const RationalMatrix& a, Eigen::Index max_cols = 22);

/// The reduction's threshold delta = 1 - 1 / (2 ((p n P^2)^p + 1)) with
/// P = max |entry|, p = rows, n = cols; exact rational.
mpq_class reduction_delta(const RationalMatrix& a);

/// Check both directions of the spark <-> kernel-spreadness equivalence on a
/// small instance: spark <= m must refute (m, delta)-spreadness of ker(A) via
/// the witness support, and spark > m must certify it by exact enumeration.
struct ReductionCheck {
    std::optional<Eigen::Index> spark;
    double delta = 0.0;
    std::string delta_rational;
    Eigen::Index kernel_dimension = 0;
    bool vacuous = false;  // trivial kernel: nothing to check
    bool consistent = false;
    std::string detail;
};

ReductionCheck reduction_consistency_check(const RationalMatrix& a, Eigen::Index m);

}  // namespace spreadlab
