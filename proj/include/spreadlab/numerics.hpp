#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>

#include "spreadlab/errors.hpp"

namespace spreadlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Extreme singular values plus solver diagnostics.
struct SpectrumSummary {
    double sigma_min = 0.0;
    double sigma_max = 0.0;
    int iterations = 0;
    double residual = 0.0;  // max relative eigen-residual of the extreme pairs
};

/// Orthonormal basis of the column span via Householder QR with column
/// pivoting. Column signs are normalized (largest-magnitude entry positive)
/// so results are deterministic.
///
/// Throws RankDeficientError when a pivot falls below tol times the largest.
Matrix orthonormal_basis(const Eigen::Ref<const Matrix>& m, double tol = 1e-10);

/// sigma_min and sigma_max through the Gram matrix of the thin side.
SpectrumSummary extreme_singular_values(const Eigen::Ref<const Matrix>& m);

using MatVec = std::function<Vector(const Vector&)>;

struct TopEigen {
    double value = 0.0;
    Vector vector;
    int iterations = 0;
    double residual = 0.0;
};

/// Largest eigenvalue of a symmetric PSD operator given only as a matvec.
/// Power iteration from `restarts` independent random starts; returns the
/// maximum Rayleigh quotient among converged runs, with its unit vector.
/// The returned value is a lower-bound-style estimate; callers needing an
/// upper bound must inflate it (see the certification module).
TopEigen top_eigenvalue_symmetric(const MatVec& apply, Eigen::Index dim, double tol,
                                  int max_iters = 10000, std::uint64_t seed = 0,
                                  int restarts = 3);

}  // namespace spreadlab
