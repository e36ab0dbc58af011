#include "spreadlab/numerics.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "spreadlab/rng.hpp"

namespace spreadlab {

Matrix orthonormal_basis(const Eigen::Ref<const Matrix>& m, double tol) {
    const Eigen::Index rows = m.rows(), cols = m.cols();
    if (rows < 1 || cols < 1) throw ValidationError("orthonormal_basis: empty matrix");
    if (rows < cols) throw ValidationError("orthonormal_basis: needs rows >= cols");
    if (!m.allFinite()) throw ValidationError("orthonormal_basis: non-finite entries");

    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    const Matrix& r = qr.matrixR();
    const double pivot0 = std::abs(r(0, 0));
    if (pivot0 == 0.0) throw RankDeficientError("orthonormal_basis: zero matrix");
    for (Eigen::Index k = 0; k < cols; ++k) {
        if (std::abs(r(k, k)) < tol * pivot0)
            throw RankDeficientError("orthonormal_basis: rank-deficient input (pivot " +
                                     std::to_string(k) + ")");
    }

    Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
    // Deterministic sign convention per column.
    for (Eigen::Index j = 0; j < cols; ++j) {
        Eigen::Index imax = 0;
        q.col(j).cwiseAbs().maxCoeff(&imax);
        if (q(imax, j) < 0) q.col(j) = -q.col(j);
    }
    return q;
}

SpectrumSummary extreme_singular_values(const Eigen::Ref<const Matrix>& m) {
    if (m.rows() < 1 || m.cols() < 1) throw ValidationError("extreme_singular_values: empty matrix");
    if (!m.allFinite()) throw ValidationError("extreme_singular_values: non-finite entries");

    const bool thin = m.cols() <= m.rows();
    const Matrix gram = thin ? Matrix(m.transpose() * m) : Matrix(m * m.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    if (es.info() != Eigen::Success)
        throw NoConvergenceError("extreme_singular_values: eigensolver failed");

    const Eigen::Index k = gram.rows();
    const double lam_min = std::max(es.eigenvalues()(0), 0.0);
    const double lam_max = std::max(es.eigenvalues()(k - 1), 0.0);

    SpectrumSummary out;
    out.sigma_min = std::sqrt(lam_min);
    out.sigma_max = std::sqrt(lam_max);
    out.iterations = 0;  // direct dense solve
    const double scale = std::max(lam_max, 1e-300);
    const double r_min = (gram * es.eigenvectors().col(0) - es.eigenvalues()(0) * es.eigenvectors().col(0)).norm();
    const double r_max = (gram * es.eigenvectors().col(k - 1) - es.eigenvalues()(k - 1) * es.eigenvectors().col(k - 1)).norm();
    out.residual = std::max(r_min, r_max) / scale;
    return out;
}

TopEigen top_eigenvalue_symmetric(const MatVec& apply, Eigen::Index dim, double tol,
                                  int max_iters, std::uint64_t seed, int restarts) {
    if (dim < 1) throw ValidationError("top_eigenvalue_symmetric: dim must be >= 1");
    if (tol <= 0) throw ValidationError("top_eigenvalue_symmetric: tol must be positive");

    TopEigen best;
    bool any_converged = false;

    for (int r = 0; r < restarts; ++r) {
        Rng rng = Rng::stream(seed, "power-iteration-" + std::to_string(r));
        Vector v = rng.unit_vector(dim);
        double lambda = 0.0;
        double residual = 0.0;
        bool converged = false;
        int it = 0;
        for (; it < max_iters; ++it) {
            Vector w = apply(v);
            lambda = v.dot(w);
            residual = (w - lambda * v).norm();
            if (residual <= tol * std::max(std::abs(lambda), 1e-300)) {
                converged = true;
                break;
            }
            const double wn = w.norm();
            if (wn == 0.0) {  // v is in the kernel; the operator restricted here is 0
                lambda = 0.0;
                residual = 0.0;
                converged = true;
                break;
            }
            v = w / wn;
        }
        if (converged && (!any_converged || lambda > best.value)) {
            any_converged = true;
            best.value = lambda;
            best.vector = v;
            best.iterations = it;
            best.residual = residual;
        }
    }

    if (!any_converged)
        throw NoConvergenceError("top_eigenvalue_symmetric: no restart converged within " +
                                 std::to_string(max_iters) + " iterations");
    return best;
}

}  // namespace spreadlab
