#include "spreadlab/instances.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <memory>

namespace spreadlab {

Matrix haar_orthogonal(Eigen::Index d, Rng& rng) {
    const Matrix g = rng.normal_matrix(d, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

Matrix gen_gaussian_null(Eigen::Index n, Eigen::Index d, std::uint64_t seed) {
    if (n < 1 || d < 1) throw ValidationError("gen_gaussian_null: dimensions must be >= 1");
    Rng rng = Rng::stream(seed, "gaussian-null");
    return rng.normal_matrix(n, d);
}

PlantedInstance gen_planted(Eigen::Index n, Eigen::Index d, const NBRParams& params,
                            std::uint64_t seed) {
    params.validate();
    if (d < 1 || d > n) throw ValidationError("gen_planted: requires 1 <= d <= n");
    PlantedInstance inst;
    inst.params = params;
    inst.hidden = nbr_sample(params, static_cast<std::size_t>(n), seed);
    Rng rng = Rng::stream(seed, "planted-fill");
    Matrix y(n, d);
    y.col(0) = inst.hidden;
    if (d > 1) y.rightCols(d - 1) = rng.normal_matrix(n, d - 1);
    Rng qrng = Rng::stream(seed, "planted-rotation");
    inst.rotation = haar_orthogonal(d, qrng);
    inst.observed = y * inst.rotation;
    return inst;
}

InstanceBundle gen_hard_d_over_alpha(Eigen::Index n, Eigen::Index d, double alpha, double sigma,
                                     std::uint64_t seed, bool dense_rotation) {
    if (d < 3) throw ValidationError("gen_hard_d_over_alpha: requires d >= 3");
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw ValidationError("gen_hard_d_over_alpha: alpha in (0,1)");
    if (!(sigma > 0.0)) throw ValidationError("gen_hard_d_over_alpha: sigma must be positive");
    const Eigen::Index m =
        static_cast<Eigen::Index>(std::ceil(static_cast<double>(d) / (50.0 * alpha)));
    if (m < d)
        throw DimensionError("gen_hard_d_over_alpha: m = ceil(d/(50 alpha)) = " + std::to_string(m) +
                             " < d = " + std::to_string(d) +
                             "; the construction needs alpha <= 1/50 so the block has full column rank");
    if (m > n)
        throw DimensionError("gen_hard_d_over_alpha: m = " + std::to_string(m) + " exceeds n = " +
                             std::to_string(n));

    // Rademacher block, screened for spreadness; resample on refutation.
    const Eigen::Index m_claim = std::max<Eigen::Index>(1, m / 10);
    const SpreadSpec claimed{m_claim, 0.9, 2.0};
    Matrix y;
    Matrix basis;
    bool ok = false;
    for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
        Rng rng = Rng::stream(seed, "rademacher-block-" + std::to_string(attempt));
        y.resize(m, d);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = 0; j < d; ++j) y(i, j) = rng.rademacher();
        try {
            basis = orthonormal_basis(y);
        } catch (const RankDeficientError&) {
            continue;
        }
        const SpreadVerdict screen = spread_witness_search(basis, claimed, 8, seed + attempt);
        ok = screen.is_spread;
    }
    if (!ok)
        throw ValidationError("gen_hard_d_over_alpha: no spread Rademacher block found in 10 attempts");

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    Matrix x = Matrix::Zero(n, d);
    x.topRows(m) = sqrt_n * basis;

    Matrix rot = Matrix::Identity(d, d);
    if (dense_rotation) {
        Rng rng = Rng::stream(seed, "dense-rotation");
        rot = haar_orthogonal(d, rng);
        x = x * rot;
    }

    auto y_shared = std::make_shared<const Matrix>(y);
    auto basis_shared = std::make_shared<const Matrix>(basis);
    auto rot_shared = std::make_shared<const Matrix>(rot);
    const double dd = static_cast<double>(d);

    // v uniform in {1, ..., d}^d, u = Y v, beta = sigma * pinv(X1) u; with the
    // stored orthonormal factor the pseudo-inverse application is exact:
    // beta = sigma * B^T u / sqrt(n), and X beta = sigma * [u; 0].
    auto sample_v = [dd](Rng& rng, Eigen::Index dim) {
        Vector v(dim);
        for (Eigen::Index i = 0; i < dim; ++i)
            v[i] = 1.0 + static_cast<double>(rng.below(static_cast<std::uint64_t>(dd)));
        return v;
    };
    auto beta_of_v = [y_shared, basis_shared, rot_shared, sigma, sqrt_n](const Vector& v) {
        const Vector u = (*y_shared) * v;
        const Vector beta = sigma / sqrt_n * (basis_shared->transpose() * u);
        return Vector(rot_shared->transpose() * beta);
    };

    InstanceBundle bundle;
    bundle.design = x;
    bundle.beta_sampler = [beta_of_v, sample_v, d](std::uint64_t s) {
        Rng rng = Rng::stream(s, "beta-d-over-alpha");
        return beta_of_v(sample_v(rng, d));
    };
    bundle.beta_pair_probe = [beta_of_v, sample_v, d, dd](std::uint64_t s) {
        Rng rng = Rng::stream(s, "beta-pair-probe");
        Vector v = sample_v(rng, d);
        Vector v2 = v;
        const Eigen::Index coord = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(d)));
        // Change one coordinate to a different value inbounds.
        double nv = v2[coord] + 1.0;
        if (nv > dd) nv = v2[coord] - 1.0;
        v2[coord] = nv;
        return std::make_pair(beta_of_v(v), beta_of_v(v2));
    };
    bundle.noise_spec = SymGeomParams{0, 2.0 * alpha * std::pow(static_cast<double>(d), -5.0), alpha, sigma};
    bundle.meta = InstanceMeta{"d-over-alpha",
                               n,
                               d,
                               alpha,
                               sigma,
                               bundle.noise_spec.lambda,
                               m,
                               seed,
                               sigma * std::sqrt(static_cast<double>(m) / static_cast<double>(n)),
                               claimed,
                               dense_rotation};
    return bundle;
}

InstanceBundle gen_hard_logd_over_alpha2(Eigen::Index n, Eigen::Index d, double alpha, double sigma,
                                         std::uint64_t seed) {
    if (d < 5) throw ValidationError("gen_hard_logd_over_alpha2: requires d >= 5");
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw ValidationError("gen_hard_logd_over_alpha2: alpha in (0, 0.5) so the noise rate 2 alpha is valid");
    if (!(sigma > 0.0)) throw ValidationError("gen_hard_logd_over_alpha2: sigma must be positive");
    const Eigen::Index k = static_cast<Eigen::Index>(
        std::ceil(std::log(static_cast<double>(d)) / (200.0 * alpha * alpha)));
    if (n < 2 * k * d)
        throw DimensionError("gen_hard_logd_over_alpha2: needs n >= 2kd = " + std::to_string(2 * k * d));

    Rng rng = Rng::stream(seed, "replica-rotation");
    const Matrix q = haar_orthogonal(d, rng);
    const double scale = std::sqrt(static_cast<double>(n) / (2.0 * static_cast<double>(k)));
    Matrix x = Matrix::Zero(n, d);
    for (Eigen::Index copy = 0; copy < 2 * k; ++copy) x.middleRows(copy * d, d) = scale * q;

    auto q_shared = std::make_shared<const Matrix>(q);
    const double coef = sigma * std::sqrt(2.0 * static_cast<double>(k) / static_cast<double>(n));
    // beta_j = coef * (j-th row of Q); then Q beta_j / coef = e_j, so the
    // noiseless observation is exactly sigma on 2k coordinates and 0 elsewhere.
    auto beta_of_j = [q_shared, coef](Eigen::Index j) {
        return Vector(coef * q_shared->row(j).transpose());
    };

    InstanceBundle bundle;
    bundle.design = x;
    bundle.beta_sampler = [beta_of_j, d](std::uint64_t s) {
        Rng r = Rng::stream(s, "beta-logd");
        return beta_of_j(static_cast<Eigen::Index>(r.below(static_cast<std::uint64_t>(d))));
    };
    bundle.beta_pair_probe = [beta_of_j, d](std::uint64_t s) {
        Rng r = Rng::stream(s, "beta-pair-logd");
        const Eigen::Index j = static_cast<Eigen::Index>(r.below(static_cast<std::uint64_t>(d)));
        Eigen::Index j2 = static_cast<Eigen::Index>(r.below(static_cast<std::uint64_t>(d - 1)));
        if (j2 >= j) ++j2;
        return std::make_pair(beta_of_j(j), beta_of_j(j2));
    };
    bundle.noise_spec = SymGeomParams{0, 2.0 * alpha, alpha, sigma};
    bundle.meta = InstanceMeta{"logd-over-alpha2",
                               n,
                               d,
                               alpha,
                               sigma,
                               bundle.noise_spec.lambda,
                               k,
                               seed,
                               coef * std::sqrt(2.0),  // exact pairwise distance
                               SpreadSpec{k, 0.9, 2.0},
                               false};
    return bundle;
}

Matrix gen_counterexamples(CounterexampleKind kind, Eigen::Index n, Eigen::Index d,
                           std::uint64_t seed) {
    if (n < 2 || d < 2) throw ValidationError("gen_counterexamples: requires n, d >= 2");
    Rng rng = Rng::stream(seed, "counterexample");
    if (kind == CounterexampleKind::rip_not_spread) {
        Matrix m = Matrix::Zero(n, d);
        m(0, 0) = 1.0;
        m.bottomRightCorner(n - 1, d - 1) =
            rng.normal_matrix(n - 1, d - 1) / std::sqrt(static_cast<double>(n - 1));
        return m;
    }
    Matrix w = rng.normal_matrix(n, d - 1) / std::sqrt(static_cast<double>(n));
    Matrix m(n, d);
    m.col(0) = w.col(0).normalized();
    m.rightCols(d - 1) = w;
    return m;
}

}  // namespace spreadlab
