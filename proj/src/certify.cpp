#include "spreadlab/certify.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace spreadlab {

namespace {

// Isometric vectorization of symmetric matrices: diagonal entries as-is,
// off-diagonal pairs packed once with weight sqrt(2).
struct SymBasis {
    Eigen::Index d = 0;
    Eigen::Index dim() const { return d * (d + 1) / 2; }

    Vector svec_outer(const Eigen::Ref<const Vector>& a) const {
        Vector out(dim());
        Eigen::Index t = 0;
        const double s2 = std::sqrt(2.0);
        for (Eigen::Index i = 0; i < d; ++i) {
            out[t++] = a[i] * a[i];
            for (Eigen::Index j = i + 1; j < d; ++j) out[t++] = s2 * a[i] * a[j];
        }
        return out;
    }

    Vector svec_identity() const {
        Vector out = Vector::Zero(dim());
        Eigen::Index t = 0;
        for (Eigen::Index i = 0; i < d; ++i) {
            out[t] = 1.0;
            t += d - i;
        }
        return out;
    }

    Matrix unsvec(const Eigen::Ref<const Vector>& v) const {
        Matrix s(d, d);
        Eigen::Index t = 0;
        const double inv_s2 = 1.0 / std::sqrt(2.0);
        for (Eigen::Index i = 0; i < d; ++i) {
            s(i, i) = v[t++];
            for (Eigen::Index j = i + 1; j < d; ++j) {
                s(i, j) = s(j, i) = inv_s2 * v[t++];
            }
        }
        return s;
    }
};

}  // namespace

TwoToFourCertificate certify_two_to_four(const Eigen::Ref<const Matrix>& a, double tol,
                                         std::uint64_t seed) {
    const Eigen::Index n = a.rows(), d = a.cols();
    if (n < 1 || d < 1) throw ValidationError("certify_two_to_four: empty matrix");
    if (!a.allFinite()) throw ValidationError("certify_two_to_four: non-finite entries");

    const SymBasis sym{d};
    const Eigen::Index ds = sym.dim();
    Matrix f(n, ds);
    double cstar = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        f.row(i) = sym.svec_outer(a.row(i).transpose()).transpose();
        const double nrm2 = a.row(i).squaredNorm();
        cstar += nrm2 * nrm2;
    }
    cstar /= static_cast<double>(d) * static_cast<double>(d);
    const Vector si = sym.svec_identity();

    // The reduced operator F^T F - c si si^T acts on the symmetric span; its
    // top eigenvalue equals that of M - c vec(I)vec(I)^T on R^(d^2).
    const bool dense = static_cast<double>(n) * static_cast<double>(ds) * static_cast<double>(ds) <= 6e9 &&
                       ds <= 4096;
    Matrix msym;
    if (dense) msym = f.transpose() * f;

    TwoToFourCertificate cert;
    cert.inflation = 10.0 * tol;
    double best = -1.0;
    for (const double c : {0.0, cstar}) {
        MatVec apply;
        if (dense) {
            apply = [&msym, &si, c](const Vector& v) {
                return Vector(msym * v - (c * si.dot(v)) * si);
            };
        } else {
            apply = [&f, &si, c](const Vector& v) {
                return Vector(f.transpose() * (f * v) - (c * si.dot(v)) * si);
            };
        }
        double lam;
        Vector vec;
        try {
            TopEigen top = top_eigenvalue_symmetric(apply, ds, tol, 50000, seed + static_cast<std::uint64_t>(c != 0.0));
            lam = top.value;
            vec = top.vector;
        } catch (const NoConvergenceError&) {
            if (c == 0.0) throw;  // uncentered operator is PSD; propagate
            continue;             // a wildly indefinite centered operator: skip this candidate
        }
        if (lam < 0.0 && c != 0.0) {
            // Power iteration found a dominant negative eigenvalue, so it says
            // nothing about lambda_max of the indefinite centered operator;
            // drop the candidate (c = 0 is PSD and always available).
            continue;
        }
        const double value = std::max(lam, 0.0) + c;
        if (best < 0.0 || value < best) {
            best = value;
            cert.centering = c;
            if (vec.size() == ds && lam > 0.0) {
                // Near-maximizer witness: top eigenvector of the unpacked matrix.
                const Matrix s = sym.unsvec(vec);
                Eigen::SelfAdjointEigenSolver<Matrix> es(s);
                Eigen::Index which = 0;
                es.eigenvalues().cwiseAbs().maxCoeff(&which);
                cert.test_vector = es.eigenvectors().col(which);
            }
        }
    }
    cert.lambda_hat = best;
    cert.upper_bound = std::pow((1.0 + cert.inflation) * std::max(best, 0.0), 0.25);
    if (cert.test_vector.size() == 0) cert.test_vector = Vector::Unit(d, 0);
    return cert;
}

CertifiedDistortion certify_distortion_24(const Eigen::Ref<const Matrix>& a, double tol,
                                          std::uint64_t seed) {
    const SpectrumSummary spec = extreme_singular_values(a);
    if (spec.sigma_min <= 1e-8 * spec.sigma_max)
        throw SingularError("certify_distortion_24: rank-deficient input");
    CertifiedDistortion out;
    out.two_to_four = certify_two_to_four(a, tol, seed);
    out.sigma_min = spec.sigma_min;
    out.upper = std::pow(static_cast<double>(a.rows()), 0.25) * out.two_to_four.upper_bound /
                out.sigma_min;
    return out;
}

WellSpreadCertificate certify_well_spread(const Eigen::Ref<const Matrix>& a, double delta,
                                          double threshold_cprime, double tol, std::uint64_t seed) {
    if (!(delta > 0.0) || !(delta < 1.0)) throw ValidationError("certify_well_spread: delta in (0,1)");
    if (!(threshold_cprime > 1.0))
        throw ValidationError("certify_well_spread: threshold must exceed 1");

    WellSpreadCertificate out;
    out.delta = delta;
    out.threshold = threshold_cprime;
    out.certificate = certify_distortion_24(a, tol, seed);
    out.distortion_upper = out.certificate.upper;
    out.yes = out.distortion_upper <= threshold_cprime;

    const Eigen::Index n = a.rows();
    if (out.yes) {
        out.guaranteed_m = static_cast<Eigen::Index>(
            std::floor(std::pow(delta / out.distortion_upper, 4.0) * static_cast<double>(n)));
        if (out.guaranteed_m >= 1) {
            DistortionBound bound{2.0, 4.0, 1.0, out.distortion_upper, n};
            out.verdict = spread_from_distortion(bound, n, SpreadSpec{out.guaranteed_m, delta, 2.0});
        } else {
            out.verdict.method = SpreadMethod::distortion_certificate;
            out.verdict.is_spread = true;
            out.verdict.certified = true;
            out.verdict.achieved_ratio = 0.0;  // vacuous m = 0 guarantee
        }
    } else {
        out.verdict.method = SpreadMethod::distortion_certificate;
        out.verdict.is_spread = false;
        out.verdict.certified = false;  // advisory NO
        out.verdict.achieved_ratio = out.distortion_upper;
    }
    return out;
}

}  // namespace spreadlab
