#include "spreadlab/spreadness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "spreadlab/rng.hpp"

namespace spreadlab {

std::string to_string(SpreadMethod m) {
    switch (m) {
        case SpreadMethod::exact_enumeration: return "exact-enumeration";
        case SpreadMethod::heuristic: return "heuristic";
        case SpreadMethod::distortion_certificate: return "distortion-certificate";
    }
    return "unknown";
}

std::vector<Eigen::Index> top_m_indices(const Eigen::Ref<const Vector>& v, Eigen::Index m) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index(0));
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double da = std::abs(v[a]), db = std::abs(v[b]);
        if (da != db) return da > db;
        return a < b;
    });
    idx.resize(static_cast<std::size_t>(m));
    std::sort(idx.begin(), idx.end());
    return idx;
}

std::pair<double, std::vector<Eigen::Index>> vector_spread_ratio(const Eigen::Ref<const Vector>& v,
                                                                 Eigen::Index m, double p) {
    if (v.size() < 1) throw ValidationError("vector_spread_ratio: empty vector");
    if (m < 1 || m > v.size()) throw ValidationError("vector_spread_ratio: m out of range");
    if (p < 1.0) throw ValidationError("vector_spread_ratio: p must be >= 1");
    const double total = v.cwiseAbs().array().pow(p).sum();
    if (total <= 0.0) throw ZeroVectorError("vector_spread_ratio: zero vector");

    auto idx = top_m_indices(v, m);
    double part = 0.0;
    for (Eigen::Index i : idx) part += std::pow(std::abs(v[i]), p);
    return {std::pow(part / total, 1.0 / p), idx};
}

namespace {

void check_orthonormal(const Eigen::Ref<const Matrix>& basis, double tol = 1e-8) {
    const Matrix gram = basis.transpose() * basis;
    const double err = (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    if (err > tol)
        throw NotOrthonormalError("basis is not orthonormal (max deviation " + std::to_string(err) + ")");
}

double binomial_or_inf(Eigen::Index n, Eigen::Index m, std::uint64_t cap) {
    double c = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        c *= static_cast<double>(n - i) / static_cast<double>(i + 1);
        if (c > 2.0 * static_cast<double>(cap)) return c;
    }
    return c;
}

// sigma_max of the row block of `basis` indexed by S.
double block_sigma_max(const Eigen::Ref<const Matrix>& basis, const std::vector<Eigen::Index>& s) {
    const Eigen::Index m = static_cast<Eigen::Index>(s.size()), d = basis.cols();
    Matrix bs(m, d);
    for (Eigen::Index i = 0; i < m; ++i) bs.row(i) = basis.row(s[static_cast<std::size_t>(i)]);
    const bool use_rows = m <= d;
    const Matrix gram = use_rows ? Matrix(bs * bs.transpose()) : Matrix(bs.transpose() * bs);
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

// Top right-singular vector of the row block (unit, deterministic sign).
Vector block_top_right_singular(const Eigen::Ref<const Matrix>& basis,
                                const std::vector<Eigen::Index>& s) {
    const Eigen::Index m = static_cast<Eigen::Index>(s.size()), d = basis.cols();
    Matrix bs(m, d);
    for (Eigen::Index i = 0; i < m; ++i) bs.row(i) = basis.row(s[static_cast<std::size_t>(i)]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(bs.transpose() * bs);
    Vector u = es.eigenvectors().col(d - 1);
    Eigen::Index imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    if (u[imax] < 0) u = -u;
    return u;
}

}  // namespace

SpreadVerdict subspace_spread_exact(const Eigen::Ref<const Matrix>& basis, const SpreadSpec& spec,
                                    std::uint64_t enumeration_cap) {
    if (spec.p != 2.0) throw ValidationError("subspace_spread_exact: only p = 2 is supported");
    const Eigen::Index n = basis.rows();
    if (spec.m < 1 || spec.m > n) throw ValidationError("subspace_spread_exact: m out of range");
    check_orthonormal(basis);
    if (binomial_or_inf(n, spec.m, enumeration_cap) > static_cast<double>(enumeration_cap))
        throw TooLargeError("subspace_spread_exact: C(n, m) exceeds the enumeration cap");

    // Enumerate subsets of size exactly m in lexicographic order.
    std::vector<Eigen::Index> s(static_cast<std::size_t>(spec.m));
    std::iota(s.begin(), s.end(), Eigen::Index(0));
    double best = -1.0;
    std::vector<Eigen::Index> best_s;
    while (true) {
        const double sig = block_sigma_max(basis, s);
        if (sig > best) {
            best = sig;
            best_s = s;
        }
        // next combination
        Eigen::Index i = spec.m - 1;
        while (i >= 0 && s[static_cast<std::size_t>(i)] == n - spec.m + i) --i;
        if (i < 0) break;
        ++s[static_cast<std::size_t>(i)];
        for (Eigen::Index j = i + 1; j < spec.m; ++j)
            s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
    }

    SpreadVerdict v;
    v.method = SpreadMethod::exact_enumeration;
    v.certified = true;
    v.achieved_ratio = best;
    v.is_spread = best <= spec.delta;
    if (!v.is_spread) {
        const Vector u = block_top_right_singular(basis, best_s);
        v.witness_vector = basis * u;
        v.witness_set = best_s;
    }
    return v;
}

SpreadVerdict spread_witness_search(const Eigen::Ref<const Matrix>& basis, const SpreadSpec& spec,
                                    int restarts, std::uint64_t seed,
                                    const std::vector<Vector>& hints) {
    if (spec.p != 2.0) throw ValidationError("spread_witness_search: only p = 2 is supported");
    const Eigen::Index n = basis.rows(), d = basis.cols();
    if (spec.m < 1 || spec.m > n) throw ValidationError("spread_witness_search: m out of range");
    check_orthonormal(basis);

    std::vector<Vector> starts;
    for (const Vector& h : hints) {
        if (h.size() != n) throw DimensionError("spread_witness_search: hint has wrong dimension");
        Vector u = basis.transpose() * h;
        const double norm = u.norm();
        if (norm > 1e-12) starts.push_back(u / norm);
    }
    // Deterministic starts from the heaviest rows.
    {
        Vector row_norms = basis.rowwise().norm();
        auto heavy = top_m_indices(row_norms, std::min<Eigen::Index>(n, 8));
        for (Eigen::Index i : heavy) {
            Vector u = basis.row(i).transpose();
            const double norm = u.norm();
            if (norm > 1e-12) starts.push_back(u / norm);
        }
    }
    Rng rng = Rng::stream(seed, "witness-search");
    for (int r = 0; r < restarts; ++r) starts.push_back(rng.unit_vector(d));

    double best = -1.0;
    Vector best_u;
    std::vector<Eigen::Index> best_s;
    for (Vector u : starts) {
        double prev = -1.0;
        std::vector<Eigen::Index> s;
        for (int it = 0; it < 200; ++it) {
            const Vector v = basis * u;
            s = top_m_indices(v, spec.m);
            u = block_top_right_singular(basis, s);
            const double ratio = block_sigma_max(basis, s);
            if (ratio - prev < 1e-10) {
                prev = ratio;
                break;
            }
            prev = ratio;
        }
        if (prev > best) {
            best = prev;
            best_u = u;
            best_s = s;
        }
    }

    // Re-verify the reported ratio from scratch.
    const Vector w = basis * best_u;
    auto [ratio, set] = vector_spread_ratio(w, spec.m, 2.0);

    SpreadVerdict v;
    v.method = SpreadMethod::heuristic;
    v.achieved_ratio = ratio;
    v.is_spread = !(ratio > spec.delta);
    v.certified = !v.is_spread;  // refutations are sound, passes are not certificates
    if (!v.is_spread) {
        v.witness_vector = w;
        v.witness_set = set;
    }
    return v;
}

SpreadVerdict spread_from_distortion(const DistortionBound& bound, Eigen::Index n,
                                     const SpreadSpec& query) {
    if (!(bound.upper >= 1.0) || !std::isfinite(bound.upper))
        throw ValidationError("spread_from_distortion: invalid distortion upper bound");
    if (query.m < 1 || query.m > n) throw ValidationError("spread_from_distortion: m out of range");
    const double p = bound.p, q = bound.q;
    const double frac = static_cast<double>(query.m) / static_cast<double>(n);

    double delta_certified;
    if (query.p == p) {
        delta_certified = std::pow(frac, 1.0 / p - 1.0 / q) * bound.upper;
    } else if (query.p == q) {
        const double inner = std::pow(bound.upper, -p) - std::pow(frac, p);
        if (inner < 0.0)
            throw InapplicableError("spread_from_distortion: l_q conversion inapplicable (m too large "
                                    "for this distortion bound)");
        delta_certified = std::pow(1.0 - std::pow(inner, q / p), 1.0 / q);
    } else {
        throw ValidationError("spread_from_distortion: query norm index matches neither p nor q");
    }

    SpreadVerdict v;
    v.method = SpreadMethod::distortion_certificate;
    v.achieved_ratio = delta_certified;
    v.is_spread = delta_certified <= query.delta;
    v.certified = v.is_spread;  // one-sided: failure to certify is not a refutation
    return v;
}

DistortionBound distortion_lower_bound(const Eigen::Ref<const Matrix>& basis, double p, double q,
                                       int restarts, std::uint64_t seed) {
    if (!(q > p) || p < 1.0) throw ValidationError("distortion_lower_bound: need q > p >= 1");
    check_orthonormal(basis);
    const Eigen::Index n = basis.rows(), d = basis.cols();

    auto ratio_of = [&](const Vector& u) {
        const Vector v = basis * u;
        const double np = std::pow(v.cwiseAbs().array().pow(p).sum(), 1.0 / p);
        const double nq = std::pow(v.cwiseAbs().array().pow(q).sum(), 1.0 / q);
        return nq / np;
    };
    auto gradient = [&](const Vector& u) {
        const Vector v = basis * u;
        const double sp = v.cwiseAbs().array().pow(p).sum();
        const double sq = v.cwiseAbs().array().pow(q).sum();
        // d/dv of log||v||_q - log||v||_p
        Vector g(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const double av = std::abs(v[i]);
            const double sgn = v[i] >= 0 ? 1.0 : -1.0;
            g[i] = sgn * (std::pow(av, q - 1.0) / sq - std::pow(av, p - 1.0) / sp);
        }
        return Vector(basis.transpose() * g);
    };

    std::vector<Vector> starts;
    {
        Vector row_norms = basis.rowwise().norm();
        auto heavy = top_m_indices(row_norms, std::min<Eigen::Index>(n, 4));
        for (Eigen::Index i : heavy) {
            Vector u = basis.row(i).transpose();
            const double norm = u.norm();
            if (norm > 1e-12) starts.push_back(u / norm);
        }
    }
    Rng rng = Rng::stream(seed, "distortion-ascent");
    for (int r = 0; r < restarts; ++r) starts.push_back(rng.unit_vector(d));

    double best = 0.0;
    for (Vector u : starts) {
        double step = 0.5;
        double cur = ratio_of(u);
        for (int it = 0; it < 300; ++it) {
            const Vector g = gradient(u);
            bool improved = false;
            while (step > 1e-14) {
                Vector cand = (u + step * g).normalized();
                const double val = ratio_of(cand);
                if (val > cur + 1e-14) {
                    u = cand;
                    cur = val;
                    step *= 1.5;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) break;
        }
        best = std::max(best, cur);
    }

    DistortionBound out;
    out.p = p;
    out.q = q;
    out.n = n;
    const double scale = std::pow(static_cast<double>(n), 1.0 / p - 1.0 / q);
    out.lower = best * scale;
    out.upper = scale;  // trivial bound; callers may merge a certificate
    return out;
}

}  // namespace spreadlab
