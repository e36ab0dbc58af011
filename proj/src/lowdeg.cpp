#include "spreadlab/lowdeg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "spreadlab/instances.hpp"
#include "spreadlab/parallel.hpp"

namespace spreadlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

double log_binomial(Eigen::Index n, Eigen::Index m) {
    return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(m) + 1.0) -
           std::lgamma(static_cast<double>(n - m) + 1.0);
}

// Natural log of |z| for a GMP integer, accurate to double precision.
double log_abs_mpz(const mpz_class& z) {
    if (z == 0) return kNegInf;
    long exp2 = 0;
    const double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(std::abs(mant)) + static_cast<double>(exp2) * std::log(2.0);
}

// log E x^r for even r (E x^r > 0 always).
double log_nbr_moment(const NBRParams& p, int r) {
    if (r == 0) return 0.0;
    double log_dfact = 0.0;
    for (int i = r - 1; i >= 2; i -= 2) log_dfact += std::log(static_cast<double>(i));
    const double log_gauss = p.sigma > 0.0
                                 ? std::log1p(-p.rho) + r * std::log(p.sigma) + log_dfact
                                 : kNegInf;
    const double log_spike = std::log(p.rho) - 0.5 * r * std::log(p.rho_prime());
    return log_add(log_gauss, log_spike);
}

}  // namespace

std::vector<mpz_class> telephone_numbers(int k_max) {
    if (k_max < 0) throw ValidationError("telephone_numbers: k_max must be >= 0");
    std::vector<mpz_class> t(static_cast<std::size_t>(k_max) + 1);
    t[0] = 1;
    if (k_max >= 1) t[1] = 1;
    for (int n = 2; n <= k_max; ++n) t[n] = t[n - 1] + (n - 1) * t[n - 2];
    return t;
}

std::vector<mpz_class> hermite_coefficients(int k) {
    if (k < 0) throw ValidationError("hermite_coefficients: k must be >= 0");
    std::vector<mpz_class> prev{1};  // He_0
    if (k == 0) return prev;
    std::vector<mpz_class> cur{0, 1};  // He_1
    for (int n = 1; n < k; ++n) {
        std::vector<mpz_class> next(static_cast<std::size_t>(n) + 2, mpz_class(0));
        for (std::size_t r = 0; r < cur.size(); ++r) next[r + 1] += cur[r];       // x * He_n
        for (std::size_t r = 0; r < prev.size(); ++r) next[r] -= n * prev[r];     // - n He_{n-1}
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

double hermite_moment(const NBRParams& params, int k) {
    params.validate();
    if (k < 0) throw ValidationError("hermite_moment: k must be >= 0");
    if (k == 0) return 1.0;
    if (k % 2 == 1) return 0.0;

    const auto coeffs = hermite_coefficients(k);
    if (k <= 30) {
        double sum = 0.0;
        for (int r = 0; r <= k; r += 2) sum += coeffs[static_cast<std::size_t>(r)].get_d() * nbr_moment(params, r);
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= static_cast<double>(i);
        return sum / std::sqrt(fact);
    }

    // Signed log-domain accumulation for large degrees.
    double log_pos = kNegInf, log_neg = kNegInf;
    for (int r = 0; r <= k; r += 2) {
        const mpz_class& c = coeffs[static_cast<std::size_t>(r)];
        if (c == 0) continue;
        const double lt = log_abs_mpz(c) + log_nbr_moment(params, r);
        if (c > 0)
            log_pos = log_add(log_pos, lt);
        else
            log_neg = log_add(log_neg, lt);
    }
    const double log_scale = 0.5 * std::lgamma(static_cast<double>(k) + 1.0);
    if (log_pos == kNegInf && log_neg == kNegInf) return 0.0;
    const double hi = std::max(log_pos, log_neg), lo = std::min(log_pos, log_neg);
    const double mag = hi + std::log1p(-std::exp(lo - hi));  // |pos - neg| in logs
    const double value = std::exp(mag - log_scale);
    return log_pos >= log_neg ? value : -value;
}

double sphere_moment(Eigen::Index d, int k) {
    if (d < 1 || k < 0) throw ValidationError("sphere_moment: bad arguments");
    if (k % 2 == 1) return 0.0;
    double log_m = 0.0;
    for (int i = 0; i < k / 2; ++i)
        log_m += std::log(static_cast<double>(2 * i + 1)) -
                 std::log(static_cast<double>(d) + 2.0 * static_cast<double>(i));
    return std::exp(log_m);
}

double sphere_moment_bound(Eigen::Index d, int k) {
    if (d < 1 || k < 0) throw ValidationError("sphere_moment_bound: bad arguments");
    if (k == 0) return 1.0;
    return std::pow(static_cast<double>(k) / static_cast<double>(d), 0.5 * static_cast<double>(k));
}

double inner_sum(const NBRParams& params, Eigen::Index n, int k, int cap) {
    params.validate();
    if (k < 0) throw ValidationError("inner_sum: k must be >= 0");
    if (k > cap) throw TooLargeError("inner_sum: k exceeds the degree cap " + std::to_string(cap));
    if (k == 0) return 1.0;
    if (k < 4) return 0.0;  // admissible parts are {0} union {4, 6, 8, ...}

    // log c_j = 2 log |E h_j| for even j >= 4.
    std::vector<double> logc(static_cast<std::size_t>(k) + 1, kNegInf);
    for (int j = 4; j <= k; j += 2) {
        const double h = hermite_moment(params, j);
        if (h != 0.0) logc[static_cast<std::size_t>(j)] = 2.0 * std::log(std::abs(h));
    }

    // dp[m][t] = log [z^t] (sum_j c_j z^j)^m, built by log-convolution.
    const int max_parts = k / 4;
    std::vector<double> dpm = logc;  // m = 1
    double total = kNegInf;
    for (int m = 1; m <= max_parts; ++m) {
        if (m > 1) {
            std::vector<double> next(static_cast<std::size_t>(k) + 1, kNegInf);
            for (int t = 4 * (m - 1); t <= k; ++t) {
                if (dpm[static_cast<std::size_t>(t)] == kNegInf) continue;
                for (int j = 4; t + j <= k; j += 2) {
                    if (logc[static_cast<std::size_t>(j)] == kNegInf) continue;
                    next[static_cast<std::size_t>(t + j)] = log_add(
                        next[static_cast<std::size_t>(t + j)],
                        dpm[static_cast<std::size_t>(t)] + logc[static_cast<std::size_t>(j)]);
                }
            }
            dpm = std::move(next);
        }
        if (dpm[static_cast<std::size_t>(k)] == kNegInf) continue;
        if (m > n) break;  // cannot place more nonzero parts than coordinates
        total = log_add(total, log_binomial(n, m) + dpm[static_cast<std::size_t>(k)]);
    }
    return std::exp(total);
}

LowDegReport lowdeg_norm(const LowDegParams& params, LowDegMode mode) {
    if (params.n < 1 || params.d < 1) throw ValidationError("lowdeg_norm: n, d must be >= 1");
    if (params.degree < 0) throw ValidationError("lowdeg_norm: degree must be >= 0");
    if (params.degree > params.degree_cap)
        throw TooLargeError("lowdeg_norm: degree exceeds the cap; raise degree_cap explicitly");
    const NBRParams nbr{params.rho, params.sigma};
    nbr.validate();

    LowDegReport rep;
    rep.method = mode;
    rep.sigma_regime_ok =
        params.degree < 2 ||
        params.sigma * params.sigma <= 1.0 / (static_cast<double>(params.degree) - 1.0);
    rep.total = 1.0;  // k = 0 term
    rep.per_degree.push_back({0, 1.0, 1.0, 1.0});

    if (mode == LowDegMode::exact_dp) {
        for (int k = 4; k <= params.degree; k += 2) {
            DegreeContribution c;
            c.k = k;
            c.sphere_moment = sphere_moment(params.d, k);
            c.inner_sum = inner_sum(nbr, params.n, k, params.degree_cap);
            c.contribution = c.sphere_moment * c.inner_sum;
            rep.total += c.contribution;
            rep.per_degree.push_back(c);
        }
    } else {
        const double log_base = std::log(512.0) + std::log(static_cast<double>(params.n)) -
                                2.0 * std::log(static_cast<double>(params.d)) -
                                2.0 * std::log(params.rho);
        for (int k = 4; k <= params.degree; ++k) {
            DegreeContribution c;
            c.k = k;
            c.sphere_moment = sphere_moment_bound(params.d, k);
            const double log_term =
                0.25 * static_cast<double>(k) * (log_base + 4.0 * std::log(static_cast<double>(k)));
            c.contribution = std::exp(log_term);
            c.inner_sum = 0.0;  // not evaluated in bound mode
            rep.total += c.contribution;
            rep.per_degree.push_back(c);
        }
    }
    return rep;
}

namespace {

// Degree-4 leverage statistic: sum over rows of the squared leverage of A.
double leverage_statistic(const Matrix& a) {
    const Matrix gram = a.transpose() * a;
    Eigen::LLT<Matrix> llt(gram);
    if (llt.info() != Eigen::Success) throw SingularError("leverage_statistic: Gram not PD");
    // W = A L^{-T}; leverage_i = ||row_i(W)||^2.
    Matrix w = llt.matrixL().solve(a.transpose()).transpose();
    double s = 0.0;
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        const double lev = w.row(i).squaredNorm();
        s += lev * lev;
    }
    return s;
}

}  // namespace

DistinguishResult degree4_distinguish_experiment(Eigen::Index n, Eigen::Index d,
                                                 const NBRParams& params, int trials,
                                                 std::uint64_t seed) {
    params.validate();
    if (trials < 10) throw ValidationError("degree4_distinguish_experiment: needs >= 10 trials");
    if (d > n)
        throw ValidationError("degree4_distinguish_experiment: requires d <= n (planted sampler "
                              "precondition)");

    std::vector<double> s_null(static_cast<std::size_t>(trials));
    std::vector<double> s_planted(static_cast<std::size_t>(trials));
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
        const std::uint64_t s = seed + 7919ull * static_cast<std::uint64_t>(t);
        s_null[t] = leverage_statistic(gen_gaussian_null(n, d, s));
        s_planted[t] = leverage_statistic(gen_planted(n, d, params, s ^ 0x5eedull).observed);
    });

    auto mean_of = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m += x;
        return m / static_cast<double>(v.size());
    };
    auto var_of = [](const std::vector<double>& v, double m) {
        double s = 0.0;
        for (double x : v) s += (x - m) * (x - m);
        return s / static_cast<double>(v.size() - 1);
    };

    DistinguishResult res;
    res.trials = trials;
    res.mean_null = mean_of(s_null);
    res.mean_planted = mean_of(s_planted);
    res.pooled_std = std::sqrt(0.5 * (var_of(s_null, res.mean_null) + var_of(s_planted, res.mean_planted)));
    res.separation = res.pooled_std > 0.0
                         ? std::abs(res.mean_planted - res.mean_null) / res.pooled_std
                         : (res.mean_planted == res.mean_null ? 0.0
                                                              : std::numeric_limits<double>::infinity());
    return res;
}

}  // namespace spreadlab
