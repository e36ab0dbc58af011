#include "spreadlab/noise.hpp"

#include <cmath>

#include "spreadlab/rng.hpp"

namespace spreadlab {

double symgeom_pmf(const SymGeomParams& params, long long k) {
    params.validate();
    if (k == params.c) return params.alpha;
    const long long j = std::llabs(k - params.c);
    return 0.5 * (1.0 - params.alpha) * params.lambda *
           std::exp(static_cast<double>(j - 1) * std::log1p(-params.lambda));
}

std::vector<double> symgeom_sample(const SymGeomParams& params, std::size_t count,
                                   std::uint64_t seed) {
    params.validate();
    if (count < 1) throw ValidationError("symgeom_sample: count must be >= 1");
    Rng rng = Rng::stream(seed, "symgeom");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        long long k = 0;
        if (rng.uniform() >= params.alpha) {
            const long long mag = rng.geometric(params.lambda);
            k = rng.uniform() < 0.5 ? mag : -mag;
        }
        out[i] = params.sigma * static_cast<double>(params.c + k);
    }
    return out;
}

namespace {

// log(pmf ratio) between the centered law and its shift, at k (neither atom).
double log_ratio_bulk(double lambda, long long delta, long long k) {
    const long long a = std::llabs(k), b = std::llabs(k - delta);
    return static_cast<double>(a - b) * std::log1p(-lambda);
}

}  // namespace

KlShift kl_shift_series(const SymGeomParams& params, long long delta) {
    params.validate();
    if (delta < 1) throw ValidationError("kl_shift: shift must be a positive integer");
    const double alpha = params.alpha, lambda = params.lambda;
    const double half = 0.5 * (1.0 - alpha);
    const double l1m = std::log1p(-lambda);  // log(1 - lambda)

    auto tail_geq = [&](long long j) {  // P(K >= j), j >= 1, for the geometric side mass `half`
        return half * std::exp(static_cast<double>(j - 1) * l1m);
    };
    auto pmf0 = [&](long long k) { return symgeom_pmf(SymGeomParams{0, lambda, alpha, 1.0}, k); };

    // Explicit window [-W, delta + W]; outside it the log ratio is constant
    // (+/- delta * log(1/(1-lambda))) and the remaining mass is an exact
    // geometric tail, so no truncation error is incurred.
    const long long w = 64;
    KlShift out;
    for (long long k = -w; k <= delta + w; ++k) {
        const double p = pmf0(k);
        double term;
        if (k == 0) {
            term = p * std::log(alpha / pmf0(-delta));  // q(0) = p(0 - delta)
            out.dprime_term += term;
        } else if (k == delta) {
            term = p * std::log(p / alpha);
            out.dprime_term += term;
        } else {
            term = p * log_ratio_bulk(lambda, delta, k);
            out.d_term += term;
        }
    }
    const double big_l = -l1m;  // log(1/(1-lambda)) > 0
    // k < -W: ratio log is +delta * L, mass = P(K >= W+1) on the negative side.
    out.d_term += tail_geq(w + 1) * static_cast<double>(delta) * big_l;
    // k > delta + W: ratio log is -delta * L.
    out.d_term -= tail_geq(delta + w + 1) * static_cast<double>(delta) * big_l;
    out.kl = out.d_term + out.dprime_term;
    return out;
}

KlShift kl_shift(const SymGeomParams& params, long long delta) {
    params.validate();
    if (delta < 1) throw ValidationError("kl_shift: shift must be a positive integer");
    const double alpha = params.alpha, lambda = params.lambda;
    const double l1m = std::log1p(-lambda);
    const double big_l = -l1m;
    const double dd = static_cast<double>(delta);

    // Bulk term; the bracket is evaluated with expm1 to avoid cancellation at
    // small lambda: 2*lambda*delta + 2*(1-lambda)^delta - 2 = 2*lambda*delta +
    // 2*expm1(delta*log1p(-lambda)).
    const double pow_dm1 = std::exp((dd - 1.0) * l1m);  // (1-lambda)^(delta-1)
    const double bracket = 2.0 * lambda * dd + 2.0 * std::expm1(dd * l1m) +
                           lambda * lambda * dd * pow_dm1;
    KlShift out;
    out.d_term = 0.5 * (1.0 - alpha) / lambda * big_l * bracket;

    // Atom term: mass alpha moves onto the shifted tail and vice versa.
    const double g = 0.5 * (1.0 - alpha) * lambda * pow_dm1;  // p(delta) = q(0)
    out.dprime_term = (alpha - g) * std::log(alpha / g);
    out.kl = out.d_term + out.dprime_term;

    const KlShift series = kl_shift_series(params, delta);
    if (std::abs(out.kl - series.kl) > 1e-9)
        throw FormulaMismatchError("kl_shift: closed form and series disagree (closed " +
                                   std::to_string(out.kl) + ", series " + std::to_string(series.kl) +
                                   "); the series value is authoritative");
    return out;
}

Vector nbr_sample(const NBRParams& params, std::size_t count, std::uint64_t seed) {
    params.validate();
    Rng rng = Rng::stream(seed, "nbr");
    const double spike = 1.0 / std::sqrt(params.rho_prime());
    Vector out(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
        const double u = rng.uniform();
        double x;
        if (u < params.rho) {
            x = (rng.uniform() < 0.5) ? spike : -spike;
        } else {
            x = params.sigma * rng.normal();
        }
        out[static_cast<Eigen::Index>(i)] = x;
    }
    return out;
}

double nbr_moment(const NBRParams& params, int r) {
    params.validate();
    if (r < 0) throw ValidationError("nbr_moment: r must be >= 0");
    if (r == 0) return 1.0;
    if (r % 2 == 1) return 0.0;
    double dfact = 1.0;  // (r-1)!!
    for (int i = r - 1; i >= 2; i -= 2) dfact *= static_cast<double>(i);
    const double gauss = (1.0 - params.rho) * std::pow(params.sigma, r) * dfact;
    const double spike = params.rho * std::pow(params.rho_prime(), -0.5 * static_cast<double>(r));
    return gauss + spike;
}

}  // namespace spreadlab
