#pragma once

#include <cstdint>
#include <vector>

#include "spreadlab/errors.hpp"
#include "spreadlab/numerics.hpp"

namespace spreadlab {

/// Symmetric geometric noise law: an atom of mass alpha at the (integer)
/// location c, geometric tails with rate lambda on either side, the whole
/// thing scaled by the amplitude sigma.
struct SymGeomParams {
    long long c = 0;
    double lambda = 0.5;
    double alpha = 0.25;
    double sigma = 1.0;

    void validate() const {
        if (!(lambda > 0.0) || !(lambda < 1.0)) throw ValidationError("SymGeomParams: lambda must be in (0,1)");
        if (!(alpha > 0.0) || !(alpha < 1.0)) throw ValidationError("SymGeomParams: alpha must be in (0,1)");
        if (!(sigma > 0.0)) throw ValidationError("SymGeomParams: sigma must be positive");
    }
};

/// pmf of the unscaled integer law at k.
double symgeom_pmf(const SymGeomParams& params, long long k);

/// i.i.d. draws of sigma * (c + K), K the centered integer law.
std::vector<double> symgeom_sample(const SymGeomParams& params, std::size_t count,
                                   std::uint64_t seed);

/// KL divergence between the centered law and its shift by delta >= 1,
/// split into the bulk term (all k outside the two atoms) and the atom term.
/// Scale-free: independent of sigma.
struct KlShift {
    double kl = 0.0;
    double d_term = 0.0;       // bulk
    double dprime_term = 0.0;  // the two atom positions
};

/// Closed-form KL, cross-validated internally against the series evaluation;
/// throws FormulaMismatchError if they disagree beyond 1e-9.
KlShift kl_shift(const SymGeomParams& params, long long delta);

/// Series evaluation of the same divergence: explicit summation over a window
/// around the atoms plus exact geometric tails (the log ratio is constant
/// outside [0, delta]). Exposed so reports can quote the authoritative value.
KlShift kl_shift_series(const SymGeomParams& params, long long delta);

/// Mixture of a small Gaussian and a rare +-1/sqrt(rho') spike, normalized to
/// unit second moment.
struct NBRParams {
    double rho = 0.1;
    double sigma = 0.0;

    double rho_prime() const { return rho / (1.0 - (1.0 - rho) * sigma * sigma); }

    void validate() const {
        if (!(rho > 0.0) || !(rho < 1.0)) throw ValidationError("NBRParams: rho must be in (0,1)");
        if (sigma < 0.0 || !(sigma * sigma < 1.0 / (1.0 - rho)))
            throw ValidationError("NBRParams: sigma out of range [0, 1/sqrt(1-rho))");
    }
};

Vector nbr_sample(const NBRParams& params, std::size_t count, std::uint64_t seed);

/// E x^r: closed form for even r, zero for odd r by symmetry.
double nbr_moment(const NBRParams& params, int r);

}  // namespace spreadlab
