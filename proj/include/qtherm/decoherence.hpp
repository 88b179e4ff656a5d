// decoherence.hpp -- dephasing decay factors of Ramsey thermometers in a
// common thermal bath, split into the collective low band and the individual
// high band.
#pragma once

#include "qtherm/spectral.hpp"

namespace qtherm {

enum class Band { Low, High, Full };

// Thermal decay integral
//   4 * Int J(w) coth(beta w / 2) (1 - cos(w t)) / w^2 dw
// over the requested band ([0, w_co], (w_co, inf) or [0, inf)).  The
// white-noise channel is NOT included here; beta may be +infinity for the
// zero-temperature limit.  Throws std::runtime_error when the quadrature
// cannot reach the requested tolerance (rough tabulated grids).
double gamma_beta_integral(const SpectralModel& m, double beta, double t, Band band,
                           double rel_tol = 1e-13);

// Analytic beta-derivative of the same integral,
//   -Int t^2 w J(w) sinc(w t / 2)^2 / sinh(beta w / 2)^2 dw,
// always <= 0 (raising beta can only slow dephasing).
double d_gamma_d_beta_integral(const SpectralModel& m, double beta, double t, Band band,
                               double rel_tol = 1e-13);

// Markovian white-noise contribution 2 * gamma * t.
double white_noise_decay(double gamma_white, double t);

struct DecayFactors {
    double beta = 0.0;
    double time = 0.0;
    double gamma_l = 0.0;           // collective low-band decay, shared by all pairs
    double gamma_h = 0.0;           // individual high-band decay + white noise
    double d_gamma_l_d_beta = 0.0;  // <= 0
    double d_gamma_h_d_beta = 0.0;  // <= 0

    double total() const { return gamma_l + gamma_h; }
    double d_total_d_beta() const { return d_gamma_l_d_beta + d_gamma_h_d_beta; }
};

// Both band decay factors and their beta-derivatives at (beta, t).
DecayFactors decay_factors(const SpectralModel& m, double beta, double t,
                           double rel_tol = 1e-13);

}  // namespace qtherm
