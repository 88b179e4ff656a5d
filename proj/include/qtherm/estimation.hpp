// estimation.hpp -- temperature precision: score functions, Fisher
// information in the analytic regimes and from exact distributions, grouped
// measurement strategies, SNR, time optimization, scaling-exponent fits.
#pragma once

#include "qtherm/distributions.hpp"

#include <cstddef>
#include <vector>

namespace qtherm {

// Which analytic branch an expression belongs to.  The working heuristic for
// picking one automatically: the low-temperature branch applies once
// beta * omega_co >= 1 (collective band thermally frozen), the
// high-temperature branch below that.
enum class RegimeFormula { HighTemperature, LowTemperature };

bool low_temperature_regime(double beta, double omega_co);

struct FisherReport {
    enum class Method { AnalyticHighT, AnalyticLowT, ExactDistribution, MonteCarloSNR };
    Method method = Method::ExactDistribution;
    double fisher = 0.0;            // F_beta
    double crb_variance = 0.0;      // 1 / F_beta (inf when F = 0)
    double precision_figure = 0.0;  // beta^2 * F_beta
    double beta = 0.0;
    double time = 0.0;
};

// Statistic whose sample mean estimates beta: L = c1 (S - <S>) at theta = 0,
// L = c2 (S^2 - <S^2>) at theta = pi/2.  Centerings are the exact
// collective-model moments, so <L> = 0 holds under the exact distribution;
// the coefficients are the large-N forms
//   c1 = -e^-Gamma / (1 - e^-2Gamma) dGamma/dbeta
//   c2 = -(1/2N) d/dbeta (1 + 2 e^-2Gamma N gamma_l)^-1 .
// c2 keeps the full derivative, including the d gamma_h / dbeta and
// gamma_l dGamma/dbeta pieces the asymptotic low-temperature formula drops.
struct ScoreFunction {
    double theta = 0.0;
    double coeff = 0.0;
    double centering = 0.0;
    bool quadratic = false;  // false: acts on S, true: acts on S^2

    double operator()(double s) const {
        return quadratic ? coeff * (s * s - centering) : coeff * (s - centering);
    }
};

ScoreFunction score_function(const MeasurementConfig& config);

// Analytic Fisher information per strategy.  theta must be (close to) 0 or
// pi/2.  High temperature keeps only the individual-band derivative:
//   theta = 0:    N / (e^2Gamma - 1) |dgamma_h/dbeta|^2
//   theta = pi/2: 8 (N gamma_l)^2 / (e^2Gamma + 2 N gamma_l)^2 |dgamma_h/dbeta|^2
FisherReport fisher_high_t(const MeasurementConfig& config);

// Low temperature keeps only the collective-band derivative:
//   theta = 0:    N / (e^2Gamma - 1) |dgamma_l/dbeta|^2
//   theta = pi/2: 2 N^2 / (e^2Gamma + 2 N gamma_l)^2 |dgamma_l/dbeta|^2
// The pi/2 branch grows as N^2 while 2 N gamma_l << e^2Gamma and saturates at
// |dgamma_l/dbeta|^2 / (2 gamma_l^2) beyond the crossover.
FisherReport fisher_low_t(const MeasurementConfig& config);

// Fisher information of the full p(S) table: F = sum_S p (d ln p / dbeta)^2
// with the beta-derivative taken by central differences (step 1e-3 beta)
// plus one Richardson refinement (step halving).  Cells with p < 1e-30 at any
// stencil point are excluded.  The distribution is rebuilt at the shifted
// inverse temperatures from `model`, preserving the input form.
FisherReport fisher_exact(const ReadoutDistribution& dist, const SpectralModel& model);

// Measure in groups of n0 = round(e^2Gamma / (2 gamma_l)) thermometers to
// escape the saturated collective regime:
//   F ~ n_total n0 / (2 e^4Gamma) |dgamma_l/dbeta|^2
// improvement over independent low-T measurement: (1 - e^-2Gamma) e^-2Gamma n0 / 2.
// Falls back to the independent strategy when grouping is pointless
// (n0 < 2 or fewer thermometers than one group).
struct GroupedFisher {
    std::size_t n0 = 0;
    FisherReport report;
    double improvement_ratio = 1.0;
    bool fell_back = false;
};

GroupedFisher grouped_fisher(std::size_t n_total, const DecayFactors& decay);

enum class Observable { Sum, SumSquared };

// Signal-to-noise of resolving beta -> beta + delta_beta through the mean of
// O, with the noise taken at the base point.  delta_beta <= 0 selects the
// default 1e-3 * beta.
struct SnrReport {
    double delta_beta = 0.0;
    double signal = 0.0;  // |change of the mean of O|
    double noise = 0.0;   // std of O at the base point
    double snr = 0.0;
    double d_mean_d_beta = 0.0;
    double min_resolvable_delta_beta = 0.0;  // noise / |d<O>/dbeta|
};

SnrReport snr(const MeasurementConfig& config, const SpectralModel& model, Observable obs,
              double delta_beta = 0.0);

// Fisher maximum over an evolution-time grid (ties keep the smaller t).
struct TimeOptimum {
    double t = 0.0;
    FisherReport report;
};

TimeOptimum optimize_time(const SpectralModel& model, double beta, std::size_t n, double theta,
                          RegimeFormula regime, const std::vector<double>& t_grid);

std::vector<double> linear_grid(double lo, double hi, double step);

// epsilon = min(alpha / d, 1): interaction decaying as r^-alpha in d spatial
// dimensions keeps F ~ N^(2 - epsilon)
double finite_range_scaling_exponent(double alpha_interaction, double dimension);

// least-squares slope of ln F against ln N
struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double max_abs_residual = 0.0;
};

ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& n_fisher);

}  // namespace qtherm
