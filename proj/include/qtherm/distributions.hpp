// distributions.hpp -- readout statistics for N Ramsey thermometers measured
// along a common axis e_theta = cos(theta) e_x + sin(theta) e_y.  Each readout
// is a string s in {-1,+1}^N; S is the readout sum.
#pragma once

#include "qtherm/decoherence.hpp"
#include "qtherm/numerics.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace qtherm {

struct MeasurementConfig {
    std::size_t n = 1;   // number of thermometers
    double theta = 0.0;  // measurement angle in [0, pi/2]
    DecayFactors decay;  // decay factors at the working (beta, t)
};

MeasurementConfig make_config(std::size_t n, double theta, const DecayFactors& decay);

// p(S) on the support S in {-N, -N+2, ..., N}; index k maps to S = 2k - N.
struct STable {
    std::size_t n = 0;
    std::vector<double> p;

    double s_of_index(std::size_t k) const { return 2.0 * double(k) - double(n); }
    double sum() const;
    double mean() const;
    double second_moment() const;
    double variance() const;
    double fourth_moment() const;
    double variance_of_s_squared() const;
};

// total-variation distance; both tables must share the same support
double tv_distance(const STable& a, const STable& b);

// "S p" rows with a '#' header; 17 significant digits
void write_s_table(std::ostream& out, const STable& table);
STable read_s_table(std::istream& in);

struct ProductForm {
    double p_plus = 0.5;  // per-spin probability of s = +1
};

struct GaussianSForm {
    double mean = 0.0;
    double var = 0.0;
};

struct ReadoutDistribution {
    enum class Form { ExactEnumerated, Product, CollectiveGaussianS, CollectiveExactS };
    Form form = Form::CollectiveExactS;
    MeasurementConfig config;

    ProductForm product;          // Form::Product
    GaussianSForm gaussian;       // Form::CollectiveGaussianS
    STable table;                 // CollectiveExactS; cached marginal for ExactEnumerated
    std::vector<double> string_p; // ExactEnumerated: p per string, bit j set <=> s_j = +1

    std::size_t gh_nodes_used = 0;  // quadrature diagnostics for CollectiveExactS
    double gh_convergence = 0.0;    // max |p_64 - p_128| style node-doubling residual

    // marginal p(S) whatever the form (Gaussian is discretized onto the support)
    STable to_s_table() const;
    double mean_s() const;
    double var_s() const;
};

// Exact readout-sum distribution of the collective-field model: conditioned on
// the shared low-band phase phi0 ~ Normal(0, gamma_l / 2) the spins are
// independent with p(s=+1 | phi0) = (1 + e^-gamma_h cos(theta + 2 phi0)) / 2.
// Gauss-Hermite quadrature over phi0 (gamma_l = 0 collapses to a point mass);
// the rule is doubled until the table is stable, starting from `nodes`.
ReadoutDistribution collective_field_distribution(const MeasurementConfig& config,
                                                  std::size_t nodes = 64);

// Independent-spin form valid at theta = 0: p(s=+1) = (1 + e^-Gamma) / 2 with
// Gamma = gamma_l + gamma_h.  The low-band correlations it drops are O(gamma_l^2).
ReadoutDistribution product_distribution(const MeasurementConfig& config);

// Large-N Gaussian of S at theta = pi/2: mean 0, variance N (1 + 2 e^-2Gamma N gamma_l).
ReadoutDistribution correlation_distribution(const MeasurementConfig& config);

// Correlation-enhanced table at theta = pi/2: p(S) proportional to
// C(N, k) exp(S^2 gamma_l e^-2Gamma / (1 + 2 N gamma_l e^-2Gamma)), normalized
// by explicit summation over the support.  Accurate up to O(N gamma_l^2).
ReadoutDistribution correlation_s_table(const MeasurementConfig& config);

// Large-N Gaussian of S at theta = 0: mean N e^-Gamma, variance N (1 - e^-2Gamma).
// Gamma = 0 degenerates to a point mass at S = N (returned as an exact table).
ReadoutDistribution gaussian_s_theta0(const MeasurementConfig& config);

// Reduced two-thermometer state to first order in gamma_l:
//   1/4 (I + e^-Gamma sx)(I + e^-Gamma sx)  +  gamma_l e^-2Gamma / 2 * sy sy,
// real in the z product basis.  Positive semidefinite whenever gamma_l <=
// (e^2Gamma - 1) / 2, which holds for every valid split gamma_l <= Gamma.
Eigen::Matrix4d two_thermometer_state(const DecayFactors& decay);

}  // namespace qtherm
