// oracle.hpp -- brute-force readout probabilities from the exact dephased
// state, used to certify the analytic distribution forms.  Cost grows as 3^N,
// so these stay at small N; the closed forms carry the large-N work.
#pragma once

#include "qtherm/distributions.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace qtherm::oracle {

inline constexpr std::size_t max_enumeration_n = 12;

// Symmetric matrix of pairwise decay exponents Gamma_ij.  The cooperative
// band structure gives gamma_l + gamma_h on the diagonal and gamma_l off it;
// general symmetric matrices are accepted too.
struct DecayMatrix {
    Eigen::MatrixXd g;

    explicit DecayMatrix(Eigen::MatrixXd m);  // validates squareness and symmetry
    std::size_t n() const { return std::size_t(g.rows()); }
};

DecayMatrix collective_decay_matrix(std::size_t n, double gamma_l, double gamma_h);
DecayMatrix collective_decay_matrix(std::size_t n, const DecayFactors& decay);

// Probability of one readout string s in {-1,+1}^N measured along e_theta.
// Evaluated as the average over difference variables d in {-1,0,+1}^N with
// weights {1/4, 1/2, 1/4}:
//   P_s = < exp(-d.G.d) * prod_{j: d_j != 0} s_j e^{i theta d_j} >_d .
// The imaginary part must cancel; |Im| >= 1e-12 raises std::runtime_error.
double exact_probability(const DecayMatrix& gamma, double theta,
                         const std::vector<int>& readout);

// Exact p(S) on {-N..N}.  Same 3^N average, with the readout sum carried out
// combinatorially, so all of p(S) costs barely more than one string.
STable exact_p_of_s(const DecayMatrix& gamma, double theta);

// Full table over all 2^N readout strings (bit j set <=> s_j = +1), computed
// from the Walsh coefficients of the 3^N average by a fast Walsh-Hadamard
// transform.  Cached marginal p(S) included.
ReadoutDistribution enumerate_readouts(const DecayMatrix& gamma, double theta);

// Exact reduced state of two thermometers in the z product basis:
// rho[(e1 e2), (e1' e2')] = 1/4 exp(-d.G.d) with d_i = (e_i - e_i') / 2.
Eigen::Matrix4d exact_reduced_state(const DecayMatrix& gamma);

}  // namespace qtherm::oracle
