// sampling.hpp -- Monte Carlo readout generation for the collective-field
// model and empirical estimators over the resulting batches.
#pragma once

#include "qtherm/distributions.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qtherm {

// Counter-based SplitMix64: every shot derives its own stream from
// (seed, shot index), so batches are bit-identical for a given
// (config, shots, seed) regardless of how the loop is scheduled.
struct SplitMix64 {
    std::uint64_t state = 0;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform on [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller (one value per call, no caching)
    double normal();
};

SplitMix64 shot_stream(std::uint64_t seed, std::uint64_t shot);

struct ReadoutBatch {
    MeasurementConfig config;
    std::uint64_t seed = 0;
    bool full = false;                 // per-spin outcomes kept (n <= 64)
    std::vector<std::int32_t> s_sum;   // per-shot total spin S
    std::vector<std::uint64_t> spins;  // full mode: bit j set means spin j read +1

    std::size_t shots() const { return s_sum.size(); }
};

// Draw the collective field phi ~ N(0, gamma_l / 2) once per shot, then n
// conditionally independent spins with
//   p(+1 | phi) = (1 + e^-gamma_h cos(theta + 2 phi)) / 2 .
ReadoutBatch sample_readouts(const MeasurementConfig& config, std::size_t shots,
                             std::uint64_t seed, bool full = false);

struct EmpiricalMoments {
    std::size_t shots = 0;
    double mean_s = 0.0;
    double var_s = 0.0;  // unbiased
    double se_mean_s = 0.0;
    double mean_s2 = 0.0;
    double var_s2 = 0.0;
    double se_mean_s2 = 0.0;
    double pair_correlator = 0.0;  // mean of (S^2 - n) / (n (n - 1)), NaN at n = 1
    double se_pair_correlator = 0.0;
};

EmpiricalMoments empirical_moments(const ReadoutBatch& batch);

// Histogram of the batch over the full S support (zero cells kept).
STable empirical_s_table(const ReadoutBatch& batch);

// Method-of-moments Fisher proxy F = (d<O>/dbeta)^2 / Var(O), with O = S at
// theta = 0 and O = S^2 at theta = pi/2.  The mean derivative comes from the
// exact model at beta +- delta_beta (default 1e-3 beta), the variance from
// the batch; the standard error propagates the fourth-moment uncertainty of
// the variance estimate.
struct EmpiricalFisher {
    double fisher = 0.0;
    double se = 0.0;
    double d_mean_d_beta = 0.0;
    double observable_variance = 0.0;
};

EmpiricalFisher empirical_fisher(const ReadoutBatch& batch, const SpectralModel& model,
                                 double delta_beta = 0.0);

void write_batch(std::ostream& os, const ReadoutBatch& batch);

}  // namespace qtherm
