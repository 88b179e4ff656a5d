#include "qtherm/sampling.hpp"

#include "qtherm/numerics.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace qtherm {

namespace {

constexpr double theta_tol = 1e-9;

// murmur3 finalizer, scrambles the shot index into its own start state
std::uint64_t scramble(std::uint64_t h) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdull;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ull;
    h ^= h >> 33;
    return h;
}

}  // namespace

double SplitMix64::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * pi * u2);
}

SplitMix64 shot_stream(std::uint64_t seed, std::uint64_t shot) {
    return SplitMix64{seed ^ scramble(shot + 0x632be59bd9b4e019ull)};
}

ReadoutBatch sample_readouts(const MeasurementConfig& config, std::size_t shots,
                             std::uint64_t seed, bool full) {
    if (shots == 0) throw std::invalid_argument("sample_readouts needs at least one shot");
    if (full && config.n > 64) {
        throw std::invalid_argument("full per-spin records are limited to n <= 64");
    }
    ReadoutBatch batch;
    batch.config = config;
    batch.seed = seed;
    batch.full = full;
    batch.s_sum.resize(shots);
    if (full) batch.spins.resize(shots);

    const double phi_sd = std::sqrt(0.5 * config.decay.gamma_l);
    const double visibility = std::exp(-config.decay.gamma_h);
    for (std::size_t i = 0; i < shots; ++i) {
        SplitMix64 rng = shot_stream(seed, i);
        const double phi = phi_sd * rng.normal();
        const double p_plus = 0.5 * (1.0 + visibility * std::cos(config.theta + 2.0 * phi));
        std::int32_t s = 0;
        std::uint64_t bits = 0;
        for (std::size_t j = 0; j < config.n; ++j) {
            if (rng.uniform() < p_plus) {
                s += 1;
                bits |= 1ull << (j & 63);
            } else {
                s -= 1;
            }
        }
        batch.s_sum[i] = s;
        if (full) batch.spins[i] = bits;
    }
    return batch;
}

EmpiricalMoments empirical_moments(const ReadoutBatch& batch) {
    const std::size_t m = batch.shots();
    if (m == 0) throw std::invalid_argument("empirical_moments on an empty batch");
    const double n = static_cast<double>(batch.config.n);

    std::int64_t sum_s = 0;
    long double sum_s2 = 0.0L;
    for (std::int32_t s : batch.s_sum) {
        sum_s += s;
        sum_s2 += static_cast<long double>(s) * s;
    }
    EmpiricalMoments out;
    out.shots = m;
    out.mean_s = static_cast<double>(static_cast<long double>(sum_s) / m);
    out.mean_s2 = static_cast<double>(sum_s2 / m);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (m >= 2) {
        long double c2 = 0.0L, c2_sq = 0.0L;
        for (std::int32_t s : batch.s_sum) {
            const long double ds = static_cast<long double>(s) - out.mean_s;
            const long double dq = static_cast<long double>(s) * s - out.mean_s2;
            c2 += ds * ds;
            c2_sq += dq * dq;
        }
        out.var_s = static_cast<double>(c2 / (m - 1));
        out.var_s2 = static_cast<double>(c2_sq / (m - 1));
        out.se_mean_s = std::sqrt(out.var_s / static_cast<double>(m));
        out.se_mean_s2 = std::sqrt(out.var_s2 / static_cast<double>(m));
    } else {
        out.var_s = out.var_s2 = out.se_mean_s = out.se_mean_s2 = nan;
    }

    if (batch.config.n >= 2) {
        const double pairs = n * (n - 1.0);
        out.pair_correlator = (out.mean_s2 - n) / pairs;
        out.se_pair_correlator = out.se_mean_s2 / pairs;
    } else {
        out.pair_correlator = out.se_pair_correlator = nan;
    }
    return out;
}

STable empirical_s_table(const ReadoutBatch& batch) {
    const std::size_t m = batch.shots();
    if (m == 0) throw std::invalid_argument("empirical_s_table on an empty batch");
    STable table;
    table.n = batch.config.n;
    table.p.assign(batch.config.n + 1, 0.0);
    for (std::int32_t s : batch.s_sum) {
        table.p[static_cast<std::size_t>((s + static_cast<std::int32_t>(batch.config.n)) / 2)] +=
            1.0;
    }
    for (double& p : table.p) p /= static_cast<double>(m);
    return table;
}

EmpiricalFisher empirical_fisher(const ReadoutBatch& batch, const SpectralModel& model,
                                 double delta_beta) {
    const MeasurementConfig& cfg = batch.config;
    const double beta = cfg.decay.beta;
    if (!std::isfinite(beta)) throw std::domain_error("empirical_fisher needs a finite beta");
    if (batch.shots() < 2) throw std::invalid_argument("empirical_fisher needs at least two shots");
    const bool linear = std::abs(cfg.theta) <= theta_tol;
    if (!linear && std::abs(cfg.theta - half_pi) > theta_tol) {
        throw std::invalid_argument("empirical_fisher covers theta = 0 (S) and pi/2 (S^2) only");
    }
    if (delta_beta <= 0.0) delta_beta = 1e-3 * beta;

    // exact collective-model mean of the observable at a shifted beta
    const double n = static_cast<double>(cfg.n);
    auto exact_mean = [&](double b) {
        const DecayFactors d = decay_factors(model, b, cfg.decay.time);
        if (linear) return n * std::exp(-d.total()) * std::cos(cfg.theta);
        const double v =
            0.5 * std::exp(-2.0 * d.gamma_h) * (1.0 + std::cos(2.0 * cfg.theta) * std::exp(-4.0 * d.gamma_l));
        return n + n * (n - 1.0) * v;
    };
    const double d_mean =
        (exact_mean(beta + delta_beta) - exact_mean(beta - delta_beta)) / (2.0 * delta_beta);

    const std::size_t m = batch.shots();
    long double sum_o = 0.0L;
    for (std::int32_t s : batch.s_sum) {
        sum_o += linear ? static_cast<long double>(s) : static_cast<long double>(s) * s;
    }
    const long double mean_o = sum_o / m;
    long double c2 = 0.0L, c4 = 0.0L;
    for (std::int32_t s : batch.s_sum) {
        const long double o = linear ? static_cast<long double>(s) : static_cast<long double>(s) * s;
        const long double d = o - mean_o;
        c2 += d * d;
        c4 += d * d * d * d;
    }
    const double var_o = static_cast<double>(c2 / (m - 1));
    if (!(var_o > 0.0)) throw std::runtime_error("empirical_fisher: observable variance vanished in this batch");
    const double m4 = static_cast<double>(c4 / m);

    EmpiricalFisher out;
    out.d_mean_d_beta = d_mean;
    out.observable_variance = var_o;
    out.fisher = d_mean * d_mean / var_o;
    const double md = static_cast<double>(m);
    const double var_of_var = (m4 - var_o * var_o * (md - 3.0) / (md - 1.0)) / md;
    out.se = out.fisher * std::sqrt(std::max(var_of_var, 0.0)) / var_o;
    return out;
}

void write_batch(std::ostream& os, const ReadoutBatch& batch) {
    const MeasurementConfig& cfg = batch.config;
    os << "# qtherm readout batch v1\n";
    os << "# n=" << cfg.n << " theta=" << format_g17(cfg.theta)
       << " beta=" << format_g17(cfg.decay.beta) << " time=" << format_g17(cfg.decay.time) << "\n";
    os << "# gamma_l=" << format_g17(cfg.decay.gamma_l)
       << " gamma_h=" << format_g17(cfg.decay.gamma_h) << "\n";
    os << "# seed=" << batch.seed << " shots=" << batch.shots() << " full=" << (batch.full ? 1 : 0)
       << "\n";
    if (!batch.full) {
        os << "# columns: shot S\n";
        for (std::size_t i = 0; i < batch.shots(); ++i) {
            os << i << " " << batch.s_sum[i] << "\n";
        }
        return;
    }
    os << "# columns: shot spins (+1/-1 per site)\n";
    for (std::size_t i = 0; i < batch.shots(); ++i) {
        os << i;
        for (std::size_t j = 0; j < cfg.n; ++j) {
            os << " " << ((batch.spins[i] >> (j & 63)) & 1ull ? 1 : -1);
        }
        os << "\n";
    }
}

}  // namespace qtherm
