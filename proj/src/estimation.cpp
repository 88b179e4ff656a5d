#include "qtherm/estimation.hpp"

#include "qtherm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtherm {

namespace {

constexpr double theta_tol = 1e-9;

bool near(double a, double b) { return std::abs(a - b) <= theta_tol; }

FisherReport make_report(FisherReport::Method method, double fisher, const DecayFactors& decay) {
    FisherReport r;
    r.method = method;
    r.fisher = fisher;
    r.crb_variance = fisher > 0.0 ? 1.0 / fisher : std::numeric_limits<double>::infinity();
    r.precision_figure = std::isfinite(decay.beta) ? decay.beta * decay.beta * fisher : 0.0;
    r.beta = decay.beta;
    r.time = decay.time;
    return r;
}

double analytic_fisher(const MeasurementConfig& config, double d_band, RegimeFormula regime) {
    const DecayFactors& d = config.decay;
    const double g = d.total();
    const double n = static_cast<double>(config.n);
    if (near(config.theta, 0.0)) {
        if (g <= 0.0) return 0.0;  // no dephasing, S carries no beta dependence
        return n / std::expm1(2.0 * g) * d_band * d_band;
    }
    if (near(config.theta, half_pi)) {
        const double denom = std::exp(2.0 * g) + 2.0 * n * d.gamma_l;
        if (regime == RegimeFormula::HighTemperature) {
            const double num = n * d.gamma_l;
            return 8.0 * num * num / (denom * denom) * d_band * d_band;
        }
        return 2.0 * n * n / (denom * denom) * d_band * d_band;
    }
    throw std::invalid_argument("analytic fisher formulas cover theta = 0 and pi/2 only");
}

}  // namespace

bool low_temperature_regime(double beta, double omega_co) {
    return beta * omega_co >= 1.0;
}

ScoreFunction score_function(const MeasurementConfig& config) {
    const DecayFactors& d = config.decay;
    const double g = d.total();
    const double n = static_cast<double>(config.n);
    ScoreFunction s;
    s.theta = config.theta;
    if (near(config.theta, 0.0)) {
        if (g <= 0.0) throw std::domain_error("score undefined without dephasing (total decay is zero)");
        s.quadratic = false;
        s.coeff = -std::exp(-g) / (-std::expm1(-2.0 * g)) * d.d_total_d_beta();
        s.centering = n * std::exp(-g);
        return s;
    }
    if (near(config.theta, half_pi)) {
        const double e2 = std::exp(-2.0 * g);
        const double u = 1.0 + 2.0 * n * e2 * d.gamma_l;
        s.quadratic = true;
        s.coeff = e2 * (d.d_gamma_l_d_beta - 2.0 * d.gamma_l * d.d_total_d_beta()) / (u * u);
        // exact second moment, not the large-N approximation, so the score
        // averages to zero under the exact distribution
        const double v = 0.5 * std::exp(-2.0 * d.gamma_h) * (-std::expm1(-4.0 * d.gamma_l));
        s.centering = n + n * (n - 1.0) * v;
        return s;
    }
    throw std::invalid_argument("score function defined for theta = 0 and pi/2 only");
}

FisherReport fisher_high_t(const MeasurementConfig& config) {
    const double f = analytic_fisher(config, config.decay.d_gamma_h_d_beta, RegimeFormula::HighTemperature);
    return make_report(FisherReport::Method::AnalyticHighT, f, config.decay);
}

FisherReport fisher_low_t(const MeasurementConfig& config) {
    const double f = analytic_fisher(config, config.decay.d_gamma_l_d_beta, RegimeFormula::LowTemperature);
    return make_report(FisherReport::Method::AnalyticLowT, f, config.decay);
}

FisherReport fisher_exact(const ReadoutDistribution& dist, const SpectralModel& model) {
    const MeasurementConfig& cfg = dist.config;
    const double beta = cfg.decay.beta;
    if (!std::isfinite(beta)) {
        throw std::domain_error("fisher_exact needs a finite beta to differentiate against");
    }
    const double h = 1e-3 * beta;

    auto rebuild = [&](double b) {
        MeasurementConfig shifted = make_config(cfg.n, cfg.theta, decay_factors(model, b, cfg.decay.time));
        switch (dist.form) {
            case ReadoutDistribution::Form::Product:
                return product_distribution(shifted).to_s_table();
            case ReadoutDistribution::Form::CollectiveGaussianS:
                return (near(cfg.theta, half_pi) ? correlation_distribution(shifted)
                                                 : gaussian_s_theta0(shifted))
                    .to_s_table();
            case ReadoutDistribution::Form::CollectiveExactS:
                return collective_field_distribution(shifted).to_s_table();
            case ReadoutDistribution::Form::ExactEnumerated:
                break;
        }
        throw std::invalid_argument("fisher_exact cannot rebuild an enumerated distribution from a spectral model");
    };

    const STable center = dist.to_s_table();
    const STable ph = rebuild(beta + h);
    const STable mh = rebuild(beta - h);
    const STable ph2 = rebuild(beta + 0.5 * h);
    const STable mh2 = rebuild(beta - 0.5 * h);

    constexpr double p_floor = 1e-30;  // below this, log derivatives are noise
    double f = 0.0;
    for (std::size_t k = 0; k < center.p.size(); ++k) {
        const double pc = center.p[k];
        if (pc < p_floor || ph.p[k] < p_floor || mh.p[k] < p_floor || ph2.p[k] < p_floor ||
            mh2.p[k] < p_floor) {
            continue;
        }
        const double d1 = (std::log(ph.p[k]) - std::log(mh.p[k])) / (2.0 * h);
        const double d2 = (std::log(ph2.p[k]) - std::log(mh2.p[k])) / h;
        const double dr = (4.0 * d2 - d1) / 3.0;  // Richardson step halving
        f += pc * dr * dr;
    }
    return make_report(FisherReport::Method::ExactDistribution, f, cfg.decay);
}

GroupedFisher grouped_fisher(std::size_t n_total, const DecayFactors& decay) {
    if (n_total == 0) throw std::invalid_argument("grouped_fisher needs at least one thermometer");
    if (!(decay.gamma_l > 0.0)) {
        throw std::domain_error("grouped_fisher needs a positive collective decay gamma_l");
    }
    const double g = decay.total();
    const double dl = decay.d_gamma_l_d_beta;
    const double n = static_cast<double>(n_total);
    GroupedFisher out;
    out.n0 = static_cast<std::size_t>(std::llround(std::exp(2.0 * g) / (2.0 * decay.gamma_l)));

    const double f_independent = n / std::expm1(2.0 * g) * dl * dl;
    if (out.n0 < 2) {
        // optimal group is a single thermometer: plain independent readout
        out.fell_back = true;
        out.improvement_ratio = 1.0;
        out.report = make_report(FisherReport::Method::AnalyticLowT, f_independent, decay);
        return out;
    }
    if (out.n0 >= n_total) {
        // cannot split into groups of the optimal size, best effort is one
        // group of everything
        const double denom = std::exp(2.0 * g) + 2.0 * n * decay.gamma_l;
        const double f = 2.0 * n * n / (denom * denom) * dl * dl;
        out.fell_back = true;
        out.improvement_ratio = f / f_independent;
        out.report = make_report(FisherReport::Method::AnalyticLowT, f, decay);
        return out;
    }
    const double f = n * static_cast<double>(out.n0) / (2.0 * std::exp(4.0 * g)) * dl * dl;
    out.improvement_ratio = 0.5 * (-std::expm1(-2.0 * g)) * std::exp(-2.0 * g) * static_cast<double>(out.n0);
    out.report = make_report(FisherReport::Method::AnalyticLowT, f, decay);
    return out;
}

SnrReport snr(const MeasurementConfig& config, const SpectralModel& model, Observable obs,
              double delta_beta) {
    const double beta = config.decay.beta;
    if (!std::isfinite(beta)) throw std::domain_error("snr needs a finite base beta");
    if (delta_beta <= 0.0) delta_beta = 1e-3 * beta;

    const STable base = collective_field_distribution(config).to_s_table();
    MeasurementConfig shifted =
        make_config(config.n, config.theta, decay_factors(model, beta + delta_beta, config.decay.time));
    const STable moved = collective_field_distribution(shifted).to_s_table();

    double m0 = 0.0, m1 = 0.0, var = 0.0;
    if (obs == Observable::Sum) {
        m0 = base.mean();
        m1 = moved.mean();
        var = base.variance();
    } else {
        m0 = base.second_moment();
        m1 = moved.second_moment();
        var = base.variance_of_s_squared();
    }

    SnrReport r;
    r.delta_beta = delta_beta;
    r.signal = std::abs(m1 - m0);
    r.noise = std::sqrt(std::max(var, 0.0));
    r.snr = r.noise > 0.0 ? r.signal / r.noise
                          : (r.signal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    r.d_mean_d_beta = (m1 - m0) / delta_beta;
    r.min_resolvable_delta_beta = std::abs(r.d_mean_d_beta) > 0.0
                                      ? r.noise / std::abs(r.d_mean_d_beta)
                                      : std::numeric_limits<double>::infinity();
    return r;
}

TimeOptimum optimize_time(const SpectralModel& model, double beta, std::size_t n, double theta,
                          RegimeFormula regime, const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("optimize_time needs a non-empty time grid");
    TimeOptimum best;
    best.report.fisher = -1.0;
    for (double t : t_grid) {
        if (!(t >= 0.0)) throw std::domain_error("optimize_time: negative time in grid");
        MeasurementConfig cfg = make_config(n, theta, decay_factors(model, beta, t));
        FisherReport r =
            regime == RegimeFormula::HighTemperature ? fisher_high_t(cfg) : fisher_low_t(cfg);
        if (r.fisher > best.report.fisher) {  // strict: ties keep the earlier (smaller) t
            best.t = t;
            best.report = r;
        }
    }
    return best;
}

std::vector<double> linear_grid(double lo, double hi, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("linear_grid: step must be positive");
    if (!(hi >= lo)) throw std::invalid_argument("linear_grid: hi must be >= lo");
    std::vector<double> g;
    const std::size_t count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    g.reserve(count);
    for (std::size_t i = 0; i < count; ++i) g.push_back(lo + static_cast<double>(i) * step);
    return g;
}

double finite_range_scaling_exponent(double alpha_interaction, double dimension) {
    if (!(alpha_interaction >= 0.0)) {
        throw std::domain_error("interaction exponent must be non-negative");
    }
    if (!(dimension > 0.0)) throw std::domain_error("dimension must be positive");
    return std::min(alpha_interaction / dimension, 1.0);
}

ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& n_fisher) {
    if (n_fisher.size() < 3) {
        throw std::invalid_argument("scaling fit needs at least three (N, F) points");
    }
    std::vector<double> xs, ys;
    xs.reserve(n_fisher.size());
    ys.reserve(n_fisher.size());
    for (const auto& [n, f] : n_fisher) {
        if (!(n > 0.0) || !(f > 0.0)) {
            throw std::domain_error("scaling fit needs positive N and positive Fisher values");
        }
        xs.push_back(std::log(n));
        ys.push_back(std::log(f));
    }
    std::vector<double> sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("scaling fit needs distinct N values");
    }

    const double m = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
        ss_tot += (ys[i] - my) * (ys[i] - my);
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
    }
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res > 0.0 ? 0.0 : 1.0);
    return fit;
}

}  // namespace qtherm
