#include "qtherm/commands.hpp"

#include "qtherm/estimation.hpp"
#include "qtherm/numerics.hpp"
#include "qtherm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qtherm {

namespace {

void csv_header(std::ostream& os, const char* command, const RunConfig& cfg) {
    os << "# qtherm csv v1\n";
    os << "# command: " << command << "\n";
    if (cfg.spectrum_file.empty()) {
        os << "# model: ohmic alpha=" << format_g17(cfg.alpha) << " omega_c=" << format_g17(cfg.omega_c);
    } else {
        os << "# model: tabulated file=" << cfg.spectrum_file;
    }
    os << " omega_co=" << format_g17(cfg.omega_co) << " gamma_white=" << format_g17(cfg.gamma_white)
       << "\n";
}

std::string theta_label(double theta) {
    return std::abs(theta - half_pi) <= 1e-9 ? "pi/2" : format_g17(theta);
}

FisherReport auto_fisher(const MeasurementConfig& mc, double omega_co) {
    return low_temperature_regime(mc.decay.beta, omega_co) ? fisher_low_t(mc) : fisher_high_t(mc);
}

}  // namespace

void run_gamma(const RunConfig& cfg, std::ostream& os) {
    const SpectralModel model = model_from(cfg);
    std::vector<double> betas = cfg.beta;
    std::vector<double> times = cfg.time;
    std::sort(betas.begin(), betas.end());
    std::sort(times.begin(), times.end());

    csv_header(os, "gamma", cfg);
    os << "beta,time,gamma_l,gamma_h,d_gamma_l_d_beta,d_gamma_h_d_beta\n";
    for (double beta : betas) {
        for (double t : times) {
            const DecayFactors d = decay_factors(model, beta, t);
            os << format_g17(beta) << "," << format_g17(t) << "," << format_g17(d.gamma_l) << ","
               << format_g17(d.gamma_h) << "," << format_g17(d.d_gamma_l_d_beta) << ","
               << format_g17(d.d_gamma_h_d_beta) << "\n";
        }
    }
}

void run_fig2(const RunConfig& cfg, std::ostream& high_t_os, std::ostream& low_t_os) {
    const SpectralModel model = model_from(cfg);
    const std::vector<double> grid = time_grid(cfg);

    for (int pass = 0; pass < 2; ++pass) {
        const bool low = pass == 1;
        std::ostream& os = low ? low_t_os : high_t_os;
        csv_header(os, "fig2", cfg);
        os << "# regime: " << (low ? "low" : "high") << "-temperature\n";
        os << "beta,theta,n,t_opt,fisher,beta2_fisher\n";

        for (double beta : cfg.beta) {
            if (low_temperature_regime(beta, cfg.omega_co) != low) continue;
            const RegimeFormula regime =
                low ? RegimeFormula::LowTemperature : RegimeFormula::HighTemperature;
            for (double theta : cfg.theta) {
                const TimeOptimum opt = optimize_time(model, beta, 1, theta, regime, grid);
                const DecayFactors decay = decay_factors(model, beta, opt.t);
                std::vector<std::pair<double, double>> points;
                for (std::size_t n : cfg.n) {
                    const MeasurementConfig mc = make_config(n, theta, decay);
                    const FisherReport r = low ? fisher_low_t(mc) : fisher_high_t(mc);
                    os << format_g17(beta) << "," << theta_label(theta) << "," << n << ","
                       << format_g17(opt.t) << "," << format_g17(r.fisher) << ","
                       << format_g17(r.precision_figure) << "\n";
                    if (r.fisher > 0.0) points.emplace_back(static_cast<double>(n), r.fisher);
                }
                if (points.size() >= 3) {
                    const ScalingFit fit = fit_scaling_exponent(points);
                    os << "# fit beta=" << format_g17(beta) << " theta=" << theta_label(theta)
                       << " slope=" << format_g17(fit.slope) << " intercept="
                       << format_g17(fit.intercept) << " r_squared=" << format_g17(fit.r_squared)
                       << "\n";
                }
            }
        }
    }
}

void run_fisher(const RunConfig& cfg, std::ostream& os) {
    const SpectralModel model = model_from(cfg);
    csv_header(os, "fisher", cfg);
    os << "# shots=" << cfg.shots << " seed=" << cfg.seed << "\n";
    os << "beta,time,n,theta,low_t_regime,fisher_analytic,fisher_exact,fisher_empirical,"
          "fisher_empirical_se\n";

    std::uint64_t row = 0;
    for (double beta : cfg.beta) {
        for (double t : cfg.time) {
            const DecayFactors decay = decay_factors(model, beta, t);
            for (std::size_t n : cfg.n) {
                for (double theta : cfg.theta) {
                    const MeasurementConfig mc = make_config(n, theta, decay);
                    const bool low = low_temperature_regime(beta, cfg.omega_co);
                    const FisherReport analytic = low ? fisher_low_t(mc) : fisher_high_t(mc);
                    const FisherReport exact =
                        fisher_exact(collective_field_distribution(mc), model);
                    // one independent stream per row so adding rows never
                    // reshuffles earlier ones
                    const ReadoutBatch batch =
                        sample_readouts(mc, cfg.shots, cfg.seed + row, false);
                    const EmpiricalFisher emp = empirical_fisher(batch, model, cfg.delta_beta_rel * beta);
                    os << format_g17(beta) << "," << format_g17(t) << "," << n << ","
                       << theta_label(theta) << "," << (low ? 1 : 0) << ","
                       << format_g17(analytic.fisher) << "," << format_g17(exact.fisher) << ","
                       << format_g17(emp.fisher) << "," << format_g17(emp.se) << "\n";
                    ++row;
                }
            }
        }
    }
}

void run_sample(const RunConfig& cfg, std::ostream& os) {
    const SpectralModel model = model_from(cfg);
    const DecayFactors decay = decay_factors(model, cfg.beta.front(), cfg.time.front());
    const MeasurementConfig mc = make_config(cfg.n.front(), cfg.theta.front(), decay);
    const ReadoutBatch batch = sample_readouts(mc, cfg.shots, cfg.seed, cfg.sample_full);
    write_batch(os, batch);
}

SweepSpec make_sweep(const std::string& param, const std::string& grid, bool log_scale) {
    static const char* allowed[] = {"alpha", "omega_c", "omega_co", "gamma_white",
                                    "beta",  "time",    "n"};
    if (std::find_if(std::begin(allowed), std::end(allowed),
                     [&](const char* a) { return param == a; }) == std::end(allowed)) {
        throw ConfigError("sweep parameter '" + param +
                          "' not supported (alpha, omega_c, omega_co, gamma_white, beta, time, n)");
    }
    double lo = 0.0, hi = 0.0;
    std::size_t count = 0;
    {
        std::istringstream in(grid);
        char c1 = 0, c2 = 0;
        if (!(in >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':') {
            throw ConfigError("sweep grid must be lo:hi:count, got '" + grid + "'");
        }
        in >> std::ws;
        if (in.peek() != std::char_traits<char>::eof()) {
            throw ConfigError("sweep grid must be lo:hi:count, got '" + grid + "'");
        }
    }
    if (count < 2) throw ConfigError("sweep grid needs at least two points");
    if (count > 100000) throw ConfigError("sweep grid count too large");
    if (!(hi > lo)) throw ConfigError("sweep grid needs hi > lo");
    if (log_scale && !(lo > 0.0)) throw ConfigError("log-scale sweep needs lo > 0");

    SweepSpec spec;
    spec.param = param;
    spec.values.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(count - 1);
        spec.values[i] = log_scale ? lo * std::pow(hi / lo, f) : lo + f * (hi - lo);
    }
    if (param == "n") {
        for (double& v : spec.values) v = std::round(v);
        spec.values.erase(std::unique(spec.values.begin(), spec.values.end()), spec.values.end());
        for (double v : spec.values) {
            if (v < 1.0) throw ConfigError("sweep over n needs values >= 1");
        }
    }
    return spec;
}

void run_sweep(const RunConfig& cfg, const SweepSpec& spec, std::ostream& os) {
    if (spec.values.empty()) throw ConfigError("sweep has no evaluation points");

    struct Row {
        double value = 0.0;
        DecayFactors decay;
        double fisher = 0.0;
        double beta2_fisher = 0.0;
    };
    std::vector<Row> rows(spec.values.size());
    std::vector<std::string> errors(spec.values.size());

    parallel_for(spec.values.size(), resolve_threads(cfg), [&](std::size_t i) {
        try {
            RunConfig point = cfg;
            double beta = cfg.beta.front();
            double t = cfg.time.front();
            std::size_t n = cfg.n.front();
            const double v = spec.values[i];
            if (spec.param == "alpha") point.alpha = v;
            else if (spec.param == "omega_c") point.omega_c = v;
            else if (spec.param == "omega_co") point.omega_co = v;
            else if (spec.param == "gamma_white") point.gamma_white = v;
            else if (spec.param == "beta") beta = v;
            else if (spec.param == "time") t = v;
            else n = static_cast<std::size_t>(v);

            const SpectralModel model = model_from(point);
            Row& r = rows[i];
            r.value = v;
            r.decay = decay_factors(model, beta, t);
            const MeasurementConfig mc = make_config(n, cfg.theta.front(), r.decay);
            const FisherReport rep = auto_fisher(mc, point.omega_co);
            r.fisher = rep.fisher;
            r.beta2_fisher = rep.precision_figure;
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!errors[i].empty()) {
            throw std::runtime_error("sweep point " + spec.param + "=" + format_g17(spec.values[i]) +
                                     " failed: " + errors[i]);
        }
    }

    csv_header(os, "sweep", cfg);
    os << "# sweep parameter: " << spec.param << "\n";
    os << spec.param << ",gamma_l,gamma_h,d_gamma_l_d_beta,d_gamma_h_d_beta,fisher,beta2_fisher\n";
    for (const Row& r : rows) {
        os << format_g17(r.value) << "," << format_g17(r.decay.gamma_l) << ","
           << format_g17(r.decay.gamma_h) << "," << format_g17(r.decay.d_gamma_l_d_beta) << ","
           << format_g17(r.decay.d_gamma_h_d_beta) << "," << format_g17(r.fisher) << ","
           << format_g17(r.beta2_fisher) << "\n";
    }
}

}  // namespace qtherm
