// qtherm -- command-line front end over the library: decay-factor tables,
// precision-vs-N reproduction runs, Fisher cross-checks, readout sampling,
// and single-parameter sweeps.  Exit codes: 0 success, 2 configuration
// error, 3 numerical failure.
#include "CLI11.hpp"

#include "qtherm/commands.hpp"
#include "qtherm/run_config.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Every override funnels through apply_key so flags, config files, and
// defaults share one parser (precedence: flag > file > default).
void add_override_flags(CLI::App* cmd, const std::shared_ptr<KeyValues>& captured) {
    static const struct {
        const char* flag;
        const char* key;
        const char* help;
    } specs[] = {
        {"--alpha", "alpha", "Ohmic coupling strength"},
        {"--omega-c", "omega_c", "Ohmic cutoff frequency"},
        {"--omega-co", "omega_co", "crossover frequency splitting the collective band"},
        {"--gamma-white", "gamma_white", "white-noise dephasing rate"},
        {"--spectrum-file", "spectrum_file", "tabulated spectral density (omega, J columns)"},
        {"--beta", "beta", "inverse temperature list (comma separated)"},
        {"--n", "n", "thermometer count list"},
        {"--theta", "theta", "measurement angle list (radians or pi/2)"},
        {"--time", "time", "evolution time list"},
        {"--t-grid", "t_grid", "time-optimization grid lo:hi:step"},
        {"--shots", "shots", "Monte Carlo shots per batch"},
        {"--seed", "seed", "base RNG seed"},
        {"--threads", "threads", "worker threads (0: all hardware threads)"},
        {"--delta-beta-rel", "delta_beta_rel", "finite-difference step relative to beta"},
        {"--out", "out", "output path (default: stdout)"},
    };
    for (const auto& s : specs) {
        const std::string key = s.key;
        cmd->add_option_function<std::string>(
            s.flag, [captured, key](const std::string& v) { captured->emplace_back(key, v); },
            s.help);
    }
}

qtherm::RunConfig build_config(const std::string& config_path, const KeyValues& captured) {
    qtherm::RunConfig cfg;
    if (!config_path.empty()) cfg = qtherm::load_config(config_path, cfg);
    for (const auto& [key, value] : captured) qtherm::apply_key(cfg, key, value);
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw qtherm::ConfigError("cannot open output file '" + path + "'");
    return os;
}

void finish_out(std::ofstream& os, const std::string& path) {
    os.flush();
    if (!os) throw std::runtime_error("write to '" + path + "' failed");
}

// runs fn against cfg.out or stdout
template <typename Fn>
void with_output(const qtherm::RunConfig& cfg, Fn&& fn) {
    if (cfg.out.empty()) {
        fn(std::cout);
        return;
    }
    std::ofstream os = open_out(cfg.out);
    fn(os);
    finish_out(os, cfg.out);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "qtherm: dephasing thermometry toolkit (decay factors, readout distributions, "
        "Fisher information)"};
    app.require_subcommand(1);

    struct SubState {
        std::string config_path;
        std::shared_ptr<KeyValues> captured = std::make_shared<KeyValues>();
    };

    auto add_subcommand = [&](const char* name, const char* help) {
        CLI::App* cmd = app.add_subcommand(name, help);
        auto state = std::make_shared<SubState>();
        cmd->add_option("--config", state->config_path, "key=value config file");
        add_override_flags(cmd, state->captured);
        return std::make_pair(cmd, state);
    };

    auto [gamma_cmd, gamma_state] =
        add_subcommand("gamma", "decay factors and beta-derivatives over beta x time");
    auto [fig2_cmd, fig2_state] =
        add_subcommand("fig2", "precision vs N per temperature regime, optimal t per curve");
    auto [fisher_cmd, fisher_state] =
        add_subcommand("fisher", "analytic vs exact vs sampled Fisher information");
    auto [sample_cmd, sample_state] = add_subcommand("sample", "write one readout batch");
    auto [sweep_cmd, sweep_state] = add_subcommand("sweep", "sweep one parameter over a grid");

    sample_cmd->add_flag_callback(
        "--full", [state = sample_state] { state->captured->emplace_back("full", "1"); },
        "record per-spin outcomes (n <= 64)");

    std::string sweep_param, sweep_grid;
    bool sweep_log = false;
    sweep_cmd->add_option("--param", sweep_param, "alpha|omega_c|omega_co|gamma_white|beta|time|n")
        ->required();
    sweep_cmd->add_option("--grid", sweep_grid, "lo:hi:count")->required();
    sweep_cmd->add_flag("--log", sweep_log, "geometric spacing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(gamma_cmd)) {
            const qtherm::RunConfig cfg = build_config(gamma_state->config_path, *gamma_state->captured);
            with_output(cfg, [&](std::ostream& os) { qtherm::run_gamma(cfg, os); });
        } else if (app.got_subcommand(fig2_cmd)) {
            const qtherm::RunConfig cfg = build_config(fig2_state->config_path, *fig2_state->captured);
            if (cfg.out.empty()) {
                qtherm::run_fig2(cfg, std::cout, std::cout);
            } else {
                std::ofstream high = open_out(cfg.out + ".high.csv");
                std::ofstream low = open_out(cfg.out + ".low.csv");
                qtherm::run_fig2(cfg, high, low);
                finish_out(high, cfg.out + ".high.csv");
                finish_out(low, cfg.out + ".low.csv");
            }
        } else if (app.got_subcommand(fisher_cmd)) {
            const qtherm::RunConfig cfg =
                build_config(fisher_state->config_path, *fisher_state->captured);
            with_output(cfg, [&](std::ostream& os) { qtherm::run_fisher(cfg, os); });
        } else if (app.got_subcommand(sample_cmd)) {
            const qtherm::RunConfig cfg =
                build_config(sample_state->config_path, *sample_state->captured);
            with_output(cfg, [&](std::ostream& os) { qtherm::run_sample(cfg, os); });
        } else {
            const qtherm::RunConfig cfg = build_config(sweep_state->config_path, *sweep_state->captured);
            const qtherm::SweepSpec spec = qtherm::make_sweep(sweep_param, sweep_grid, sweep_log);
            with_output(cfg, [&](std::ostream& os) { qtherm::run_sweep(cfg, spec, os); });
        }
    } catch (const qtherm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
