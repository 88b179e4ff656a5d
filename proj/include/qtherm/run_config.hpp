// run_config.hpp -- flat key=value configuration shared by every command,
// preloaded with the standard Ohmic parameter set so `fig2` runs with no
// arguments.
#pragma once

#include "qtherm/numerics.hpp"
#include "qtherm/spectral.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace qtherm {

// Configuration problems map to exit code 2 in the CLI.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double alpha = 0.2;
    double omega_c = 10.0;
    double omega_co = 0.1;
    double gamma_white = 1.0;
    std::string spectrum_file;  // empty: Ohmic model with the fields above

    std::vector<double> beta = {0.1, 100.0};  // omega_c * beta in {1, 1e3}
    std::vector<std::size_t> n = {1, 2, 4, 8, 16, 32, 64, 128};
    std::vector<double> theta = {0.0, half_pi};
    std::vector<double> time = {0.18};

    // evolution-time grid used wherever a command optimizes t
    double t_lo = 0.01;
    double t_hi = 1.0;
    double t_step = 0.01;

    std::size_t shots = 100000;
    std::uint64_t seed = 12345;
    int threads = 1;  // 0: one worker per hardware thread
    bool sample_full = false;
    double delta_beta_rel = 1e-3;  // finite-difference step, relative to beta
    std::string out;               // empty: stdout
};

// Applies one key=value pair (both the file parser and CLI overrides funnel
// through here).  Unknown keys and unparseable values throw ConfigError
// naming the field.  List-valued keys take comma-separated entries; theta
// entries may be "pi/2" or a radian value; t_grid takes "lo:hi:step".
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

// key=value per line, '#' starts a comment, blank lines ignored.
RunConfig parse_config(std::istream& in, RunConfig base);
RunConfig load_config(const std::string& path, RunConfig base);

// Ohmic model from the scalar fields, or the tabulated file when set.
SpectralModel model_from(const RunConfig& cfg);

// Grid [t_lo, t_hi] in steps of t_step.
std::vector<double> time_grid(const RunConfig& cfg);

int resolve_threads(const RunConfig& cfg);

}  // namespace qtherm
