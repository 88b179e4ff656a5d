// commands.hpp -- the work behind each CLI subcommand, kept in the library so
// tests can drive it without spawning processes.  Every command writes
// versioned CSV ("# qtherm csv v1" header, 17-significant-digit floats) and is
// deterministic for a given config and seed.
#pragma once

#include "qtherm/run_config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace qtherm {

// decay factors and derivatives over beta x time, ordered by (beta, t)
void run_gamma(const RunConfig& cfg, std::ostream& os);

// Precision-vs-N tables, one stream per temperature regime: each beta is
// classified by the beta * omega_co >= 1 heuristic, t is optimized per
// (beta, theta) on the config time grid at the single-thermometer limit, and a
// log-log scaling fit is appended per curve as a comment line.
void run_fig2(const RunConfig& cfg, std::ostream& high_t_os, std::ostream& low_t_os);

// analytic, exact-distribution, and sampled Fisher estimates side by side
void run_fisher(const RunConfig& cfg, std::ostream& os);

// one readout batch (first beta/theta/time/n of the config lists)
void run_sample(const RunConfig& cfg, std::ostream& os);

struct SweepSpec {
    std::string param;           // alpha | omega_c | omega_co | gamma_white | beta | time | n
    std::vector<double> values;  // evaluation points, ascending
};

// grid "lo:hi:count" (count >= 2), geometric spacing when log_scale is set
SweepSpec make_sweep(const std::string& param, const std::string& grid, bool log_scale);

// one row per sweep value; points run on the worker pool, rows emitted in
// grid order regardless of completion order
void run_sweep(const RunConfig& cfg, const SweepSpec& spec, std::ostream& os);

}  // namespace qtherm
