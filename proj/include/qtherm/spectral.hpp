// spectral.hpp -- spectral densities of the thermometer-bath coupling.
#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace qtherm {

// J(omega) >= 0 defined on omega >= 0.  Either the ohmic family
//   J(w) = alpha * w * exp(-w / omega_c)
// or a tabulated curve with linear interpolation, zero outside the grid.
//
// omega_co splits the axis into the collective low band [0, omega_co] shared
// by all thermometers and the individual high band above it.  gamma_white is
// the rate of an additional white-noise channel acting on each thermometer.
struct SpectralModel {
    enum class Kind { Ohmic, Tabulated };
    Kind kind = Kind::Ohmic;

    double alpha = 0.2;     // dimensionless ohmic coupling
    double omega_c = 10.0;  // exponential cutoff frequency

    double omega_co = 0.1;     // low/high band split
    double gamma_white = 1.0;  // white-noise rate (adds 2*gamma*t to the high band)

    std::vector<double> tab_omega;  // strictly increasing, nonnegative
    std::vector<double> tab_j;      // J >= 0 at the grid points

    // frequency beyond which J is treated as zero when integrating:
    // 50 cutoffs for the ohmic tail (relative truncation ~ e^-50), grid end otherwise
    double max_frequency() const;
};

SpectralModel ohmic_model(double alpha, double omega_c, double omega_co, double gamma_white);

// Two whitespace-separated columns (omega, J); '#' starts a comment.
SpectralModel tabulated_model(std::istream& in, double omega_co, double gamma_white);
SpectralModel load_tabulated_model(const std::string& path, double omega_co, double gamma_white);

// J(omega); throws std::domain_error for omega < 0
double evaluate_j(const SpectralModel& m, double omega);

// Cross-spectrum of the cooperative dephasing between thermometers i and j:
// equal to J(omega) at or below omega_co for every pair, and J(omega) * delta_ij
// above it.  The band step is kept literal (no smoothing).
double cooperative_j(const SpectralModel& m, double omega, std::size_t i, std::size_t j);

}  // namespace qtherm
