#include "qtherm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qtherm {

double SpectralModel::max_frequency() const {
    if (kind == Kind::Ohmic) return 50.0 * omega_c;
    return tab_omega.empty() ? 0.0 : tab_omega.back();
}

SpectralModel ohmic_model(double alpha, double omega_c, double omega_co, double gamma_white) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("ohmic_model: alpha must be >= 0");
    if (!(omega_c > 0.0)) throw std::invalid_argument("ohmic_model: omega_c must be > 0");
    if (!(omega_co >= 0.0)) throw std::invalid_argument("ohmic_model: omega_co must be >= 0");
    if (!(gamma_white >= 0.0))
        throw std::invalid_argument("ohmic_model: gamma_white must be >= 0");
    SpectralModel m;
    m.kind = SpectralModel::Kind::Ohmic;
    m.alpha = alpha;
    m.omega_c = omega_c;
    m.omega_co = omega_co;
    m.gamma_white = gamma_white;
    return m;
}

SpectralModel tabulated_model(std::istream& in, double omega_co, double gamma_white) {
    if (!(omega_co >= 0.0))
        throw std::invalid_argument("tabulated_model: omega_co must be >= 0");
    if (!(gamma_white >= 0.0))
        throw std::invalid_argument("tabulated_model: gamma_white must be >= 0");

    SpectralModel m;
    m.kind = SpectralModel::Kind::Tabulated;
    m.omega_co = omega_co;
    m.gamma_white = gamma_white;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double w, j;
        if (!(row >> w)) continue;  // blank line
        if (!(row >> j))
            throw std::invalid_argument("tabulated_model: line " + std::to_string(lineno) +
                                        ": expected two columns (omega, J)");
        double extra;
        if (row >> extra)
            throw std::invalid_argument("tabulated_model: line " + std::to_string(lineno) +
                                        ": expected exactly two columns");
        if (!(w >= 0.0))
            throw std::invalid_argument("tabulated_model: line " + std::to_string(lineno) +
                                        ": omega must be >= 0");
        if (!(j >= 0.0))
            throw std::invalid_argument("tabulated_model: line " + std::to_string(lineno) +
                                        ": J must be >= 0");
        if (!m.tab_omega.empty() && w <= m.tab_omega.back())
            throw std::invalid_argument("tabulated_model: line " + std::to_string(lineno) +
                                        ": omega must be strictly increasing");
        m.tab_omega.push_back(w);
        m.tab_j.push_back(j);
    }
    if (m.tab_omega.size() < 2)
        throw std::invalid_argument("tabulated_model: need at least two grid points");
    return m;
}

SpectralModel load_tabulated_model(const std::string& path, double omega_co,
                                   double gamma_white) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("load_tabulated_model: cannot open " + path);
    return tabulated_model(in, omega_co, gamma_white);
}

double evaluate_j(const SpectralModel& m, double omega) {
    if (!(omega >= 0.0)) throw std::domain_error("evaluate_j: omega must be >= 0");
    if (m.kind == SpectralModel::Kind::Ohmic)
        return m.alpha * omega * std::exp(-omega / m.omega_c);

    const auto& xs = m.tab_omega;
    if (omega < xs.front() || omega > xs.back()) return 0.0;
    const auto hi = std::upper_bound(xs.begin(), xs.end(), omega);
    if (hi == xs.begin()) return m.tab_j.front();
    const std::size_t i = std::size_t(hi - xs.begin());
    if (i == xs.size()) return m.tab_j.back();
    const double x0 = xs[i - 1], x1 = xs[i];
    const double f = (omega - x0) / (x1 - x0);
    return m.tab_j[i - 1] * (1.0 - f) + m.tab_j[i] * f;
}

double cooperative_j(const SpectralModel& m, double omega, std::size_t i, std::size_t j) {
    const double j_val = evaluate_j(m, omega);
    if (omega <= m.omega_co || i == j) return j_val;
    return 0.0;
}

}  // namespace qtherm
