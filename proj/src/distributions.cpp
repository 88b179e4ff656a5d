#include "qtherm/distributions.hpp"

#include "qtherm/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace qtherm {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-12; }

void check_config(const MeasurementConfig& c, const char* what) {
    if (c.n == 0) throw std::invalid_argument(std::string(what) + ": n must be >= 1");
    if (!(c.theta >= -1e-12 && c.theta <= half_pi + 1e-12))
        throw std::invalid_argument(std::string(what) + ": theta must lie in [0, pi/2]");
    if (!(c.decay.gamma_l >= 0.0) || !(c.decay.gamma_h >= 0.0))
        throw std::invalid_argument(std::string(what) + ": decay factors must be >= 0");
}

// ln C(n, k) for all k, built incrementally to avoid n lgamma calls per table
std::vector<double> log_binomial_row(std::size_t n) {
    std::vector<double> lc(n + 1, 0.0);
    for (std::size_t k = 0; k + 1 <= n; ++k)
        lc[k + 1] = lc[k] + std::log(double(n - k)) - std::log(double(k + 1));
    return lc;
}

// add weight * Binomial(n, q) to the table
void accumulate_binomial(std::vector<double>& p, const std::vector<double>& lc, double q,
                         double weight) {
    const std::size_t n = p.size() - 1;
    if (q <= 0.0) {
        p[0] += weight;
        return;
    }
    if (q >= 1.0) {
        p[n] += weight;
        return;
    }
    const double lq = std::log(q), l1q = std::log1p(-q);
    for (std::size_t k = 0; k <= n; ++k)
        p[k] += weight * std::exp(lc[k] + double(k) * lq + double(n - k) * l1q);
}

void check_normalized(const STable& t, const char* what) {
    if (std::abs(t.sum() - 1.0) > 1e-10)
        throw std::runtime_error(std::string(what) + ": table sum deviates from 1 by " +
                                 format_g17(t.sum() - 1.0));
}

STable point_mass_table(std::size_t n, std::size_t k) {
    STable t;
    t.n = n;
    t.p.assign(n + 1, 0.0);
    t.p[k] = 1.0;
    return t;
}

STable collective_table(const MeasurementConfig& c, std::size_t nodes) {
    const double gl = c.decay.gamma_l;
    const double damp = std::exp(-c.decay.gamma_h);
    const auto lc = log_binomial_row(c.n);

    STable t;
    t.n = c.n;
    t.p.assign(c.n + 1, 0.0);

    if (gl == 0.0) {
        const double q = 0.5 * (1.0 + damp * std::cos(c.theta));
        accumulate_binomial(t.p, lc, q, 1.0);
        return t;
    }
    const GaussHermiteRule& rule = gauss_hermite(nodes);
    const double scale = std::sqrt(gl);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double phi = scale * rule.nodes[i];
        const double q = 0.5 * (1.0 + damp * std::cos(c.theta + 2.0 * phi));
        accumulate_binomial(t.p, lc, std::min(1.0, std::max(0.0, q)),
                            rule.weights[i] * inv_sqrt_pi);
    }
    return t;
}

double max_abs_diff(const STable& a, const STable& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.p.size(); ++k) d = std::max(d, std::abs(a.p[k] - b.p[k]));
    return d;
}

}  // namespace

MeasurementConfig make_config(std::size_t n, double theta, const DecayFactors& decay) {
    MeasurementConfig c{n, theta, decay};
    check_config(c, "make_config");
    return c;
}

double STable::sum() const {
    double s = 0.0;
    for (double v : p) s += v;
    return s;
}

double STable::mean() const {
    double m = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) m += p[k] * s_of_index(k);
    return m;
}

double STable::second_moment() const {
    double m = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double s = s_of_index(k);
        m += p[k] * s * s;
    }
    return m;
}

double STable::variance() const {
    const double mu = mean();
    return second_moment() - mu * mu;
}

double STable::fourth_moment() const {
    double m = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double s2 = s_of_index(k) * s_of_index(k);
        m += p[k] * s2 * s2;
    }
    return m;
}

double STable::variance_of_s_squared() const {
    const double m2 = second_moment();
    return fourth_moment() - m2 * m2;
}

double tv_distance(const STable& a, const STable& b) {
    if (a.n != b.n) throw std::invalid_argument("tv_distance: supports differ");
    double d = 0.0;
    for (std::size_t k = 0; k < a.p.size(); ++k) d += std::abs(a.p[k] - b.p[k]);
    return 0.5 * d;
}

void write_s_table(std::ostream& out, const STable& table) {
    out << "# qtherm s-table v1\n# n=" << table.n << "\n";
    for (std::size_t k = 0; k < table.p.size(); ++k)
        out << format_g17(table.s_of_index(k)) << " " << format_g17(table.p[k]) << "\n";
}

STable read_s_table(std::istream& in) {
    STable t;
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double s, p;
        if (!(row >> s)) continue;
        if (!(row >> p)) throw std::invalid_argument("read_s_table: expected two columns");
        rows.emplace_back(s, p);
    }
    if (rows.empty()) throw std::invalid_argument("read_s_table: no rows");
    t.n = rows.size() - 1;
    t.p.resize(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (!near(rows[k].first, 2.0 * double(k) - double(t.n)))
            throw std::invalid_argument("read_s_table: support is not {-N..N} in steps of 2");
        t.p[k] = rows[k].second;
    }
    return t;
}

STable ReadoutDistribution::to_s_table() const {
    switch (form) {
        case Form::CollectiveExactS:
        case Form::ExactEnumerated:
            return table;
        case Form::Product: {
            STable t;
            t.n = config.n;
            t.p.assign(config.n + 1, 0.0);
            accumulate_binomial(t.p, log_binomial_row(config.n), product.p_plus, 1.0);
            return t;
        }
        case Form::CollectiveGaussianS: {
            STable t;
            t.n = config.n;
            t.p.assign(config.n + 1, 0.0);
            if (gaussian.var <= 0.0)
                throw std::runtime_error("to_s_table: degenerate Gaussian form");
            double sum = 0.0;
            for (std::size_t k = 0; k <= config.n; ++k) {
                const double d = t.s_of_index(k) - gaussian.mean;
                t.p[k] = std::exp(-0.5 * d * d / gaussian.var);
                sum += t.p[k];
            }
            for (double& v : t.p) v /= sum;
            return t;
        }
    }
    throw std::logic_error("to_s_table: unknown form");
}

double ReadoutDistribution::mean_s() const {
    switch (form) {
        case Form::Product:
            return double(config.n) * (2.0 * product.p_plus - 1.0);
        case Form::CollectiveGaussianS:
            return gaussian.mean;
        default:
            return table.mean();
    }
}

double ReadoutDistribution::var_s() const {
    switch (form) {
        case Form::Product:
            return 4.0 * double(config.n) * product.p_plus * (1.0 - product.p_plus);
        case Form::CollectiveGaussianS:
            return gaussian.var;
        default:
            return table.variance();
    }
}

ReadoutDistribution collective_field_distribution(const MeasurementConfig& config,
                                                  std::size_t nodes) {
    check_config(config, "collective_field_distribution");
    if (nodes == 0) throw std::invalid_argument("collective_field_distribution: nodes == 0");

    ReadoutDistribution dist;
    dist.form = ReadoutDistribution::Form::CollectiveExactS;
    dist.config = config;

    STable coarse = collective_table(config, nodes);
    if (config.decay.gamma_l == 0.0) {
        dist.table = coarse;
        dist.gh_nodes_used = 1;  // point mass, no quadrature
        dist.gh_convergence = 0.0;
    } else {
        // double the rule until the table stops moving
        for (std::size_t fine_nodes = 2 * nodes;; fine_nodes *= 2) {
            const STable fine = collective_table(config, fine_nodes);
            dist.gh_convergence = max_abs_diff(coarse, fine);
            dist.gh_nodes_used = fine_nodes;
            dist.table = fine;
            if (dist.gh_convergence <= 1e-11) break;
            if (fine_nodes >= 1024)
                throw std::runtime_error(
                    "collective_field_distribution: quadrature not converged at 1024 nodes "
                    "(node-doubling residual " +
                    format_g17(dist.gh_convergence) + ")");
            coarse = fine;
        }
    }
    check_normalized(dist.table, "collective_field_distribution");
    return dist;
}

ReadoutDistribution product_distribution(const MeasurementConfig& config) {
    check_config(config, "product_distribution");
    if (!near(config.theta, 0.0))
        throw std::invalid_argument("product_distribution: valid only at theta = 0");
    ReadoutDistribution dist;
    dist.form = ReadoutDistribution::Form::Product;
    dist.config = config;
    dist.product.p_plus = 0.5 * (1.0 + std::exp(-config.decay.total()));
    return dist;
}

ReadoutDistribution correlation_distribution(const MeasurementConfig& config) {
    check_config(config, "correlation_distribution");
    if (!near(config.theta, half_pi))
        throw std::invalid_argument("correlation_distribution: valid only at theta = pi/2");
    ReadoutDistribution dist;
    dist.form = ReadoutDistribution::Form::CollectiveGaussianS;
    dist.config = config;
    const double n = double(config.n);
    dist.gaussian.mean = 0.0;
    dist.gaussian.var =
        n * (1.0 + 2.0 * std::exp(-2.0 * config.decay.total()) * n * config.decay.gamma_l);
    return dist;
}

ReadoutDistribution correlation_s_table(const MeasurementConfig& config) {
    check_config(config, "correlation_s_table");
    if (!near(config.theta, half_pi))
        throw std::invalid_argument("correlation_s_table: valid only at theta = pi/2");

    ReadoutDistribution dist;
    dist.form = ReadoutDistribution::Form::CollectiveExactS;
    dist.config = config;

    const double n = double(config.n);
    const double damp2 = std::exp(-2.0 * config.decay.total());
    const double c = config.decay.gamma_l * damp2 / (1.0 + 2.0 * n * config.decay.gamma_l * damp2);

    const auto lc = log_binomial_row(config.n);
    std::vector<double> le(config.n + 1);
    double le_max = -HUGE_VAL;
    STable& t = dist.table;
    t.n = config.n;
    t.p.assign(config.n + 1, 0.0);
    for (std::size_t k = 0; k <= config.n; ++k) {
        const double s = t.s_of_index(k);
        le[k] = lc[k] + c * s * s;
        le_max = std::max(le_max, le[k]);
    }
    double z = 0.0;  // partition sum over the S support
    for (std::size_t k = 0; k <= config.n; ++k) {
        t.p[k] = std::exp(le[k] - le_max);
        z += t.p[k];
    }
    for (double& v : t.p) v /= z;
    check_normalized(t, "correlation_s_table");
    return dist;
}

ReadoutDistribution gaussian_s_theta0(const MeasurementConfig& config) {
    check_config(config, "gaussian_s_theta0");
    if (!near(config.theta, 0.0))
        throw std::invalid_argument("gaussian_s_theta0: valid only at theta = 0");
    ReadoutDistribution dist;
    dist.config = config;
    const double gamma = config.decay.total();
    if (gamma == 0.0) {
        // no dephasing: every spin reads +1
        dist.form = ReadoutDistribution::Form::CollectiveExactS;
        dist.table = point_mass_table(config.n, config.n);
        return dist;
    }
    dist.form = ReadoutDistribution::Form::CollectiveGaussianS;
    const double n = double(config.n);
    dist.gaussian.mean = n * std::exp(-gamma);
    dist.gaussian.var = n * (1.0 - std::exp(-2.0 * gamma));
    return dist;
}

namespace {

Eigen::Matrix4d kron2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
    Eigen::Matrix4d k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

}  // namespace

Eigen::Matrix4d two_thermometer_state(const DecayFactors& decay) {
    if (!(decay.gamma_l >= 0.0) || !(decay.gamma_h >= 0.0))
        throw std::invalid_argument("two_thermometer_state: decay factors must be >= 0");
    const double a = std::exp(-decay.total());
    Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d sx;
    sx << 0, 1, 1, 0;
    const Eigen::Matrix2d single = id + a * sx;
    // sy x sy is real in the z product basis
    Eigen::Matrix4d syy = Eigen::Matrix4d::Zero();
    syy(0, 3) = -1;
    syy(1, 2) = 1;
    syy(2, 1) = 1;
    syy(3, 0) = -1;
    return 0.25 * kron2(single, single) +
           0.5 * decay.gamma_l * std::exp(-2.0 * decay.total()) * syy;
}

}  // namespace qtherm
