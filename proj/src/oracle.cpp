#include "qtherm/oracle.hpp"

#include "qtherm/numerics.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qtherm::oracle {

namespace {

void check_n(std::size_t n, const char* what) {
    if (n == 0) throw std::invalid_argument(std::string(what) + ": empty decay matrix");
    if (n > max_enumeration_n)
        throw std::invalid_argument(std::string(what) + ": n exceeds the enumeration cap of " +
                                    std::to_string(max_enumeration_n) +
                                    "; use the collective-field distribution instead");
}

// Visits every difference configuration d in {-1,0,+1}^N.  The callback gets
// the configuration, its probability weight 2^-N 2^-a (a = nonzero count) and
// the Gaussian factor exp(-d.G.d).
template <typename F>
void for_each_difference(const DecayMatrix& gamma, F&& fn) {
    const std::size_t n = gamma.n();
    std::vector<int> d(n, -1);
    const double base_weight = std::pow(0.5, double(n));
    for (;;) {
        double quad = 0.0;
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i] == 0) continue;
            ++nonzero;
            for (std::size_t j = 0; j < n; ++j) {
                if (d[j] == 0) continue;
                quad += double(d[i]) * gamma.g(long(i), long(j)) * double(d[j]);
            }
        }
        fn(d, base_weight * std::pow(0.5, double(nonzero)), std::exp(-quad));

        std::size_t i = 0;
        for (; i < n; ++i) {
            if (d[i] < 1) {
                ++d[i];
                break;
            }
            d[i] = -1;
        }
        if (i == n) break;
    }
}

void check_imaginary(double im, const char* what) {
    if (std::abs(im) >= 1e-12)
        throw std::runtime_error(std::string(what) + ": imaginary residue " + format_g17(im) +
                                 " exceeds 1e-12");
}

}  // namespace

DecayMatrix::DecayMatrix(Eigen::MatrixXd m) : g(std::move(m)) {
    if (g.rows() == 0 || g.rows() != g.cols())
        throw std::invalid_argument("DecayMatrix: matrix must be square and nonempty");
    const double scale = 1.0 + g.cwiseAbs().maxCoeff();
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("DecayMatrix: matrix must be symmetric");
}

DecayMatrix collective_decay_matrix(std::size_t n, double gamma_l, double gamma_h) {
    if (n == 0) throw std::invalid_argument("collective_decay_matrix: n must be >= 1");
    if (!(gamma_l >= 0.0) || !(gamma_h >= 0.0))
        throw std::invalid_argument("collective_decay_matrix: decay factors must be >= 0");
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(long(n), long(n), gamma_l);
    g.diagonal().array() += gamma_h;
    return DecayMatrix(std::move(g));
}

DecayMatrix collective_decay_matrix(std::size_t n, const DecayFactors& decay) {
    return collective_decay_matrix(n, decay.gamma_l, decay.gamma_h);
}

double exact_probability(const DecayMatrix& gamma, double theta,
                         const std::vector<int>& readout) {
    check_n(gamma.n(), "exact_probability");
    if (readout.size() != gamma.n())
        throw std::invalid_argument("exact_probability: readout length != n");
    for (int s : readout)
        if (s != 1 && s != -1)
            throw std::invalid_argument("exact_probability: readout entries must be +-1");

    std::complex<double> acc = 0.0;
    for_each_difference(gamma, [&](const std::vector<int>& d, double weight, double gauss) {
        std::complex<double> phase = 1.0;
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d[j] == 0) continue;
            phase *= double(readout[j]) *
                     std::complex<double>(std::cos(theta), double(d[j]) * std::sin(theta));
        }
        acc += weight * gauss * phase;
    });
    check_imaginary(acc.imag(), "exact_probability");
    return acc.real();
}

STable exact_p_of_s(const DecayMatrix& gamma, double theta) {
    const std::size_t n = gamma.n();
    check_n(n, "exact_p_of_s");

    // Configurations enter p(S) only through a = #nonzero and the net phase
    // e^{i theta (n+ - n-)}; collect sum_d weight * gauss * phase per a, then
    //   p(k) = sum_a Re(C_a) T(a, k),
    // T(a, k) = number-weighted sign sum over how many +1 readouts sit on the
    // a phase-carrying spins.
    std::vector<std::complex<double>> c(n + 1, 0.0);
    for_each_difference(gamma, [&](const std::vector<int>& d, double weight, double gauss) {
        int net = 0;
        std::size_t a = 0;
        for (int v : d)
            if (v != 0) {
                ++a;
                net += v;
            }
        c[a] += weight * gauss *
                std::complex<double>(std::cos(theta * net), std::sin(theta * net));
    });

    STable t;
    t.n = n;
    t.p.assign(n + 1, 0.0);
    double im_residue = 0.0;
    for (std::size_t a = 0; a <= n; ++a) im_residue += std::abs(c[a].imag());
    check_imaginary(im_residue, "exact_p_of_s");

    // binomial table for T(a, k)
    std::vector<std::vector<double>> choose(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i <= n; ++i) {
        choose[i][0] = 1.0;
        for (std::size_t j = 1; j <= i; ++j)
            choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0.0);
    }
    for (std::size_t k = 0; k <= n; ++k) {
        double pk = 0.0;
        for (std::size_t a = 0; a <= n; ++a) {
            double tak = 0.0;
            const std::size_t m_lo = (k + a >= n) ? k + a - n : 0;
            for (std::size_t m = m_lo; m <= std::min(a, k); ++m)
                tak += ((a - m) % 2 == 0 ? 1.0 : -1.0) * choose[a][m] * choose[n - a][k - m];
            pk += c[a].real() * tak;
        }
        t.p[k] = pk;
    }
    return t;
}

ReadoutDistribution enumerate_readouts(const DecayMatrix& gamma, double theta) {
    const std::size_t n = gamma.n();
    check_n(n, "enumerate_readouts");

    // P(s) = sum_A c_A prod_{j in A} s_j: gather the Walsh coefficient of each
    // support mask A, then one Walsh-Hadamard transform yields all strings.
    std::vector<std::complex<double>> walsh(std::size_t(1) << n, 0.0);
    for_each_difference(gamma, [&](const std::vector<int>& d, double weight, double gauss) {
        std::size_t mask = 0;
        int net = 0;
        for (std::size_t j = 0; j < d.size(); ++j)
            if (d[j] != 0) {
                mask |= std::size_t(1) << j;
                net += d[j];
            }
        walsh[mask] += weight * gauss *
                       std::complex<double>(std::cos(theta * net), std::sin(theta * net));
    });

    double im_residue = 0.0;
    for (const auto& v : walsh) im_residue += std::abs(v.imag());
    check_imaginary(im_residue, "enumerate_readouts");

    // in-place transform: bit j set in the string index means s_j = +1
    std::vector<double> p(walsh.size());
    for (std::size_t i = 0; i < walsh.size(); ++i) p[i] = walsh[i].real();
    for (std::size_t stride = 1; stride < p.size(); stride <<= 1) {
        for (std::size_t block = 0; block < p.size(); block += stride << 1) {
            for (std::size_t i = block; i < block + stride; ++i) {
                const double plus = p[i + stride] + p[i];   // s_j = +1 keeps chi = +1
                const double minus = p[i] - p[i + stride];  // s_j = -1 flips the A term
                p[i + stride] = plus;
                p[i] = minus;
            }
        }
    }

    ReadoutDistribution dist;
    dist.form = ReadoutDistribution::Form::ExactEnumerated;
    dist.config.n = n;
    dist.config.theta = theta;
    dist.string_p = std::move(p);

    dist.table.n = n;
    dist.table.p.assign(n + 1, 0.0);
    for (std::size_t s = 0; s < dist.string_p.size(); ++s)
        dist.table.p[std::size_t(std::popcount(s))] += dist.string_p[s];
    return dist;
}

Eigen::Matrix4d exact_reduced_state(const DecayMatrix& gamma) {
    if (gamma.n() != 2)
        throw std::invalid_argument("exact_reduced_state: expects a 2x2 decay matrix");
    Eigen::Matrix4d rho;
    // basis index b = 2*(eta1 == -1) + (eta2 == -1), matching kron ordering
    const int eta_of[2] = {+1, -1};
    for (int r = 0; r < 4; ++r) {
        for (int col = 0; col < 4; ++col) {
            const double d1 = 0.5 * (eta_of[r / 2] - eta_of[col / 2]);
            const double d2 = 0.5 * (eta_of[r % 2] - eta_of[col % 2]);
            const double quad = gamma.g(0, 0) * d1 * d1 + 2.0 * gamma.g(0, 1) * d1 * d2 +
                                gamma.g(1, 1) * d2 * d2;
            rho(r, col) = 0.25 * std::exp(-quad);
        }
    }
    return rho;
}

}  // namespace qtherm::oracle
