#include "doctest.h"

#include "qtherm/oracle.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

using namespace qtherm;
using oracle::DecayMatrix;

namespace {

DecayFactors synthetic_decay(double gamma_l, double gamma_h) {
    DecayFactors d;
    d.beta = 1.0;
    d.time = 1.0;
    d.gamma_l = gamma_l;
    d.gamma_h = gamma_h;
    return d;
}

}  // namespace

TEST_CASE("single-thermometer probabilities have the closed form") {
    const DecayMatrix g = oracle::collective_decay_matrix(1, 0.2, 0.5);
    const double decay = std::exp(-0.7);
    for (double theta : {0.0, 0.7, half_pi}) {
        CAPTURE(theta);
        const double p_up = oracle::exact_probability(g, theta, {+1});
        const double p_dn = oracle::exact_probability(g, theta, {-1});
        CHECK(p_up == doctest::Approx(0.5 * (1.0 + decay * std::cos(theta))).epsilon(1e-14));
        CHECK(p_up + p_dn == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("transverse two-point correlator matches the band formula") {
    const double gamma_l = 0.3, gamma_h = 0.5;
    const DecayMatrix g = oracle::collective_decay_matrix(2, gamma_l, gamma_h);
    const STable t = oracle::exact_p_of_s(g, half_pi);
    // <s1 s2> = (<S^2> - N) / (N (N - 1))
    const double corr = 0.5 * (t.second_moment() - 2.0);
    const double expected = 0.5 * std::exp(-2.0 * gamma_h) * (1.0 - std::exp(-4.0 * gamma_l));
    CHECK(corr == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("p(S) agrees with the full string enumeration") {
    // heterogeneous symmetric decay matrix, nothing collective about it
    const std::size_t n = 5;
    Eigen::MatrixXd m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = 0.05 * double(std::min(i, j)) + 0.02 * double(i == j ? 7 + i : 1);
        }
    }
    const DecayMatrix g{0.5 * (m + m.transpose())};
    const double theta = 0.6;

    const ReadoutDistribution strings = oracle::enumerate_readouts(g, theta);
    const STable marginal = oracle::exact_p_of_s(g, theta);
    REQUIRE(strings.table.p.size() == marginal.p.size());
    CHECK(marginal.sum() == doctest::Approx(1.0).epsilon(1e-13));
    for (std::size_t k = 0; k < marginal.p.size(); ++k) {
        CHECK(strings.table.p[k] == doctest::Approx(marginal.p[k]).epsilon(1e-11));
    }

    // spot-check individual strings against the direct evaluation
    for (std::size_t s : {std::size_t(0), std::size_t(9), std::size_t(31), std::size_t(20)}) {
        std::vector<int> readout(n);
        for (std::size_t j = 0; j < n; ++j) readout[j] = (s >> j) & 1 ? +1 : -1;
        CHECK(strings.string_p[s] ==
              doctest::Approx(oracle::exact_probability(g, theta, readout)).epsilon(1e-12));
    }
}

TEST_CASE("relabeling thermometers leaves p(S) alone") {
    const std::size_t n = 4;
    Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, 0.05);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.3 + 0.1 * double(i);
    const std::vector<std::size_t> perm{2, 0, 3, 1};
    Eigen::MatrixXd pm(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) pm(i, j) = m(perm[i], perm[j]);
    }
    const STable a = oracle::exact_p_of_s(DecayMatrix{m}, 0.9);
    const STable b = oracle::exact_p_of_s(DecayMatrix{pm}, 0.9);
    for (std::size_t k = 0; k < a.p.size(); ++k) {
        CHECK(a.p[k] == doctest::Approx(b.p[k]).epsilon(1e-13));
    }
}

TEST_CASE("decay matrices are validated") {
    CHECK_THROWS_AS(DecayMatrix{Eigen::MatrixXd::Zero(2, 3)}, std::invalid_argument);
    Eigen::MatrixXd asym = Eigen::MatrixXd::Zero(2, 2);
    asym(0, 1) = 0.2;  // not mirrored
    CHECK_THROWS_AS(DecayMatrix{asym}, std::invalid_argument);
    CHECK_THROWS_AS(oracle::exact_p_of_s(oracle::collective_decay_matrix(13, 0.1, 0.1), 0.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(oracle::exact_probability(oracle::collective_decay_matrix(2, 0.1, 0.1), 0.0,
                                              {+1, -1, +1}),
                    std::invalid_argument);
}

TEST_CASE("collective decay matrix has the band layout") {
    const DecayMatrix g = oracle::collective_decay_matrix(3, synthetic_decay(0.2, 0.7));
    CHECK(g.n() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(g.g(i, j) == doctest::Approx(i == j ? 0.9 : 0.2).epsilon(1e-15));
        }
    }
}

TEST_CASE("reduced two-thermometer state is a density matrix") {
    const DecayMatrix g = oracle::collective_decay_matrix(2, 0.15, 0.4);
    const Eigen::Matrix4d rho = oracle::exact_reduced_state(g);
    CHECK(rho.trace() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((rho - rho.transpose()).cwiseAbs().maxCoeff() < 1e-14);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-13);

    // readout probabilities derived from the state match the direct evaluation
    const double theta = 0.3;
    using C = std::complex<double>;
    auto projector = [&](int sign) {
        Eigen::Matrix2cd p;
        const C off = 0.5 * double(sign) * C(std::cos(theta), -std::sin(theta));
        p << C(0.5, 0.0), off, std::conj(off), C(0.5, 0.0);
        return p;
    };
    auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
        Eigen::Matrix4cd k;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        return k;
    };
    for (int s1 : {+1, -1}) {
        for (int s2 : {+1, -1}) {
            const Eigen::Matrix4cd proj = kron(projector(s1), projector(s2));
            const double p = (rho.cast<C>() * proj).trace().real();
            CHECK(p == doctest::Approx(oracle::exact_probability(g, theta, {s1, s2})).epsilon(1e-12));
        }
    }
}
