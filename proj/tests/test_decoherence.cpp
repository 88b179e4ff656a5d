#include "doctest.h"

#include "qtherm/decoherence.hpp"
#include "test_support.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

using namespace qtherm;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

SpectralModel fig_model() { return ohmic_model(0.2, 10.0, 0.1, 1.0); }

// Frozen outputs of the reference integrator in test_support.hpp (long-double
// adaptive Simpson applied to the defining integrals; the derivative values
// were cross-checked there against a 5-point finite-difference stencil of the
// same integral to ~1e-10 relative).  alpha=0.2, omega_c=10, omega_co=0.1.
struct FrozenRow {
    double beta, t;
    double gl, gh_band, dgl, dgh;
};

constexpr FrozenRow frozen[] = {
    {100.0, 0.18, 6.8624909229746396e-05, 0.57776094022983317, -8.4944625265241300e-08,
     -1.4196805972740955e-10},
    {0.1, 0.1, 7.9601330005774062e-03, 0.75625811365841461, -7.9600888884451859e-02,
     -6.3973281022286895e+00},
    {100.0, 0.6, 7.6240099911665057e-04, 1.4436520684556953, -9.4380939035075261e-07,
     -1.5768772628945440e-09},
};

}  // namespace

TEST_CASE("band integrals match the frozen reference values") {
    const SpectralModel m = fig_model();
    for (const FrozenRow& row : frozen) {
        CAPTURE(row.beta);
        CAPTURE(row.t);
        CHECK(gamma_beta_integral(m, row.beta, row.t, Band::Low) ==
              doctest::Approx(row.gl).epsilon(1e-12));
        CHECK(gamma_beta_integral(m, row.beta, row.t, Band::High) ==
              doctest::Approx(row.gh_band).epsilon(1e-12));
        CHECK(d_gamma_d_beta_integral(m, row.beta, row.t, Band::Low) ==
              doctest::Approx(row.dgl).epsilon(1e-12));
        CHECK(d_gamma_d_beta_integral(m, row.beta, row.t, Band::High) ==
              doctest::Approx(row.dgh).epsilon(1e-12));

        const DecayFactors d = decay_factors(m, row.beta, row.t);
        CHECK(d.gamma_l == doctest::Approx(row.gl).epsilon(1e-12));
        CHECK(d.gamma_h ==
              doctest::Approx(row.gh_band + white_noise_decay(1.0, row.t)).epsilon(1e-12));
        CHECK(d.d_gamma_l_d_beta == doctest::Approx(row.dgl).epsilon(1e-12));
        CHECK(d.d_gamma_h_d_beta == doctest::Approx(row.dgh).epsilon(1e-12));
        CHECK(d.beta == row.beta);
        CHECK(d.time == row.t);
    }
}

TEST_CASE("reference integrator still reproduces its frozen row") {
    // guards the frozen constants against drift in test_support.hpp itself
    const testsup::OhmicRef ref;
    CHECK(double(testsup::gamma_band_ref(ref, 100.0L, 0.18L, true)) ==
          doctest::Approx(frozen[0].gl).epsilon(1e-13));
    CHECK(double(testsup::dgamma_band_ref(ref, 100.0L, 0.18L, false)) ==
          doctest::Approx(frozen[0].dgh).epsilon(1e-13));
}

TEST_CASE("zero-temperature ohmic decay matches the closed form") {
    const SpectralModel m = fig_model();
    for (double t : {0.01, 0.05, 0.18, 0.5, 1.0}) {
        CAPTURE(t);
        const double total =
            gamma_beta_integral(m, inf, t, Band::Low) + gamma_beta_integral(m, inf, t, Band::High);
        const double closed = 2.0 * 0.2 * std::log1p(100.0 * t * t);
        CHECK(total == doctest::Approx(closed).epsilon(1e-10));
        CHECK(d_gamma_d_beta_integral(m, inf, t, Band::Full) == 0.0);
    }
}

TEST_CASE("low and high bands add up to the full integral") {
    const SpectralModel m = fig_model();
    for (const FrozenRow& row : frozen) {
        CAPTURE(row.beta);
        const double full = gamma_beta_integral(m, row.beta, row.t, Band::Full);
        CHECK(full == doctest::Approx(row.gl + row.gh_band).epsilon(1e-12));
        const double dfull = d_gamma_d_beta_integral(m, row.beta, row.t, Band::Full);
        CHECK(dfull == doctest::Approx(row.dgl + row.dgh).epsilon(1e-12));
    }
}

TEST_CASE("decay grows with time and relaxes with beta") {
    const SpectralModel m = fig_model();
    double prev = 0.0;
    for (double t : {0.05, 0.1, 0.2, 0.4, 0.8}) {
        const DecayFactors d = decay_factors(m, 2.0, t);
        CHECK(d.total() > prev);
        prev = d.total();
    }
    prev = inf;
    for (double beta : {0.5, 1.0, 2.0, 5.0, 25.0}) {
        const DecayFactors d = decay_factors(m, beta, 0.3);
        CHECK(d.total() < prev);
        CHECK(d.d_gamma_l_d_beta <= 0.0);
        CHECK(d.d_gamma_h_d_beta <= 0.0);
        prev = d.total();
    }
}

TEST_CASE("analytic beta-derivative agrees with finite differences") {
    const SpectralModel m = fig_model();
    for (double beta : {0.2, 1.0, 5.0, 25.0, 125.0}) {
        for (double t : {0.05, 0.1, 0.2, 0.4, 0.8}) {
            CAPTURE(beta);
            CAPTURE(t);
            const double h = 1e-4 * beta;
            const double fd = (gamma_beta_integral(m, beta + h, t, Band::Full) -
                               gamma_beta_integral(m, beta - h, t, Band::Full)) /
                              (2.0 * h);
            const double analytic = d_gamma_d_beta_integral(m, beta, t, Band::Full);
            CHECK(analytic == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("high band stops carrying temperature information when cold") {
    const SpectralModel m = fig_model();
    const DecayFactors cold = decay_factors(m, 100.0, 0.18);
    CHECK(std::abs(cold.d_gamma_h_d_beta) < 1e-2 * std::abs(cold.d_gamma_l_d_beta));
    const DecayFactors hot = decay_factors(m, 0.1, 0.18);
    CHECK(std::abs(hot.d_gamma_h_d_beta) > 10.0 * std::abs(hot.d_gamma_l_d_beta));
}

TEST_CASE("no evolution means no decay") {
    const DecayFactors d = decay_factors(fig_model(), 2.0, 0.0);
    CHECK(d.gamma_l == 0.0);
    CHECK(d.gamma_h == 0.0);
    CHECK(d.d_gamma_l_d_beta == 0.0);
    CHECK(d.d_gamma_h_d_beta == 0.0);
    CHECK(white_noise_decay(1.0, 0.0) == 0.0);
}

TEST_CASE("invalid temperature or time is rejected") {
    const SpectralModel m = fig_model();
    CHECK_THROWS_AS(decay_factors(m, 0.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(decay_factors(m, -1.0, 0.1), std::domain_error);
    CHECK_THROWS_AS(decay_factors(m, std::nan(""), 0.1), std::domain_error);
    CHECK_THROWS_AS(decay_factors(m, 1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(gamma_beta_integral(m, 0.0, 0.1, Band::Full), std::domain_error);
}

TEST_CASE("tabulated spectra integrate piecewise between knots") {
    // J linear from (0, 0) to (2, 1) then a kink down to (3, 0)
    std::istringstream in("0 0\n2 1\n3 0\n");
    const SpectralModel m = tabulated_model(in, 0.5, 0.0);
    auto j = [](long double w) {
        if (w <= 2.0L) return 0.5L * w;
        if (w <= 3.0L) return 3.0L - w;
        return 0.0L;
    };
    const long double beta = 3.0L, t = 0.7L;
    auto integrand = [&](long double w) {
        if (w <= 0.0L) return 4.0L * 0.5L * t * t / beta;  // slope 1/2 at the origin
        const long double osc = 2.0L * std::sin(0.5L * w * t) * std::sin(0.5L * w * t);
        return 4.0L * j(w) * (1.0L / std::tanh(0.5L * beta * w)) * osc / (w * w);
    };
    const double expected_low = double(testsup::simpson_auto(integrand, 0.0L, 0.5L));
    const double expected_high = double(testsup::simpson_auto(integrand, 0.5L, 2.0L) +
                                        testsup::simpson_auto(integrand, 2.0L, 3.0L));
    CHECK(gamma_beta_integral(m, 3.0, 0.7, Band::Low) ==
          doctest::Approx(expected_low).epsilon(1e-10));
    CHECK(gamma_beta_integral(m, 3.0, 0.7, Band::High) ==
          doctest::Approx(expected_high).epsilon(1e-10));
}
