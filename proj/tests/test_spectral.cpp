#include "doctest.h"

#include "qtherm/spectral.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

using namespace qtherm;

namespace {

std::string thrown_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("ohmic spectral density evaluates alpha w exp(-w/wc)") {
    const SpectralModel m = ohmic_model(0.2, 10.0, 0.1, 1.0);
    CHECK(evaluate_j(m, 0.0) == 0.0);
    CHECK(evaluate_j(m, 1.0) == doctest::Approx(0.18096748360719191).epsilon(1e-15));
    CHECK(evaluate_j(m, 10.0) == doctest::Approx(0.73575888234288467).epsilon(1e-15));
    CHECK(m.max_frequency() == doctest::Approx(500.0));
    CHECK_THROWS_AS(evaluate_j(m, -1e-9), std::domain_error);
}

TEST_CASE("ohmic model validates its parameters") {
    CHECK_THROWS_AS(ohmic_model(-0.1, 10.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ohmic_model(0.2, 0.0, 0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ohmic_model(0.2, 10.0, -0.1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ohmic_model(0.2, 10.0, 0.1, -1.0), std::invalid_argument);
    // alpha = 0 (no coupling) and omega_co = 0 (no collective band) are legal
    CHECK_NOTHROW(ohmic_model(0.0, 10.0, 0.0, 0.0));
}

TEST_CASE("tabulated spectra interpolate linearly and vanish off the grid") {
    std::istringstream in(
        "# omega  J\n"
        "1.0 0.5\n"
        "2.0 1.5  # inline comment\n"
        "\n"
        "4.0 0.0\n");
    const SpectralModel m = tabulated_model(in, 0.1, 0.0);
    CHECK(m.kind == SpectralModel::Kind::Tabulated);
    CHECK(evaluate_j(m, 1.0) == 0.5);
    CHECK(evaluate_j(m, 1.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(evaluate_j(m, 3.0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(evaluate_j(m, 0.5) == 0.0);   // below the grid
    CHECK(evaluate_j(m, 4.5) == 0.0);   // above the grid
    CHECK(m.max_frequency() == 4.0);
}

TEST_CASE("tabulated parser points at the offending line") {
    {
        std::istringstream in("1.0 0.5\n2.0 0.7 0.9\n");
        const std::string msg =
            thrown_message([&] { tabulated_model(in, 0.1, 0.0); });
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("two columns") != std::string::npos);
    }
    {
        std::istringstream in("1.0 0.5\n0.5 0.7\n");
        const std::string msg =
            thrown_message([&] { tabulated_model(in, 0.1, 0.0); });
        CHECK(msg.find("line 2") != std::string::npos);
        CHECK(msg.find("increasing") != std::string::npos);
    }
    {
        std::istringstream in("1.0 0.5\n2.0 -0.7\n");
        const std::string msg =
            thrown_message([&] { tabulated_model(in, 0.1, 0.0); });
        CHECK(msg.find("line 2") != std::string::npos);
    }
    {
        std::istringstream in("1.0 0.5\n");
        CHECK_THROWS_AS(tabulated_model(in, 0.1, 0.0), std::invalid_argument);
    }
    {
        std::istringstream in("1.0 abc\n");
        CHECK_THROWS_AS(tabulated_model(in, 0.1, 0.0), std::invalid_argument);
    }
    CHECK_THROWS_AS(load_tabulated_model("/no/such/file.tab", 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("cooperative spectrum is shared only below the crossover") {
    const SpectralModel m = ohmic_model(0.2, 10.0, 0.1, 1.0);
    // same thermometer: the full spectrum at any frequency
    CHECK(cooperative_j(m, 0.05, 3, 3) == evaluate_j(m, 0.05));
    CHECK(cooperative_j(m, 5.0, 3, 3) == evaluate_j(m, 5.0));
    // distinct thermometers: only the collective band couples them
    CHECK(cooperative_j(m, 0.05, 0, 1) == evaluate_j(m, 0.05));
    CHECK(cooperative_j(m, 0.1, 0, 1) == evaluate_j(m, 0.1));  // boundary included
    CHECK(cooperative_j(m, 0.1000001, 0, 1) == 0.0);
    CHECK(cooperative_j(m, 5.0, 0, 1) == 0.0);
}
