// numerics.hpp -- small numerical kernels shared across the library:
// stable hyperbolic helpers, adaptive band integration, Gauss-Hermite rules.
#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace qtherm {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double half_pi = pi / 2.0;

// sin(x)/x with the removable singularity filled in
double sinc(double x);

// coth(y) for y > 0, accurate down to the 1/y regime and clamped to 1 for large y
double coth(double y);

// 1/sinh(y)^2 for y > 0, series below y ~ 1e-4, underflows cleanly to 0
double inv_sinh_sq(double y);

// ln C(n, k) via lgamma
double log_binomial(std::size_t n, std::size_t k);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;  // absolute, as reported by the rule
};

// Adaptive Gauss-Kronrod (61 point) integration of f over [a, b].
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-13, int max_depth = 15);

struct GaussHermiteRule {
    std::vector<double> nodes;    // roots of H_n, ascending
    std::vector<double> weights;  // positive, sum to sqrt(pi)
};

// Gauss-Hermite rule for weight exp(-x^2), computed by Golub-Welsch and cached.
const GaussHermiteRule& gauss_hermite(std::size_t n);

// Runs fn(i) for i in [0, count) on up to n_threads workers.  Work items only
// write to their own slot of any output, so the result is independent of the
// thread count.
void parallel_for(std::size_t count, int n_threads, const std::function<void(std::size_t)>& fn);

// Shortest round-trip decimal form (17 significant digits) used by every CSV writer.
std::string format_g17(double x);

}  // namespace qtherm
