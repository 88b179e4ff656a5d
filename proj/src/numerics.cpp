#include "qtherm/numerics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace qtherm {

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

double coth(double y) {
    if (y <= 0.0) throw std::domain_error("coth: y must be positive");
    if (y < 1e-4) return 1.0 / y + y / 3.0 - y * y * y / 45.0;
    if (y > 20.0) return 1.0 + 2.0 * std::exp(-2.0 * y);  // exp underflows to 0 for large y
    return 1.0 / std::tanh(y);
}

double inv_sinh_sq(double y) {
    if (y <= 0.0) throw std::domain_error("inv_sinh_sq: y must be positive");
    if (y < 1e-4) return 1.0 / (y * y) - 1.0 / 3.0 + y * y / 15.0;
    if (y > 350.0) return 0.0;  // below double underflow threshold
    const double s = std::sinh(y);
    return 1.0 / (s * s);
}

double log_binomial(std::size_t n, std::size_t k) {
    if (k > n) throw std::domain_error("log_binomial: k > n");
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, int max_depth) {
    QuadratureResult r;
    if (a == b) return r;
    using rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    // boost floors each leaf error estimate at |I| * 2 eps on the normalized
    // interval, so a target below 2 eps / half_width is unreachable and the
    // recursion runs to max_depth summing floored leaves into a bogus
    // estimate.  Ask only for what a narrow interval can deliver.
    const double half_width = 0.5 * std::abs(b - a);
    const double eps = std::numeric_limits<double>::epsilon();
    const double tol = std::max(rel_tol, 4.0 * eps / std::max(half_width, eps));
    r.value = rule::integrate(f, a, b, max_depth, tol, &r.error_estimate);
    return r;
}

namespace {

GaussHermiteRule build_gauss_hermite(std::size_t n) {
    // Golub-Welsch on the Jacobi matrix of the (physicists') Hermite recurrence:
    // off-diagonal sqrt(k/2), weights sqrt(pi) * (first eigenvector component)^2.
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(long(n), long(n));
    for (std::size_t k = 1; k < n; ++k) {
        const double off = std::sqrt(double(k) / 2.0);
        jac(long(k), long(k - 1)) = off;
        jac(long(k - 1), long(k)) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gauss_hermite: eigen decomposition failed");

    GaussHermiteRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double sqrt_pi = std::sqrt(M_PI);
    for (std::size_t i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(long(i));
        const double v0 = es.eigenvectors()(0, long(i));
        rule.weights[i] = sqrt_pi * v0 * v0;
    }
    return rule;
}

}  // namespace

const GaussHermiteRule& gauss_hermite(std::size_t n) {
    if (n == 0) throw std::domain_error("gauss_hermite: order must be positive");
    static std::map<std::size_t, GaussHermiteRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_hermite(n)).first;
    return it->second;
}

void parallel_for(std::size_t count, int n_threads, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(count, std::size_t(std::max(1, n_threads)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace qtherm
