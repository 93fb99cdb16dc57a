#include "arelab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arelab::specfun {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// ln( x^j e^{-x} / j! ) for x > 0.
double log_poisson_term(unsigned j, double x) {
    return static_cast<double>(j) * std::log(x) - x - std::lgamma(static_cast<double>(j) + 1.0);
}

// sum_{j >= a} x^j e^{-x} / j!, valid (and the smaller tail) for x < a.
double upper_poisson_tail(unsigned a, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (unsigned n = 1; n < 100000; ++n) {
        term *= x / (static_cast<double>(a) + n);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return std::exp(log_poisson_term(a, x)) * sum;
}

// sum_{j < a} x^j e^{-x} / j!, summed downward from the largest term (x >= a).
double lower_poisson_sum(unsigned a, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (unsigned j = a - 1; j > 0; --j) {
        term *= static_cast<double>(j) / x;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return std::exp(log_poisson_term(a - 1, x)) * sum;
}

} // namespace

double erf(double x) { return std::erf(x); }

double erf_diff(double a, double b) {
    if (a > 0.0 && b > 0.0) return std::erfc(b) - std::erfc(a);
    if (a < 0.0 && b < 0.0) return std::erfc(-a) - std::erfc(-b);
    return std::erf(a) - std::erf(b);
}

double regularized_gamma_q(unsigned a, double x) {
    if (a == 0) throw std::invalid_argument("regularized_gamma_q: order must be >= 1");
    if (!(x >= 0.0)) throw std::invalid_argument("regularized_gamma_q: x must be >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < static_cast<double>(a)) return std::clamp(1.0 - upper_poisson_tail(a, x), 0.0, 1.0);
    return std::clamp(lower_poisson_sum(a, x), 0.0, 1.0);
}

double regularized_gamma_p(unsigned a, double x) {
    if (a == 0) throw std::invalid_argument("regularized_gamma_p: order must be >= 1");
    if (!(x >= 0.0)) throw std::invalid_argument("regularized_gamma_p: x must be >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (a == 1) return -std::expm1(-x);
    if (x < static_cast<double>(a)) return std::clamp(upper_poisson_tail(a, x), 0.0, 1.0);
    return std::clamp(1.0 - lower_poisson_sum(a, x), 0.0, 1.0);
}

double log_sum_exp(std::span<const double> terms) {
    if (terms.empty()) throw std::invalid_argument("log_sum_exp: empty term list");
    const double peak = *std::max_element(terms.begin(), terms.end());
    if (peak == kNegInf) return kNegInf;
    if (std::isinf(peak)) return peak;
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - peak);
    return peak + std::log(acc);
}

double xlogy(double x, double y) {
    if (x == 0.0) return 0.0;
    if (y == 0.0) return kNegInf;
    return x * std::log(y);
}

} // namespace arelab::specfun
