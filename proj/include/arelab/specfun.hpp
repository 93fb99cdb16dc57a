#pragma once

#include <span>

namespace arelab::specfun {

/// One term of a mixture: an achievable total mean and its natural-log probability.
struct LogWeightedValue {
    double value = 0.0;
    double log_weight = 0.0;
};

/// Gaussian error function.
double erf(double x);

/// erf(a) - erf(b), evaluated through erfc when both arguments sit in the
/// same tail so that the difference keeps full relative precision.
double erf_diff(double a, double b);

/// Regularized lower incomplete gamma P(a, x) for integer order a >= 1.
///
/// Uses the finite Poisson sum: Q(a, x) = sum_{j<a} x^j e^{-x} / j!, and
/// P = 1 - Q. Whichever of P and Q is the smaller tail is summed directly
/// in log space, the other obtained as the complement.
double regularized_gamma_p(unsigned a, double x);

/// Regularized upper incomplete gamma Q(a, x) = Poisson CDF at a - 1 with mean x.
double regularized_gamma_q(unsigned a, double x);

/// ln sum exp(t_i), shifted by the maximum term. -inf entries are allowed;
/// an all -inf input returns -inf. Throws std::invalid_argument on empty input.
double log_sum_exp(std::span<const double> terms);

/// x * ln(y) with the 0 * ln 0 = 0 convention (so y^0 = 1 even for y = 0).
double xlogy(double x, double y);

} // namespace arelab::specfun
