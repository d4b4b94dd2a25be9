#pragma once

#include <cmath>
#include <stdexcept>

namespace rescurv {

namespace detail {

// Regularized lower incomplete gamma P(a, x) by series / continued fraction.
inline double regularized_gamma_p(double a, double x) {
  if (x < 0 || a <= 0) throw std::invalid_argument("regularized_gamma_p domain");
  if (x == 0) return 0;
  const double log_gamma_a = std::lgamma(a);
  if (x < a + 1) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 1000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma_a);
  }
  // Lentz continued fraction for Q(a, x).
  double b = x + 1 - a, c = 1e300, d = 1 / b, h = d;
  for (int k = 1; k < 1000; ++k) {
    const double an = -k * (k - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - log_gamma_a) * h;
}

}  // namespace detail

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
inline double chi_square_p_value(double statistic, int dof) {
  return 1.0 - detail::regularized_gamma_p(dof / 2.0, statistic / 2.0);
}

// Half-width of a 3-sigma binomial band around probability q with `samples`
// draws.
inline double binomial_band(double q, long samples) {
  return 3.0 * std::sqrt(std::max(q * (1 - q), 0.0) / static_cast<double>(samples));
}

}  // namespace rescurv
