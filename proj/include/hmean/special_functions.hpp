#pragma once

#include <functional>

namespace hmean {

double normal_pdf(double x);
double normal_cdf(double x);

/// Regularized lower incomplete gamma P(a, x), series/continued-fraction.
double gamma_p(double a, double x);
/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

/// Upper tail of chi^2_k at t.
double chi2_upper_tail(int k, double t);

/// q with P(chi^2_k >= q) = alpha, accurate to 1e-10.
double chi2_upper_quantile(int k, double alpha);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

}  // namespace hmean
