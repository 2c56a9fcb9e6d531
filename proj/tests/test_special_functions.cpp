#include <cmath>

#include "doctest.h"
#include "hmean/special_functions.hpp"

using namespace hmean;

TEST_CASE("incomplete gamma complementarity and anchors") {
  for (double a : {0.5, 1.0, 2.5, 10.0})
    for (double x : {0.1, 1.0, 3.0, 20.0}) {
      CHECK(gamma_p(a, x) + gamma_q(a, x) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(gamma_p(a, x) >= 0.0);
      CHECK(gamma_p(a, x) <= 1.0);
    }
  // P(1, x) = 1 - e^{-x}
  CHECK(gamma_p(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK_THROWS(gamma_p(0.0, 1.0));
  CHECK_THROWS(gamma_p(1.0, -1.0));
}

TEST_CASE("chi-square tail and quantile anchors") {
  // k=2 closed form: P(chi2_2 >= t) = e^{-t/2}
  CHECK(chi2_upper_tail(2, 3.0) == doctest::Approx(std::exp(-1.5)).epsilon(1e-12));
  CHECK(chi2_upper_quantile(2, 0.05) ==
        doctest::Approx(-2.0 * std::log(0.05)).epsilon(1e-10));
  CHECK(chi2_upper_quantile(3, 0.05) == doctest::Approx(7.81473).epsilon(1e-5));
  // k=1, alpha=0.5: square of the normal upper quartile
  CHECK(chi2_upper_quantile(1, 0.5) == doctest::Approx(0.45494).epsilon(1e-4));
  // quantile inverts the tail
  for (int k : {1, 2, 3, 6})
    for (double alpha : {0.01, 0.05, 0.5, 0.9})
      CHECK(chi2_upper_tail(k, chi2_upper_quantile(k, alpha)) ==
            doctest::Approx(alpha).epsilon(1e-8));
  CHECK_THROWS(chi2_upper_quantile(0, 0.05));
  CHECK_THROWS(chi2_upper_quantile(2, 1.5));
}

TEST_CASE("normal pdf/cdf") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-6));
  CHECK(normal_pdf(0.0) == doctest::Approx(1.0 / std::sqrt(2 * M_PI)).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature anchors") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0, 1e-12) ==
        doctest::Approx(std::sqrt(M_PI)).epsilon(1e-10));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == doctest::Approx(0.0));
}
