#include "ratchetlab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "ratchetlab/specfun.hpp"

using namespace ratchetlab;

TEST_CASE("integrate_adaptive: polynomials and peaked integrands") {
    CHECK(integrate_adaptive([](double x) { return x * x; }, 0.0, 3.0) ==
          doctest::Approx(9.0).epsilon(1e-13));
    // narrow Gaussian needs subdivision
    const double v = integrate_adaptive(
        [](double x) { return std::exp(-200.0 * (x - 0.7) * (x - 0.7)); }, 0.0, 2.0, 1e-13);
    CHECK(v == doctest::Approx(std::sqrt(3.14159265358979323846 / 200.0)).epsilon(1e-11));
    CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::cos(1e4 * x); }, 0.0, 1.0,
                                       1e-16, 1e-16, 8),
                    std::runtime_error);
}

TEST_CASE("integrate_semiinfinite: exponential and Gaussian tails") {
    CHECK(integrate_semiinfinite([](double x) { return std::exp(-x); }, DecayHint::EXP) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(integrate_semiinfinite([](double x) { return std::exp(-x * x); }, DecayHint::GAUSS) ==
          doctest::Approx(0.5 * std::sqrt(3.14159265358979323846)).epsilon(1e-10));
    // integral of Ai over [0, inf) is 1/3
    CHECK(integrate_semiinfinite([](double x) { return airy(x).ai; }, DecayHint::EXP) ==
          doctest::Approx(1.0 / 3.0).epsilon(3e-10));
    // shifted lower limit
    CHECK(integrate_semiinfinite([](double x) { return std::exp(-x); }, DecayHint::EXP, 2.0) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-9));
}
