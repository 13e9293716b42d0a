#pragma once

namespace ratchetlab {

// Airy Ai, Bi and their first derivatives at a common argument.
// On [0, inf): ai > 0 decreasing, bi > 0 increasing, and the Wronskian
// bi_prime*ai - ai_prime*bi equals 1/pi.
struct AiryQuad {
    double ai;
    double ai_prime;
    double bi;
    double bi_prime;
};

// Argument triple for the confluent hypergeometric functions.
struct HypergeomArgs {
    double a;
    double b;
    double x;
};

// Gamma function, relative error <= 1e-12 on [-30, 30] away from the poles.
// Throws std::domain_error at nonpositive integers.
double gamma_fn(double x);

// 1/Gamma(x); zero at the poles of Gamma.
double rgamma(double x);

// Airy functions with derivatives, supported on [-5, 100].
AiryQuad airy(double x);

// Kummer confluent hypergeometric M(a,b,x) for x >= 0, b not a nonpositive
// integer. Convergent series with term-ratio stopping for x <= 30, the
// exponential asymptotic expansion beyond; terminating sum when a is a
// nonpositive integer.
double kummer_m(double a, double b, double x);
double kummer_m(const HypergeomArgs& args);

// Tricomi confluent hypergeometric U(a,b,x) for x >= 0 (x = 0 needs b < 1)
// and non-integer b. Nonpositive-integer a takes the terminating polynomial
// branch.
double tricomi_u(double a, double b, double x);
double tricomi_u(const HypergeomArgs& args);

// d/dx U(a,b,x) = -a U(a+1, b+1, x).
double tricomi_u_prime(double a, double b, double x);
double tricomi_u_prime(const HypergeomArgs& args);

// Error function (2/sqrt(pi)) * integral of exp(-u^2) on [0,x], for x >= 0.
double erf_fn(double x);

}  // namespace ratchetlab
