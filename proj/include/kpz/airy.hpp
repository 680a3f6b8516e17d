#pragma once

namespace kpz::airy {

// Supported argument range. Outside it the functions throw std::domain_error.
inline constexpr double kMinArg = -30.0;
inline constexpr double kMaxArg = 30.0;

struct AiryValue {
  double x = 0.0;
  double ai = 0.0;
  double ai_prime = 0.0;
};

// Ai and Ai' together, absolute error <= 1e-10 on [kMinArg, kMaxArg].
//
// Maclaurin series (long double) on [-8, 5], the exponentially small
// asymptotic expansion above 5 and the oscillatory one below -8.
AiryValue evaluate(double x);

double ai(double x);
double ai_prime(double x);

// Regime-specific evaluators, exposed so the series/asymptotic overlap can
// be checked. No range checks.
AiryValue maclaurin(double x);
AiryValue asymptotic(double x);

}  // namespace kpz::airy
