#include "kpz/airy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace kpz::airy {
namespace {

// Ai(0) = 3^{-2/3} / Gamma(2/3), -Ai'(0) = 3^{-1/3} / Gamma(1/3).
constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kMinusAiPrime0 = 0.258819403792806798405183560189203963L;

constexpr double kSeriesUpper = 5.0;
constexpr double kSeriesLower = -8.0;

// u_k and v_k of the large-argument expansions; u_24 / zeta^24 is far below
// double resolution for zeta >= 7.
constexpr int kTerms = 25;

struct Coefficients {
  double u[kTerms];
  double v[kTerms];
};

constexpr Coefficients make_coefficients() {
  Coefficients c{};
  c.u[0] = 1.0;
  c.v[0] = 1.0;
  for (int k = 1; k < kTerms; ++k) {
    const double kk = k;
    c.u[k] = c.u[k - 1] * (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
    c.v[k] = -(6 * kk + 1) / (6 * kk - 1) * c.u[k];
  }
  return c;
}

constexpr Coefficients kCoef = make_coefficients();

// Partial sums of (-1)^k c_k zeta^{-k}, stopped at the smallest term.
struct AlternatingSums {
  double all_u = 0, all_v = 0;        // sum over every k
  double even_u = 0, odd_u = 0;       // sum over k = 2j and k = 2j + 1 with sign (-1)^j
  double even_v = 0, odd_v = 0;
};

AlternatingSums sum_series(double zeta) {
  AlternatingSums s;
  double power = 1.0;
  double last = INFINITY;
  for (int k = 0; k < kTerms; ++k) {
    const double tu = kCoef.u[k] * power;
    if (std::abs(tu) > last) break;
    last = std::abs(tu);
    const double tv = kCoef.v[k] * power;
    const double alt = (k % 2 == 0) ? 1.0 : -1.0;
    s.all_u += alt * tu;
    s.all_v += alt * tv;
    const double pair_sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      s.even_u += pair_sign * tu;
      s.even_v += pair_sign * tv;
    } else {
      s.odd_u += pair_sign * tu;
      s.odd_v += pair_sign * tv;
    }
    if (tu < 1e-18) break;
    power /= zeta;
  }
  return s;
}

}  // namespace

AiryValue maclaurin(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;

  // f = sum 3^k (1/3)_k x^{3k} / (3k)!,  g = sum 3^k (2/3)_k x^{3k+1} / (3k+1)!
  long double tf = 1.0L, tg = x;
  long double f = tf, g = tg;
  // derivatives: f' starts at x^2 / 2, g' at 1
  long double tfp = x * x / 2.0L, tgp = 1.0L;
  long double fp = tfp, gp = tgp;
  for (int k = 0; k < 200; ++k) {
    const long double a = 3.0L * k;
    tf *= x3 / ((a + 2) * (a + 3));
    tg *= x3 / ((a + 3) * (a + 4));
    tgp *= x3 / ((a + 1) * (a + 3));
    if (k > 0) tfp *= x3 / (a * (a + 2));
    f += tf;
    g += tg;
    gp += tgp;
    if (k > 0) fp += tfp;
    const long double scale = 1e-21L * (1.0L + std::abs(f) + std::abs(g));
    if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) < scale && k > 2) break;
  }
  AiryValue r;
  r.x = xd;
  r.ai = static_cast<double>(kAi0 * f - kMinusAiPrime0 * g);
  r.ai_prime = static_cast<double>(kAi0 * fp - kMinusAiPrime0 * gp);
  return r;
}

AiryValue asymptotic(double x) {
  constexpr double inv_sqrt_pi = 0.564189583547756286948079451560772586;
  AiryValue r;
  r.x = x;
  if (x > 0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const AlternatingSums s = sum_series(zeta);
    const double q = std::sqrt(std::sqrt(x));
    const double e = std::exp(-zeta);
    r.ai = 0.5 * inv_sqrt_pi * e / q * s.all_u;
    r.ai_prime = -0.5 * inv_sqrt_pi * q * e * s.all_v;
    return r;
  }
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const AlternatingSums s = sum_series(zeta);
  const double q = std::sqrt(std::sqrt(z));
  const double phase = zeta - std::numbers::pi / 4.0;
  const double c = std::cos(phase), sn = std::sin(phase);
  r.ai = inv_sqrt_pi / q * (c * s.even_u + sn * s.odd_u);
  r.ai_prime = inv_sqrt_pi * q * (sn * s.even_v - c * s.odd_v);
  return r;
}

AiryValue evaluate(double x) {
  if (!(x >= kMinArg && x <= kMaxArg)) {
    throw std::domain_error("Airy argument " + std::to_string(x) + " outside supported range [-30, 30]");
  }
  if (x > kSeriesUpper || x < kSeriesLower) return asymptotic(x);
  return maclaurin(x);
}

double ai(double x) { return evaluate(x).ai; }
double ai_prime(double x) { return evaluate(x).ai_prime; }

}  // namespace kpz::airy
