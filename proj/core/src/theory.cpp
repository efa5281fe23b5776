#include "spr/theory.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/beta.hpp>

#include "spr/errors.hpp"

namespace spr {
namespace {

void check_dof(double x, int k1, int k2) {
  if (k1 < 1 || k2 < 1) throw InvalidArgument("f_cdf: degrees of freedom must be >= 1");
  if (!(x >= 0.0)) throw InvalidArgument("f_cdf: x must be >= 0");
}

}  // namespace

double f_cdf(double x, int k1, int k2) {
  check_dof(x, k1, k2);
  if (std::isinf(x)) return 1.0;
  const double a = k1 * x;
  return boost::math::ibeta(0.5 * k1, 0.5 * k2, a / (a + k2));
}

double f_cdf_complement(double x, int k1, int k2) {
  check_dof(x, k1, k2);
  if (std::isinf(x)) return 0.0;
  const double a = k1 * x;
  return boost::math::ibeta(0.5 * k2, 0.5 * k1, k2 / (a + k2));
}

double step_success_probability(int k_total, int step, double sigma, int dimension) {
  if (k_total < 3 || step < 2 || step > k_total - 1)
    throw InvalidArgument("step_success_probability: need K >= 3 and 2 <= k <= K - 1");
  if (dimension < 1) throw InvalidArgument("step_success_probability: dimension must be >= 1");
  if (!(sigma >= 0.0)) throw InvalidArgument("step_success_probability: sigma must be >= 0");
  if (sigma == 0.0) return 1.0;

  const double n = static_cast<double>(k_total) * k_total - k_total + 1;
  const double log_exponent = step * std::log(n) + 2.0 * std::log(k_total - 1.0);
  const double x = 1.0 + 1.0 / (6.0 * sigma * sigma);
  const double q = f_cdf_complement(x, dimension * step, dimension * step);
  if (q <= 0.0) return 1.0;
  if (q >= 1.0) return 0.0;
  // F^E = exp(-t) with t = -E log F
  const double t = std::exp(log_exponent + std::log(-std::log1p(-q)));
  const double log_all_fail = std::log(-std::expm1(-t));
  return 0.0 - std::expm1((k_total - step) * log_all_fail);  // +0, never -0
}

double success_probability(int k, double sigma, int dimension) {
  if (k < 3) throw InvalidArgument("success_probability: K must be >= 3");
  if (!(sigma >= 0.0)) throw InvalidArgument("success_probability: sigma must be >= 0");
  double p = 1.0;
  for (int step = 2; step <= k - 1; ++step) p *= step_success_probability(k, step, sigma, dimension);
  return p;
}

double expected_mse(int k, double sigma) {
  if (k < 2) throw InvalidArgument("expected_mse: K must be >= 2");
  if (!(sigma >= 0.0)) throw InvalidArgument("expected_mse: sigma must be >= 0");
  return (k - 1) * sigma * sigma;
}

}  // namespace spr
