#include "fracpar/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "fracpar/errors.hpp"

namespace fracpar {

double gamma_negative(double s) {
  if (!(s > 0.0 && s < 1.0)) {
    throw InvalidArgumentError("gamma_negative: s must be in (0,1)");
  }
  return -std::numbers::pi /
         (s * std::sin(std::numbers::pi * s) * std::tgamma(s));
}

double upper_incomplete_gamma(double a, double x) {
  if (!(x > 0.0)) {
    throw InvalidArgumentError("upper_incomplete_gamma: need x > 0");
  }
  double aa = a;
  int k = 0;
  while (aa <= 0.0) {
    aa += 1.0;
    ++k;
  }
  double g = boost::math::tgamma(aa, x);  // upper incomplete, aa > 0
  for (int i = 0; i < k; ++i) {
    aa -= 1.0;
    g = (g - std::pow(x, aa) * std::exp(-x)) / aa;
  }
  return g;
}

}  // namespace fracpar
