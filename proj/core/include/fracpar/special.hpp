#pragma once

namespace fracpar {

// Gamma(-s) for s in (0,1), via the reflection formula
// Gamma(-s) = -pi / (s sin(pi s) Gamma(s)); always negative there.
double gamma_negative(double s);

// Upper incomplete gamma Gamma(a, x) for x > 0 and any real a (including
// a <= 0, where the usual library routines give up): for positive a the
// standard function is used; otherwise the value is reached by the downward
// recurrence Gamma(a, x) = (Gamma(a+1, x) - x^a e^{-x}) / a.
double upper_incomplete_gamma(double a, double x);

}  // namespace fracpar
