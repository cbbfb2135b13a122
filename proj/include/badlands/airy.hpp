#pragma once

namespace badlands {

/// Airy function Ai(x): Maclaurin series on [-8, 6.5], asymptotic
/// expansions outside.
double airy_ai(double x);

/// n-th zero of Ai (negative, n >= 1), bracketed around the asymptotic
/// estimate and refined to a few ulps.
double airy_zero(int n);

}  // namespace badlands
