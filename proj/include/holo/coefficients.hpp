/*
 * coefficients.hpp — scalar coefficient functions of the connection and
 * curvature, all smooth at the origin.
 *
 * Arguments are moduli r = |xi| or s = |zeta|. Ratios that are well
 * conditioned switch to their Taylor series below kSeriesWindow. The two
 * "defect" ratios subtract 1 before dividing by r^2, so their direct form is
 * ill conditioned much further out; they use a longer series below
 * kDefectWindow.
 */
#pragma once

namespace holo::coeff {

inline constexpr double kSeriesWindow = 1e-4;
inline constexpr double kDefectWindow = 0.1;

/// tan(r) / r
double tan_ratio(double r);
/// tanh(s) / s
double tanh_ratio(double s);
/// sin(2r) / (2r)
double sinc2(double r);
/// sinh(2s) / (2s)
double sinhc2(double s);
/// (1 - cos 2r) / (2 r^2)
double versin_ratio(double r);
/// (cosh 2s - 1) / (2 s^2)
double coshm_ratio(double s);
/// (sin(2r)/(2r) - 1) / (2 r^2), tends to -1/3
double sinc2_defect(double r);
/// (sinh(2s)/(2s) - 1) / (2 s^2), tends to 1/3
double sinhc2_excess(double s);

/// Direct (closed-form) evaluations without the series branch; used to
/// check the crossover.
namespace direct {
double tan_ratio(double r);
double tanh_ratio(double s);
double sinc2(double r);
double sinhc2(double s);
double versin_ratio(double r);
double coshm_ratio(double s);
double sinc2_defect(double r);
double sinhc2_excess(double s);
}  // namespace direct

}  // namespace holo::coeff
