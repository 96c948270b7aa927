#include "holo/coefficients.hpp"

#include <cmath>

namespace holo::coeff {

namespace direct {

double tan_ratio(double r) { return std::tan(r) / r; }
double tanh_ratio(double s) { return std::tanh(s) / s; }
double sinc2(double r) { return std::sin(2 * r) / (2 * r); }
double sinhc2(double s) { return std::sinh(2 * s) / (2 * s); }
double versin_ratio(double r) {
  const double q = std::sin(r) / r;  // 1 - cos 2r = 2 sin^2 r
  return q * q;
}
double coshm_ratio(double s) {
  const double q = std::sinh(s) / s;
  return q * q;
}
double sinc2_defect(double r) { return (sinc2(r) - 1.0) / (2 * r * r); }
double sinhc2_excess(double s) { return (sinhc2(s) - 1.0) / (2 * s * s); }

}  // namespace direct

namespace {

// (sin(x)/x - 1)/x^2 (sign = -1) or (sinh(x)/x - 1)/x^2 (sign = +1), x^10
double sinc_defect_series(double x, double sign) {
  const double y = sign * x * x;
  // sum_{k>=1} y^{k-1} / (2k+1)! up to the overall sign of odd powers
  double term = 1.0 / 6.0;
  double sum = term;
  for (int k = 2; k <= 6; ++k) {
    term *= y / ((2.0 * k) * (2.0 * k + 1.0));
    sum += term;
  }
  return sign * sum;
}

}  // namespace

double tan_ratio(double r) {
  if (std::abs(r) < kSeriesWindow) {
    const double r2 = r * r;
    return 1.0 + r2 * (1.0 / 3.0 + r2 * (2.0 / 15.0 + r2 * 17.0 / 315.0));
  }
  return direct::tan_ratio(r);
}

double tanh_ratio(double s) {
  if (std::abs(s) < kSeriesWindow) {
    const double s2 = s * s;
    return 1.0 - s2 * (1.0 / 3.0 - s2 * (2.0 / 15.0 - s2 * 17.0 / 315.0));
  }
  return direct::tanh_ratio(s);
}

double sinc2(double r) {
  if (std::abs(r) < kSeriesWindow) {
    const double x = 2 * r;
    return 1.0 - x * x / 6.0 * (1.0 - x * x / 20.0 * (1.0 - x * x / 42.0));
  }
  return direct::sinc2(r);
}

double sinhc2(double s) {
  if (std::abs(s) < kSeriesWindow) {
    const double x = 2 * s;
    return 1.0 + x * x / 6.0 * (1.0 + x * x / 20.0 * (1.0 + x * x / 42.0));
  }
  return direct::sinhc2(s);
}

double versin_ratio(double r) {
  if (std::abs(r) < kSeriesWindow) {
    const double q = 1.0 - r * r / 6.0 * (1.0 - r * r / 20.0 * (1.0 - r * r / 42.0));
    return q * q;
  }
  return direct::versin_ratio(r);
}

double coshm_ratio(double s) {
  if (std::abs(s) < kSeriesWindow) {
    const double q = 1.0 + s * s / 6.0 * (1.0 + s * s / 20.0 * (1.0 + s * s / 42.0));
    return q * q;
  }
  return direct::coshm_ratio(s);
}

double sinc2_defect(double r) {
  if (std::abs(r) < kDefectWindow) return 2.0 * sinc_defect_series(2 * r, -1.0);
  return direct::sinc2_defect(r);
}

double sinhc2_excess(double s) {
  if (std::abs(s) < kDefectWindow) return 2.0 * sinc_defect_series(2 * s, 1.0);
  return direct::sinhc2_excess(s);
}

}  // namespace holo::coeff
