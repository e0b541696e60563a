#include "wallstokes/series.hpp"

#include <cmath>
#include <string>

#include "wallstokes/errors.hpp"

namespace wallstokes::series {
namespace {

double pw(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// xi2^2 + xi1 xi2 + xi1^2
double quad(double x1, double x2) { return x2 * x2 + x1 * x2 + x1 * x1; }

double checked_div(double num, double den) {
  if (den == 0.0) throw DomainError("series denominator vanishes");
  return num / den;
}

void check_args(double xi1, double xi2, double y, double a) {
  if (!(xi1 > 0.0) || !(xi2 > 0.0)) throw DomainError("series needs positive arm lengths");
  if (!(y > 0.0)) throw DomainError("series needs y > 0");
  if (!(a > 0.0)) throw DomainError("series needs a > 0");
}

// cos^4 - 4 cos^2 + 8
double trig8(double c) { return pw(c, 4) - 4.0 * c * c + 8.0; }

}  // namespace

double K13(double x1, double x2, double) {
  const double num = x2 * x2 * x1 * x1 - pw(x2, 3) * x1 - pw(x2, 4) + 2.0 * pw(x1, 3) * x2 +
                     2.0 * pw(x1, 4);
  return checked_div(num, quad(x1, x2) * x1 * x2 * (x1 + x2));
}

double K23(double x1, double x2, double t) {
  const double c = std::cos(t);
  const double c2 = c * c, c4 = c2 * c2;
  return -210.0 * x1 * x1 * c2 + 12.0 * c4 * x1 * x1 + 184.0 * x1 * x1 + 24.0 * c2 * x1 * x2 -
         32.0 * x1 * x2 - 6.0 * c4 * x1 * x2 - 92.0 * x2 * x2 + 105.0 * x2 * x2 * c2 -
         6.0 * c4 * x2 * x2;
}

double K33(double x1, double x2, double t) {
  const double c = std::cos(t);
  const double c2 = c * c, c4 = c2 * c2;
  const double num =
      12.0 * c4 * pw(x2, 5) + 24.0 * pw(x1, 5) * c4 - 168.0 * pw(x2, 5) * c2 -
      336.0 * pw(x1, 5) * c2 + 112.0 * pw(x2, 5) + 72.0 * x1 * pw(x2, 4) -
      176.0 * x1 * x1 * pw(x2, 3) - 136.0 * pw(x1, 3) * x2 * x2 + 224.0 * pw(x1, 5) -
      156.0 * pw(x1, 3) * x2 * x2 * c2 - 24.0 * x1 * x1 * pw(x2, 3) * c2 -
      240.0 * pw(x1, 4) * x2 * c2 + 48.0 * pw(x1, 4) * x2 - 156.0 * x1 * pw(x2, 4) * c2 -
      24.0 * c4 * x1 * x1 * pw(x2, 3) + 9.0 * c4 * x1 * pw(x2, 4) -
      21.0 * pw(x1, 3) * c4 * x2 * x2;
  return checked_div(num, quad(x1, x2));
}

double K14(double x1, double x2, double t) { return K13(x1, x2, t); }

double K24(double x1, double x2, double t) {
  const double c2 = std::cos(t) * std::cos(t);
  return 6.0 * c2 * x1 + 3.0 * c2 * x2 - 4.0 * x1 - 2.0 * x2;
}

double K34(double x1, double x2, double t) {
  const double c = std::cos(t);
  const double c2 = c * c, c4 = c2 * c2;
  return -132.0 * x1 * x1 * c2 + 6.0 * c4 * x1 * x1 + 56.0 * x1 * x1 + 12.0 * c2 * x1 * x2 -
         16.0 * x1 * x2 - 3.0 * c4 * x1 * x2 - 28.0 * x2 * x2 + 66.0 * x2 * x2 * c2 -
         3.0 * c4 * x2 * x2;
}

double K44(double x1, double x2, double t) {
  const double c = std::cos(t);
  const double c2 = c * c, c4 = c2 * c2, c6 = c4 * c2;
  const double num =
      -210.0 * c4 * pw(x2, 5) - 420.0 * pw(x1, 5) * c4 + 232.0 * pw(x2, 5) * c2 +
      24.0 * c6 * pw(x1, 5) - 64.0 * pw(x2, 5) + 12.0 * c6 * pw(x2, 5) -
      96.0 * x1 * pw(x2, 4) - 64.0 * x1 * x1 * pw(x2, 3) - 128.0 * pw(x1, 5) +
      104.0 * pw(x1, 3) * x2 * x2 * c2 - 56.0 * x1 * x1 * pw(x2, 3) * c2 -
      96.0 * pw(x1, 4) * x2 + 216.0 * x1 * pw(x2, 4) * c2 - 66.0 * c4 * x1 * x1 * pw(x2, 3) -
      318.0 * pw(x1, 4) * c4 * x2 - 240.0 * pw(x1, 3) * c4 * x2 * x2 -
      24.0 * c6 * x1 * x1 * pw(x2, 3) - 21.0 * c6 * pw(x1, 3) * x2 * x2 +
      464.0 * pw(x1, 5) * c2 - 128.0 * pw(x1, 3) * x2 * x2 + 264.0 * pw(x1, 4) * x2 * c2 -
      204.0 * c4 * x1 * pw(x2, 4) + 9.0 * c6 * x1 * pw(x2, 4);
  return checked_div(num, 512.0 * x2 * x2 + 512.0 * x1 * x2 + 512.0 * x1 * x1);
}

double K15(double x1, double x2, double t) {
  const double c2 = std::cos(t) * std::cos(t);
  return -8.0 * x1 - 4.0 * x2 + 2.0 * c2 * x1 + c2 * x2;
}

double K25(double x1, double x2, double t) {
  const double c = std::cos(t);
  const double c2 = c * c, c4 = c2 * c2;
  const double num =
      20.0 * c2 * pw(x2, 4) - 40.0 * c2 * pw(x1, 4) - 4.0 * c4 * pw(x2, 4) +
      8.0 * pw(x1, 4) * c4 - 40.0 * pw(x2, 3) * x1 - 8.0 * x2 * x2 * x1 * x1 +
      32.0 * pw(x1, 3) * x2 - 16.0 * pw(x2, 4) + 32.0 * pw(x2, 3) * c2 * x1 -
      7.0 * c4 * pw(x2, 3) * x1 + c4 * x1 * x1 * x2 * x2 - 40.0 * c2 * pw(x1, 3) * x2 +
      8.0 * pw(x1, 3) * c4 * x2 + 32.0 * pw(x1, 4) - 8.0 * x2 * x2 * x1 * x1 * c2;
  return checked_div(num, quad(x1, x2));
}

double L3(double x1, double x2, double t) {
  const double q = quad(x1, x2);
  return checked_div(pw(x2, 3) * trig8(std::cos(t)) * (2.0 * x1 * x1 - x1 * x2 - x2 * x2), q * q);
}

double L4(double x1, double x2, double t) {
  const double q = quad(x1, x2);
  return checked_div(pw(x2, 3) * trig8(std::cos(t)) * (2.0 * x1 + x2), q * q);
}

double R(double x1, double x2, double t) {
  const double c2 = std::cos(t) * std::cos(t);
  const double poly = 6.0 * pw(x1, 6) + 27.0 * pw(x1, 5) * x2 + 50.0 * pw(x1, 4) * x2 * x2 +
                      55.0 * pw(x1, 3) * pw(x2, 3) + 50.0 * x1 * x1 * pw(x2, 4) +
                      27.0 * x1 * pw(x2, 5) + 6.0 * pw(x2, 6);
  const double trig = 64.0 - 64.0 * c2 + 32.0 * c2 * c2 - 8.0 * pw(c2, 3) + pw(c2, 4);
  return checked_div(poly, (x1 + x2) * quad(x1, x2) * x1 * x2) * trig;
}

double R_prime(double x1, double x2) {
  const double q = quad(x1, x2);
  const double poly = 2.0 * pw(x2, 5) + 11.0 * x1 * pw(x2, 4) + 16.0 * x1 * x1 * pw(x2, 3) +
                      19.0 * pw(x1, 3) * x2 * x2 + 12.0 * pw(x1, 4) * x2 + 3.0 * pw(x1, 5);
  return checked_div(poly, (x1 + x2) * (x1 + x2) * x2 * x2 * q * q);
}

double T(double xi, double a, double t) {
  const double s = std::sin(t), c = std::cos(t);
  const double f = trig8(c);
  return -945.0 / 524288.0 * pw(a, 3) * s * s * c * c * xi * f * f;
}

std::array<SeriesFieldSample, 2> series_fields(double x1, double x2, double y, double t,
                                               double a) {
  check_args(x1, x2, y, a);
  const double s = std::sin(t), c = std::cos(t);
  const double y2 = y * y, y3 = y2 * y, y4 = y3 * y;

  std::array<SeriesFieldSample, 2> out;
  for (auto& f : out) f.truncation = Truncation{1, 4};

  out[0].leading << 1.0, 0.0, c / 3.0, s / 3.0, 0.0;
  out[1].leading << 0.0, 1.0, -c / 3.0, -s / 3.0, 0.0;

  const double f13 = c / 3.0 + a / 6.0 * c * K13(x1, x2, t) +
                     3.0 * a / (16.0 * y2) * s * c * (x2 + 2.0 * x1) +
                     a / (384.0 * y3) * c * K23(x1, x2, t) +
                     a / (512.0 * y4) * s * c * K33(x1, x2, t);
  const double f23 = -c / 3.0 - a / 6.0 * c * K13(x2, x1, -t) +
                     3.0 * a / (16.0 * y2) * s * c * (2.0 * x2 + x1) -
                     a / (384.0 * y3) * c * K23(x2, x1, -t) +
                     a / (512.0 * y4) * s * c * K33(x2, x1, -t);
  const double f14 = s / 3.0 + a / 6.0 * s * K14(x1, x2, t) -
                     3.0 * a / (32.0 * y2) * K24(x1, x2, t) +
                     a / (192.0 * y3) * s * K34(x1, x2, t) - a / y4 * K44(x1, x2, t);
  const double f24 = -s / 3.0 - a / 6.0 * s * K14(x2, x1, -t) -
                     3.0 * a / (32.0 * y2) * K24(x2, x1, t) -
                     a / (192.0 * y3) * s * K34(x2, x1, -t) - a / y4 * K44(x2, x1, -t);
  const double f15 = 3.0 * a / (64.0 * y3) * s * c * K15(x1, x2, t) -
                     9.0 * a / (512.0 * y4) * c * K25(x1, x2, t);
  const double f25 = 3.0 * a / (64.0 * y3) * s * c * K15(x2, x1, -t) +
                     9.0 * a / (512.0 * y4) * c * K25(x2, x1, -t);

  out[0].value << 1.0, 0.0, f13, f14, f15;
  out[1].value << 0.0, 1.0, f23, f24, f25;
  return out;
}

SeriesBracketSample series_brackets(double x1, double x2, double y, double t, double a,
                                    Transcription mode) {
  check_args(x1, x2, y, a);
  const bool verbatim = mode == Transcription::verbatim;
  const double s = std::sin(t), c = std::cos(t);
  const double y4 = pw(y, 4);
  const double tail = 27.0 * a / (512.0 * y4);
  const double extra_a = verbatim ? a : 1.0;

  const double p = checked_div(pw(x1, 4) + 2.0 * pw(x1, 3) * x2 + x2 * x2 * x1 * x1 +
                                   2.0 * pw(x2, 3) * x1 + pw(x2, 4),
                               (x1 + x2) * (x1 + x2) * x2 * x2 * x1 * x1);
  const double q = checked_div(x1 * x2 * trig8(c) * (x1 * x1 - x2 * x2), quad(x1, x2));
  const double b5q = checked_div(x1 * x2 * (x1 + x2) * trig8(c), quad(x1, x2));

  SeriesBracketSample out;
  out.truncation = Truncation{1, 4};

  const double sign1 = verbatim ? 1.0 : -1.0;
  out.f1f2 << 0.0, 0.0,
      sign1 * (-a / 3.0 * c * p - tail * extra_a * c * s * q),
      sign1 * (-a / 3.0 * s * p + tail * c * c * q),
      sign1 * (81.0 * a / (512.0 * y4) * c * b5q);

  const double g1 = checked_div(x2 * (3.0 * x1 * x1 + 3.0 * x1 * x2 + x2 * x2),
                                pw(x1, 3) * pw(x1 + x2, 3));
  out.f1f1f2 << 0.0, 0.0,
      -2.0 * a / 3.0 * c * g1 + tail * c * s * L3(x1, x2, t),
      -2.0 * a / 3.0 * s * g1 - tail * c * c * L3(x1, x2, t),
      -81.0 * a / (512.0 * y4) * c * L4(x1, x2, t);

  const double g2 = checked_div(x1 * (x1 * x1 + 3.0 * x1 * x2 + 3.0 * x2 * x2),
                                pw(x2, 3) * pw(x1 + x2, 3));
  const double d4 = 2.0 * a / 3.0 * s * g2 - tail * c * c * L3(x2, x1, -t);
  out.f2f1f2 << 0.0, 0.0,
      -2.0 / 3.0 * a * c * g2 - tail * extra_a * c * s * L3(x2, x1, -t),
      verbatim ? d4 : -d4,
      -81.0 * a / (512.0 * y4) * c * L4(x2, x1, -t);
  return out;
}

Eigen::Matrix3d bracket_minor(const SeriesBracketSample& b) {
  Eigen::Matrix3d m;
  m.col(0) = b.f1f2.tail<3>();
  m.col(1) = b.f1f1f2.tail<3>();
  m.col(2) = b.f2f1f2.tail<3>();
  return m;
}

DeterminantExpansion series_determinant(double x1, double x2, double y, double t, double a) {
  check_args(x1, x2, y, a);
  DeterminantExpansion out;
  out.equal_arms = x1 == x2;
  if (out.equal_arms) {
    out.leading = T(x1, a, t);
    out.order = 10;
  } else {
    out.leading = 81.0 * pw(a, 3) * (x1 - x2) / 131072.0 * std::sin(t) * std::cos(t) *
                  std::cos(t) * R(x1, x2, t);
    out.order = 9;
  }
  out.delta = 45.0 / 512.0 * a * a * (x1 - x2) * x1 * R_prime(x1, x2);
  out.delta_order = 4;
  return out;
}

}  // namespace wallstokes::series
