#pragma once

// Closed-form far-field expansions of the three-sphere fields, their Lie
// brackets and the bracket determinant. Every value is O(a) with corrections
// in 1/y up to 1/y^4; remainders are O(a^2) + O(a / y^5).

#include <array>

#include <Eigen/Core>

#include "wallstokes/swimmer.hpp"

namespace wallstokes::series {

/// Orders retained by a truncated expansion: powers of a up to a_order and
/// inverse powers of y up to y_order. The remainder is O(a^(a_order+1)) +
/// O(a / y^(y_order+1)).
struct Truncation {
  int a_order = 1;
  int y_order = 4;
};

struct SeriesFieldSample {
  Vector5d value;    ///< full truncated field
  Vector5d leading;  ///< a-independent part
  Truncation truncation;
};

/// Components 3..5 of the first and second brackets. Components 1..2 are zero.
struct SeriesBracketSample {
  Vector5d f1f2;    ///< [F1, F2]
  Vector5d f1f1f2;  ///< [F1, [F1, F2]]
  Vector5d f2f1f2;  ///< [F2, [F1, F2]]
  Truncation truncation;
};

/// How the printed bracket formulas are read.
/// corrected: brackets as [F,G] = (F.grad)G - (G.grad)F, matching the field
///   expansion; the second-order bracket [F2,[F1,F2]]_4 carries the sign the
///   fields imply and the 1/y^4 terms of components 3 are linear in a.
/// verbatim: the formulas exactly as printed.
enum class Transcription { corrected, verbatim };

double K13(double xi1, double xi2, double theta);
double K23(double xi1, double xi2, double theta);
double K33(double xi1, double xi2, double theta);
double K14(double xi1, double xi2, double theta);
double K24(double xi1, double xi2, double theta);
double K34(double xi1, double xi2, double theta);
double K44(double xi1, double xi2, double theta);
double K15(double xi1, double xi2, double theta);
double K25(double xi1, double xi2, double theta);
double L3(double xi1, double xi2, double theta);
double L4(double xi1, double xi2, double theta);
double R(double xi1, double xi2, double theta);
double R_prime(double xi1, double xi2);
/// Equal-arm y^-10 determinant coefficient.
double T(double xi, double a, double theta);

std::array<SeriesFieldSample, 2> series_fields(double xi1, double xi2, double y, double theta,
                                               double a);

SeriesBracketSample series_brackets(double xi1, double xi2, double y, double theta, double a,
                                    Transcription mode = Transcription::corrected);

/// Columns [F1,F2], [F1,[F1,F2]], [F2,[F1,F2]], rows components 3..5.
Eigen::Matrix3d bracket_minor(const SeriesBracketSample& b);

struct DeterminantExpansion {
  double leading = 0.0;  ///< coefficient of y^-order
  int order = 9;
  bool equal_arms = false;
  /// Leading coefficient of the theta = 0 subdeterminant
  /// | [F1,F2]_3 [F1,[F1,F2]]_3 ; [F1,F2]_5 [F1,[F1,F2]]_5 | at order y^-4.
  double delta = 0.0;
  int delta_order = 4;
};

/// Generic arms: 81 a^3 (xi1 - xi2) sin(theta) cos^2(theta) R / 131072 at
/// y^-9. Equal arms: T at y^-10.
DeterminantExpansion series_determinant(double xi1, double xi2, double y, double theta, double a);

}  // namespace wallstokes::series
