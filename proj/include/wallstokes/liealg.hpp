#pragma once

// Finite-difference Lie brackets of sampled vector fields and numerical rank
// of the Lie algebra they generate.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wallstokes/swimmer.hpp"

namespace wallstokes {

/// A smooth vector field on an open subset of R^n. `admissible` (optional)
/// reports whether a point lies in the domain; finite-difference stencils are
/// checked against it.
struct FieldHandle {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::function<bool(const Eigen::VectorXd&)> admissible;
  std::string name;

  Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return eval(x); }
};

struct RankReport {
  int dimension = 0;
  std::vector<double> singular_values;  ///< descending, of the column-scaled word matrix
  int depth = 0;
  std::vector<std::string> words;
  Eigen::MatrixXd word_matrix;  ///< unscaled, one column per word
};

namespace liealg {

inline constexpr double kBracketStep = 1e-4;
inline constexpr double kNestedStep = 1e-3;
inline constexpr double kRankTol = 1e-6;

/// Per-coordinate step max(step, step |x_k|).
Eigen::VectorXd fd_steps(const Eigen::VectorXd& x, double step);

/// Jacobian by fourth-order central differences.
Eigen::MatrixXd jacobian(const FieldHandle& f, const Eigen::VectorXd& x, double step);

/// [F, G](x) = DG(x) F(x) - DF(x) G(x). Throws StepTooLargeError unless
/// x +- 4 h_k e_k lies in both domains for every k.
Eigen::VectorXd lie_bracket(const FieldHandle& f, const FieldHandle& g, const Eigen::VectorXd& x,
                            double step = kBracketStep);

/// The bracket [F, G] as a field, evaluated with the given step.
FieldHandle bracket_field(const FieldHandle& f, const FieldHandle& g, double step = kBracketStep);

/// Rank of the span of all bracket words up to `depth`: F_i, [F_i, F_j] (i < j),
/// [F_i, [F_j, F_k]], ... Rows are divided by `coordinate_scale` (ones when
/// empty), columns are normalized to unit length, and the rank counts singular
/// values above tol * sigma_1. Depth-1 words use no differencing, depth-2
/// words use kBracketStep and deeper words kNestedStep for the outer bracket.
RankReport lie_algebra_rank(const std::vector<FieldHandle>& fields, const Eigen::VectorXd& x,
                            int depth = 3, double tol = kRankTol,
                            const Eigen::VectorXd& coordinate_scale = {});

/// Three-sphere fields F1, F2 on (xi1, xi2, x, y, theta).
std::vector<FieldHandle> three_sphere_handles(const SwimmerParams& params, bool wall,
                                              const FieldOptions& options = {});

/// Four-sphere fields in the chart (xi1..xi4, c, phi) with orientation
/// R = R0 exp(phi), centered at `base`. Chart coordinates of `base` are
/// (xi, c, 0).
std::vector<FieldHandle> four_sphere_handles(const FourSphereState& base,
                                             const SwimmerParams& params, bool wall);
Eigen::VectorXd four_sphere_chart_point(const FourSphereState& base);

struct GridAxis {
  std::vector<double> values;
};

struct RankGrid {
  GridAxis xi1, xi2, y, theta;
};

struct RankMapRow {
  double xi1 = 0.0, xi2 = 0.0, y = 0.0, theta = 0.0;
  int dimension = -1;             ///< -1 for inadmissible points
  double sigma_min_ratio = 0.0;   ///< smallest / largest singular value
  std::string error;              ///< reason when dimension is -1
};

/// Rank of the three-sphere Lie algebra at every grid point, rows in
/// lexicographic order of (xi1, xi2, y, theta) indices. `threads` <= 0 means
/// hardware concurrency. Output does not depend on the thread count.
std::vector<RankMapRow> rank_map(const RankGrid& grid, const SwimmerParams& params, bool wall,
                                 int depth = 3, double tol = kRankTol, int threads = 1);

}  // namespace liealg
}  // namespace wallstokes
