#include "wallstokes/liealg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/SVD>

#include "wallstokes/errors.hpp"

namespace wallstokes::liealg {
namespace {

bool in_domain(const FieldHandle& f, const Eigen::VectorXd& x) {
  return !f.admissible || f.admissible(x);
}

void check_margin(const FieldHandle& f, const FieldHandle& g, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& h) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    for (double side : {-4.0, 4.0}) {
      Eigen::VectorXd p = x;
      p[k] += side * h[k];
      if (!in_domain(f, p) || !in_domain(g, p)) {
        throw StepTooLargeError("finite-difference stencil leaves the admissible set along "
                                "coordinate " + std::to_string(k + 1));
      }
    }
  }
}

Eigen::Matrix3d hat(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

// Inverse right Jacobian of SO(3): phi_dot = J_r(phi)^-1 omega_body.
Eigen::Matrix3d inverse_right_jacobian(const Eigen::Vector3d& phi) {
  const double th = phi.norm();
  const Eigen::Matrix3d k = hat(phi);
  double c2;
  if (th < 1e-4) {
    c2 = 1.0 / 12.0 + th * th / 720.0;
  } else {
    c2 = 1.0 / (th * th) - (1.0 + std::cos(th)) / (2.0 * th * std::sin(th));
  }
  return Eigen::Matrix3d::Identity() + 0.5 * k + c2 * k * k;
}

FourSphereState chart_state(const FourSphereState& base, const Eigen::VectorXd& x) {
  FourSphereState s;
  for (int i = 0; i < 4; ++i) s.xi[i] = x[i];
  s.c = x.segment<3>(4);
  const Eigen::Vector3d phi = x.segment<3>(7);
  const double th = phi.norm();
  Eigen::Quaterniond q = Eigen::Quaterniond::Identity();
  if (th > 0.0) q = Eigen::Quaterniond(Eigen::AngleAxisd(th, phi / th));
  s.orient = (base.orient.normalized() * q).normalized();
  return s;
}

struct Word {
  FieldHandle field;
  int depth;
};

}  // namespace

Eigen::VectorXd fd_steps(const Eigen::VectorXd& x, double step) {
  Eigen::VectorXd h(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) h[k] = std::max(step, step * std::abs(x[k]));
  return h;
}

Eigen::MatrixXd jacobian(const FieldHandle& f, const Eigen::VectorXd& x, double step) {
  const Eigen::VectorXd h = fd_steps(x, step);
  const Eigen::VectorXd f0 = f(x);
  Eigen::MatrixXd jac(f0.size(), x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    auto at = [&](double m) {
      Eigen::VectorXd p = x;
      p[k] += m * h[k];
      return f(p);
    };
    jac.col(k) = (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h[k]);
  }
  return jac;
}

Eigen::VectorXd lie_bracket(const FieldHandle& f, const FieldHandle& g, const Eigen::VectorXd& x,
                            double step) {
  if (!(step > 0.0)) throw DomainError("finite-difference step must be positive");
  check_margin(f, g, x, fd_steps(x, step));
  return jacobian(g, x, step) * f(x) - jacobian(f, x, step) * g(x);
}

FieldHandle bracket_field(const FieldHandle& f, const FieldHandle& g, double step) {
  FieldHandle out;
  out.eval = [f, g, step](const Eigen::VectorXd& x) { return lie_bracket(f, g, x, step); };
  out.admissible = [f, g](const Eigen::VectorXd& x) { return in_domain(f, x) && in_domain(g, x); };
  out.name = "[" + f.name + "," + g.name + "]";
  return out;
}

RankReport lie_algebra_rank(const std::vector<FieldHandle>& fields, const Eigen::VectorXd& x,
                            int depth, double tol, const Eigen::VectorXd& coordinate_scale) {
  if (depth < 1) throw DomainError("bracket depth must be at least 1");
  if (fields.empty()) throw DomainError("no fields given");
  const Eigen::Index n = x.size();
  if (coordinate_scale.size() != 0 && coordinate_scale.size() != n) {
    throw DomainError("coordinate scale has the wrong dimension");
  }

  std::vector<Word> words;
  for (const auto& f : fields) words.push_back({f, 1});
  std::vector<Word> prev;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (std::size_t j = i + 1; j < fields.size() && depth >= 2; ++j) {
      prev.push_back({bracket_field(fields[i], fields[j], kBracketStep), 2});
    }
  }
  words.insert(words.end(), prev.begin(), prev.end());
  for (int d = 3; d <= depth; ++d) {
    std::vector<Word> next;
    for (const auto& f : fields) {
      for (const auto& w : prev) next.push_back({bracket_field(f, w.field, kNestedStep), d});
    }
    words.insert(words.end(), next.begin(), next.end());
    prev = std::move(next);
  }

  RankReport report;
  report.depth = depth;
  report.word_matrix.resize(n, static_cast<Eigen::Index>(words.size()));
  Eigen::MatrixXd scaled(n, static_cast<Eigen::Index>(words.size()));
  for (std::size_t k = 0; k < words.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    report.words.push_back(words[k].field.name);
    Eigen::VectorXd v = words[k].field(x);
    if (v.size() != n || !v.allFinite()) {
      throw ConsistencyError("bracket word " + words[k].field.name + " is not a finite tangent");
    }
    report.word_matrix.col(col) = v;
    if (coordinate_scale.size() == n) v = v.cwiseQuotient(coordinate_scale);
    const double norm = v.norm();
    scaled.col(col) = norm > 0.0 ? Eigen::VectorXd(v / norm) : v;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled);
  const Eigen::VectorXd sv = svd.singularValues();
  report.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double s1 = sv.size() > 0 ? sv[0] : 0.0;
  report.dimension = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv[k] > tol * s1) ++report.dimension;
  }
  return report;
}

std::vector<FieldHandle> three_sphere_handles(const SwimmerParams& params, bool wall,
                                              const FieldOptions& options) {
  auto admissible = [params](const Eigen::VectorXd& x) {
    return swimmer::violations(ThreeSphereState::from_vector(x), params).empty();
  };
  std::vector<FieldHandle> out;
  for (int k = 0; k < 2; ++k) {
    FieldHandle h;
    h.eval = [params, wall, options, k](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return swimmer::three_sphere_fields(ThreeSphereState::from_vector(x), params, wall,
                                          options)[k];
    };
    h.admissible = admissible;
    h.name = "F" + std::to_string(k + 1);
    out.push_back(std::move(h));
  }
  return out;
}

Eigen::VectorXd four_sphere_chart_point(const FourSphereState& base) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(10);
  for (int i = 0; i < 4; ++i) x[i] = base.xi[i];
  x.segment<3>(4) = base.c;
  return x;
}

std::vector<FieldHandle> four_sphere_handles(const FourSphereState& base,
                                             const SwimmerParams& params, bool wall) {
  auto admissible = [base, params](const Eigen::VectorXd& x) {
    return swimmer::violations(chart_state(base, x), params).empty();
  };
  std::vector<FieldHandle> out;
  for (int k = 0; k < 4; ++k) {
    FieldHandle h;
    h.eval = [base, params, wall, k](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      const Vector10d f = swimmer::four_sphere_fields(chart_state(base, x), params, wall)[k];
      Eigen::VectorXd v = f;
      v.segment<3>(7) = inverse_right_jacobian(x.segment<3>(7)) * f.segment<3>(7);
      return v;
    };
    h.admissible = admissible;
    h.name = "F" + std::to_string(k + 1);
    out.push_back(std::move(h));
  }
  return out;
}

std::vector<RankMapRow> rank_map(const RankGrid& grid, const SwimmerParams& params, bool wall,
                                 int depth, double tol, int threads) {
  std::vector<RankMapRow> rows;
  for (double a : grid.xi1.values) {
    for (double b : grid.xi2.values) {
      for (double y : grid.y.values) {
        for (double t : grid.theta.values) {
          RankMapRow r;
          r.xi1 = a;
          r.xi2 = b;
          r.y = y;
          r.theta = t;
          rows.push_back(r);
        }
      }
    }
  }
  const auto handles = three_sphere_handles(params, wall);
  auto work = [&](RankMapRow& r) {
    const ThreeSphereState s{r.xi1, r.xi2, 0.0, r.y, r.theta};
    const auto v = swimmer::violations(s, params);
    if (!v.empty()) {
      r.dimension = -1;
      r.sigma_min_ratio = std::numeric_limits<double>::quiet_NaN();
      r.error = v.front();
      return;
    }
    try {
      const RankReport rep = lie_algebra_rank(handles, s.vector(), depth, tol);
      r.dimension = rep.dimension;
      r.sigma_min_ratio = rep.singular_values.back() / rep.singular_values.front();
    } catch (const Error& e) {
      r.dimension = -1;
      r.sigma_min_ratio = std::numeric_limits<double>::quiet_NaN();
      r.error = e.what();
    }
  };

  unsigned n_threads = threads > 0 ? static_cast<unsigned>(threads)
                                   : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(std::max<std::size_t>(rows.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) work(rows[i]);
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  return rows;
}

}  // namespace wallstokes::liealg
