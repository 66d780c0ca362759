#pragma once

// Planar epsilon-isometries: defect sampling and a degree-based
// surjectivity probe. Results are finite-resolution evidence.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ballbody/error.hpp"
#include "ballbody/geometry.hpp"

namespace ballbody {

using PlanarMap = std::function<Point2(const Point2&)>;

inline Eigen::Matrix2d planar_orthogonal(double angle, bool reflect) {
  Eigen::Matrix2d q;
  q << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  if (reflect) q.col(1) *= -1.0;
  return q;
}

inline PlanarMap planar_rigid(double angle, bool reflect, const Point2& translation) {
  const Eigen::Matrix2d q = planar_orthogonal(angle, reflect);
  return [q, translation](const Point2& x) -> Point2 { return q * x + translation; };
}

struct PerturbedMotion {
  double angle = 0.0;
  bool reflect = false;
  Point2 translation = Point2::Zero();
  double amplitude = 0.0;
  Point2 phase = Point2::Zero();
};

/// Rigid part and phases drawn from `seed`.
inline PerturbedMotion perturbed_motion_params(double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> turn(0.0, 2.0 * kPi), shift(-2.0, 2.0), coin(0.0, 1.0);
  PerturbedMotion p;
  p.angle = turn(rng);
  p.reflect = coin(rng) < 0.5;
  p.translation = Point2(shift(rng), shift(rng));
  p.phase = Point2(turn(rng), turn(rng));
  p.amplitude = amplitude;
  return p;
}

/// x -> g(x) + a (sin(x2 + p1), cos(x1 + p2)). The perturbation has norm at
/// most a*sqrt(2) and Lipschitz constant a.
inline PlanarMap planar_perturbed(const PerturbedMotion& p) {
  const Eigen::Matrix2d q = planar_orthogonal(p.angle, p.reflect);
  return [q, p](const Point2& x) -> Point2 {
    return q * x + p.translation +
           p.amplitude * Point2(std::sin(x.y() + p.phase.x()), std::cos(x.x() + p.phase.y()));
  };
}

inline PlanarMap planar_perturbed(double amplitude, std::uint64_t seed) {
  return planar_perturbed(perturbed_motion_params(amplitude, seed));
}

/// x -> x + x/|x|, with 0 -> (1, 0). Misses the open unit disk.
inline PlanarMap planar_radial_hole() {
  return [](const Point2& x) -> Point2 {
    const double r = x.norm();
    if (r == 0.0) return Point2(1.0, 0.0);
    return x + x / r;
  };
}

/// Largest | |f(x) - f(x')| - |x - x'| | over sampled pairs in radius*B:
/// half the pairs independent, half at log-uniform separations.
inline double eps_isometry_defect_planar(const PlanarMap& f, double radius, int samples, std::uint64_t seed = 1) {
  if (!(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "radius must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto in_disk = [&](double r) {
    const double rho = r * std::sqrt(unit(rng));
    const double a = 2.0 * kPi * unit(rng);
    return Point2(rho * std::cos(a), rho * std::sin(a));
  };
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point2 x = in_disk(radius);
    Point2 x2;
    if (i % 2 == 0) {
      x2 = in_disk(radius);
    } else {
      const double s = radius * std::pow(10.0, -3.0 + 3.3 * unit(rng));
      const double a = 2.0 * kPi * unit(rng);
      x2 = x + s * Point2(std::cos(a), std::sin(a));
    }
    worst = std::max(worst, std::abs((f(x) - f(x2)).norm() - (x - x2).norm()));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Surjectivity probe
// ---------------------------------------------------------------------------

struct SurjectivityConfig {
  double root_tol = 1e-6;
  double defect_radius = 5.0;
  int defect_samples = 4000;
  std::uint64_t seed = 1;
  std::size_t winding_budget = 1u << 16;
  int max_radius_iterations = 8;
};

struct WindingAtRadius {
  double radius = 0.0;
  int winding = 0;
  double min_norm = 0.0;
  std::size_t samples = 0;
};

enum class SurjectivityVerdict { SurjectiveEvidence, Violation, Inconclusive };

inline const char* to_string(SurjectivityVerdict v) {
  switch (v) {
    case SurjectivityVerdict::SurjectiveEvidence: return "surjective-evidence";
    case SurjectivityVerdict::Violation: return "violation";
    case SurjectivityVerdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct ViolationWitness {
  std::string hypothesis;  // "continuity" or "epsilon-bound"
  Point2 location = Point2::Zero();
  double size = 0.0;          // side of the witness square, or the radius R
  double min_residual = 0.0;  // min |f - y| seen on the witness boundary
  double oscillation = 0.0;   // spread of f over the witness square
  std::string detail;
};

struct SurjectivityReport {
  Point2 target = Point2::Zero();
  double epsilon_hat = 0.0;
  RigidMotion affine_fit;
  double fit_error = 0.0;  // empirical C: max |f - U| on the probe disk
  double radius = 0.0;     // R from R > |y - f(0)| + C + eps, doubled
  int radius_iterations = 0;
  std::vector<WindingAtRadius> degrees;
  int fitted_winding = 0;  // winding of U - y on the radius-R circle
  double homotopy_min = 0.0;
  bool preimage_found = false;
  Point2 preimage = Point2::Zero();
  double residual = std::numeric_limits<double>::infinity();
  SurjectivityVerdict verdict = SurjectivityVerdict::Inconclusive;
  std::optional<ViolationWitness> witness;
};

namespace planar_detail {

inline Point2 apply(const RigidMotion& u, const Point2& x) {
  return u.rotation.topLeftCorner<2, 2>() * x + Point2(u.translation[0], u.translation[1]);
}

// Deterministic polar sample of the disk of radius r, boundary included.
inline std::vector<Point2> disk_sample(double r, int rings = 12) {
  std::vector<Point2> out{Point2::Zero()};
  for (int k = 1; k <= rings; ++k) {
    const int count = 8 * k;
    for (int j = 0; j < count; ++j) {
      const double a = 2.0 * kPi * (j + 0.5 * (k % 2)) / count;
      out.emplace_back(r * k / rings * std::cos(a), r * k / rings * std::sin(a));
    }
  }
  return out;
}

struct Fit {
  RigidMotion motion;
  double error = 0.0;
};

inline Fit fit_on_disk(const PlanarMap& f, double r) {
  const auto pts = disk_sample(r);
  std::vector<Vector> src, dst;
  for (const auto& p : pts) {
    src.emplace_back(p);
    dst.emplace_back(f(p));
  }
  Fit out{procrustes_fit(src, dst).motion, 0.0};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.error = std::max(out.error, (Point2(dst[i]) - apply(out.motion, pts[i])).norm());
  }
  return out;
}

// Tracks the sample closest to the target while a winding curve is traced.
struct Closest {
  Point2 x = Point2::Zero();
  double residual = std::numeric_limits<double>::infinity();
  void see(const Point2& p, double r) {
    if (r < residual) {
      residual = r;
      x = p;
    }
  }
};

struct Rect {
  Point2 lo, hi;
  Point2 at(double s) const {
    const double tau = 4.0 * s / (2.0 * kPi);
    const int edge = std::min(3, static_cast<int>(tau));
    const double t = tau - edge;
    switch (edge) {
      case 0: return {lo.x() + t * (hi.x() - lo.x()), lo.y()};
      case 1: return {hi.x(), lo.y() + t * (hi.y() - lo.y())};
      case 2: return {hi.x() - t * (hi.x() - lo.x()), hi.y()};
      default: return {lo.x(), hi.y() - t * (hi.y() - lo.y())};
    }
  }
  double side() const { return (hi - lo).maxCoeff(); }
  Point2 center() const { return 0.5 * (lo + hi); }
};

inline AdaptiveWinding trace(const std::function<Point2(double)>& where, const PlanarMap& f, const Point2& y,
                             Closest& closest, std::size_t budget) {
  return adaptive_winding(
      [&](double s) {
        const Point2 x = where(s);
        const Point2 v = f(x) - y;
        closest.see(x, v.norm());
        return v;
      },
      32, budget);
}

struct NewtonResult {
  Point2 x;
  double residual;
};

// Damped Newton with a central-difference Jacobian.
inline NewtonResult newton(const PlanarMap& f, const Point2& y, Point2 x, double target) {
  double r = (f(x) - y).norm();
  for (int it = 0; it < 100 && r > target; ++it) {
    const double h = 1e-7 * std::max(1.0, x.norm());
    Eigen::Matrix2d j;
    j.col(0) = (f(x + Point2(h, 0)) - f(x - Point2(h, 0))) / (2 * h);
    j.col(1) = (f(x + Point2(0, h)) - f(x - Point2(0, h))) / (2 * h);
    if (!(std::abs(j.determinant()) > 1e-14)) break;
    const Point2 step = j.partialPivLu().solve(y - f(x));
    double t = 1.0;
    bool moved = false;
    while (t > 1e-6) {
      const Point2 cand = x + t * step;
      const double rc = (f(cand) - y).norm();
      if (rc < r) {
        x = cand;
        r = rc;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    if (!moved) break;
  }
  return {x, r};
}

}  // namespace planar_detail

inline SurjectivityReport surjectivity_probe_planar(const PlanarMap& f, const Point2& y,
                                                   const SurjectivityConfig& config = {}) {
  using namespace planar_detail;
  SurjectivityReport rep;
  rep.target = y;
  rep.epsilon_hat = eps_isometry_defect_planar(f, config.defect_radius, config.defect_samples, config.seed);

  // R > |y - f(0)| + C + eps with C measured on the disk of radius R, doubled.
  const double offset = (y - f(Point2::Zero())).norm();
  double r = std::max(1.0, 2.0 * (offset + rep.epsilon_hat));
  Fit fit = fit_on_disk(f, r);
  for (rep.radius_iterations = 1; rep.radius_iterations < config.max_radius_iterations; ++rep.radius_iterations) {
    const double next = 2.0 * (offset + fit.error + rep.epsilon_hat);
    if (next <= r) break;
    r = next;
    fit = fit_on_disk(f, r);
  }
  rep.radius = r;
  rep.affine_fit = fit.motion;
  rep.fit_error = fit.error;

  Closest closest;
  auto circle = [](double rad) {
    return [rad](double s) { return Point2(rad * std::cos(s), rad * std::sin(s)); };
  };
  auto found = [&](const Point2& x, double res) {
    if (res <= config.root_tol && res < rep.residual) {
      rep.preimage_found = true;
      rep.preimage = x;
      rep.residual = res;
    }
  };

  for (double scale : {1.0, 1.5, 2.0, 3.0}) {
    try {
      const auto w = trace(circle(scale * r), f, y, closest, config.winding_budget);
      rep.degrees.push_back({scale * r, w.winding, w.min_norm, w.samples.size()});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CurveHitsOrigin) throw;
      found(closest.x, closest.residual);
    }
  }
  {
    const PlanarMap u = [&](const Point2& x) -> Point2 { return apply(fit.motion, x); };
    Closest ignored;
    rep.fitted_winding = trace(circle(r), u, y, ignored, config.winding_budget).winding;
  }

  // h(x, t) = (1 - t)(f(x) - y) + t(U(x) - y) on the radius-R circle.
  rep.homotopy_min = std::numeric_limits<double>::infinity();
  Point2 homotopy_argmin = Point2::Zero();
  for (int i = 0; i < 720; ++i) {
    const double a = 2.0 * kPi * i / 720;
    const Point2 x(r * std::cos(a), r * std::sin(a));
    const Point2 fx = f(x) - y, ux = apply(fit.motion, x) - y;
    for (int k = 0; k <= 10; ++k) {
      const double t = 0.1 * k;
      const double v = ((1 - t) * fx + t * ux).norm();
      if (v < rep.homotopy_min) {
        rep.homotopy_min = v;
        homotopy_argmin = x;
      }
    }
  }

  // Root search: Newton from the affine preimage, then winding bisection.
  const Point2 start = Point2(fit.motion.inverse().apply(Vector(y)));
  const double newton_target = 1e-3 * config.root_tol;
  auto nr = newton(f, y, start, newton_target);
  found(nr.x, nr.residual);

  if (!rep.preimage_found) {
    // Off-center splits keep subdivision lines away from symmetric points.
    constexpr double split = 0.5 + 0.0137;
    Rect rect{Point2(-r, -r), Point2(r, r)};
    int winding = 0;
    std::optional<ViolationWitness> jump;
    try {
      winding = trace([&](double s) { return rect.at(s); }, f, y, closest, config.winding_budget).winding;
      const double min_side = 1e-10 * std::max(1.0, r);
      while (winding != 0 && rect.side() > min_side && !rep.preimage_found) {
        const Point2 mid = rect.lo + split * (rect.hi - rect.lo);
        const Rect kids[4] = {{rect.lo, mid},
                              {Point2(mid.x(), rect.lo.y()), Point2(rect.hi.x(), mid.y())},
                              {mid, rect.hi},
                              {Point2(rect.lo.x(), mid.y()), Point2(mid.x(), rect.hi.y())}};
        bool descended = false;
        for (const auto& kid : kids) {
          Closest local;
          int w = 0;
          try {
            w = trace([&](double s) { return kid.at(s); }, f, y, local, config.winding_budget).winding;
          } catch (const Error& e) {
            if (e.kind() != ErrorKind::CurveHitsOrigin) throw;
            found(local.x, local.residual);
            break;
          }
          if (w != 0) {
            rect = kid;
            winding = w;
            descended = true;
            break;
          }
        }
        if (!descended) break;
      }
      if (!rep.preimage_found && winding != 0) {
        nr = newton(f, y, rect.center(), newton_target);
        found(nr.x, nr.residual);
      }
      if (!rep.preimage_found && winding != 0 && rect.side() <= min_side) {
        Closest edge;
        const auto w = trace([&](double s) { return rect.at(s); }, f, y, edge, config.winding_budget);
        double spread = 0.0;
        for (const auto& a : w.samples)
          for (const auto& b : w.samples) spread = std::max(spread, (a.value - b.value).norm());
        jump = ViolationWitness{"continuity", rect.center(), rect.side(), w.min_norm, spread,
                                "winding " + std::to_string(winding) + " around a square of side " +
                                    std::to_string(rect.side()) + " with |f - y| >= " + std::to_string(w.min_norm) +
                                    " on its boundary: f jumps there, so it is not a continuous eps-isometry at "
                                    "scale R = " + std::to_string(r)};
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CurveHitsOrigin) throw;
      found(closest.x, closest.residual);
    }
    if (!rep.preimage_found) rep.witness = jump;
  }

  const bool degrees_agree =
      !rep.degrees.empty() && std::abs(rep.fitted_winding) == 1 &&
      std::all_of(rep.degrees.begin(), rep.degrees.end(), [&](const auto& d) { return d.winding == rep.fitted_winding; });
  if (rep.preimage_found) {
    rep.verdict = degrees_agree ? SurjectivityVerdict::SurjectiveEvidence : SurjectivityVerdict::Inconclusive;
  } else if (rep.witness) {
    rep.verdict = SurjectivityVerdict::Violation;
  } else if (!rep.degrees.empty() && rep.degrees.front().winding != rep.fitted_winding) {
    rep.verdict = SurjectivityVerdict::Violation;
    rep.witness = ViolationWitness{"epsilon-bound", homotopy_argmin, r, rep.homotopy_min, rep.fit_error,
                                   "the straight homotopy from f - y to U - y vanishes on the circle of radius R = " +
                                       std::to_string(r) + ", so |f - U| < R - |U^-1(y)| fails there"};
  } else {
    rep.verdict = SurjectivityVerdict::Inconclusive;
  }
  return rep;
}

}  // namespace ballbody
