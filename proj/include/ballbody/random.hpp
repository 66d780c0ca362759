#pragma once

// Seeded generators of bodies and rigid motions for property checks.

#include <cstdint>
#include <random>
#include <vector>

#include "ballbody/body.hpp"
#include "ballbody/geometry.hpp"

namespace ballbody {

class BodyFactory {
 public:
  BodyFactory(int dim, std::uint64_t seed) : dim_(dim), rng_(seed) {}

  int dim() const { return dim_; }
  std::mt19937_64& rng() { return rng_; }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  Vector uniform_vector(double lo, double hi) {
    Vector v(dim_);
    for (int i = 0; i < dim_; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Vector unit_vector() {
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(dim_);
    do {
      for (int i = 0; i < dim_; ++i) v[i] = g(rng_);
    } while (v.norm() < 1e-9);
    return v.normalized();
  }

  /// Uniform point in the ball of the given radius about the origin.
  Vector in_ball(double radius) {
    const double r = radius * std::pow(uniform(0.0, 1.0), 1.0 / dim_);
    return r * unit_vector();
  }

  /// Haar-random orthogonal matrix; determinant -1 when `reflect`.
  Matrix orthogonal(bool reflect) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix a(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) a(i, j) = g(rng_);
    Eigen::HouseholderQR<Matrix> qr(a);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim_; ++i) {
      if (r(i, i) < 0) q.col(i) *= -1.0;
    }
    if ((q.determinant() < 0) != reflect) q.col(0) *= -1.0;
    return q;
  }

  RigidMotion motion(double translation_scale = 1.5) {
    const bool reflect = uniform(0.0, 1.0) < 0.5;
    return {orthogonal(reflect), uniform_vector(-translation_scale, translation_scale)};
  }

  /// Intersection of 2..5 unit balls whose centers lie within `max_spread`
  /// of a random point in [-offset, offset]^n.
  BallBodyExpr generator_body(int min_centers = 2, int max_centers = 5, double min_spread = 0.2,
                              double max_spread = 0.9, double offset = 1.0) {
    const Vector anchor = uniform_vector(-offset, offset);
    const double spread = uniform(min_spread, max_spread);
    const int count = integer(min_centers, max_centers);
    std::vector<Vector> centers;
    for (int i = 0; i < count; ++i) centers.push_back(anchor + in_ball(spread));
    return BallBodyExpr::generators(std::move(centers));
  }

  /// Random expression: generator leaves wrapped by c-duals, Minkowski
  /// averages and rigid motions up to the given depth.
  BallBodyExpr body(int depth = 2) {
    if (depth <= 0 || uniform(0.0, 1.0) < 0.3) return generator_body();
    switch (integer(0, 2)) {
      case 0: return BallBodyExpr::cdual(body(depth - 1));
      case 1: {
        const double lambda = uniform(0.0, 1.0);
        auto a = body(depth - 1);
        auto b = body(depth - 1);
        return BallBodyExpr::combine(lambda, a, b);
      }
      default: {
        auto g = motion(1.0);
        return BallBodyExpr::motion(std::move(g), body(depth - 1));
      }
    }
  }

 private:
  int dim_;
  std::mt19937_64 rng_;
};

}  // namespace ballbody
