#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace spr {

using ConstPoint = std::span<const double>;
using MutablePoint = std::span<double>;

// A sequence of points of a common dimension, stored contiguously.
class PointSet {
 public:
  explicit PointSet(int dimension = 1);
  PointSet(int dimension, std::vector<double> coords);

  // One-dimensional convenience constructor.
  static PointSet FromScalars(std::vector<double> values);

  int dimension() const { return dimension_; }
  std::size_t size() const { return coords_.size() / static_cast<std::size_t>(dimension_); }
  bool empty() const { return coords_.empty(); }

  ConstPoint operator[](std::size_t i) const {
    return {coords_.data() + i * dimension_, static_cast<std::size_t>(dimension_)};
  }
  MutablePoint operator[](std::size_t i) {
    return {coords_.data() + i * dimension_, static_cast<std::size_t>(dimension_)};
  }

  void push_back(ConstPoint p);
  void erase(std::size_t i);
  void reserve(std::size_t n) { coords_.reserve(n * dimension_); }

  const std::vector<double>& coords() const { return coords_; }
  std::vector<double>& coords() { return coords_; }

  double squared_norm(std::size_t i) const;

  // Translates every point by `shift`.
  void translate(ConstPoint shift);
  // Replaces every point p by -p.
  void negate();

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  int dimension_;
  std::vector<double> coords_;
};

double squared_distance(ConstPoint a, ConstPoint b);
double squared_norm(ConstPoint a);

}  // namespace spr
