#include "spr/point_set.hpp"

#include <cassert>

#include "spr/errors.hpp"

namespace spr {

PointSet::PointSet(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw InvalidArgument("point dimension must be positive");
}

PointSet::PointSet(int dimension, std::vector<double> coords)
    : dimension_(dimension), coords_(std::move(coords)) {
  if (dimension < 1) throw InvalidArgument("point dimension must be positive");
  if (coords_.size() % static_cast<std::size_t>(dimension) != 0)
    throw InvalidArgument("coordinate count is not a multiple of the dimension");
}

PointSet PointSet::FromScalars(std::vector<double> values) {
  return PointSet(1, std::move(values));
}

void PointSet::push_back(ConstPoint p) {
  if (p.size() != static_cast<std::size_t>(dimension_))
    throw InvalidArgument("point has the wrong dimension");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

void PointSet::erase(std::size_t i) {
  assert(i < size());
  auto first = coords_.begin() + static_cast<std::ptrdiff_t>(i * dimension_);
  coords_.erase(first, first + dimension_);
}

double PointSet::squared_norm(std::size_t i) const { return spr::squared_norm((*this)[i]); }

void PointSet::translate(ConstPoint shift) {
  assert(shift.size() == static_cast<std::size_t>(dimension_));
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += shift[i % dimension_];
}

void PointSet::negate() {
  for (double& c : coords_) c = -c;
}

double squared_distance(ConstPoint a, ConstPoint b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double squared_norm(ConstPoint a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

}  // namespace spr
