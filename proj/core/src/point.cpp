#include "hamrep/point.hpp"

#include "hamrep/error.hpp"

namespace hamrep {

void throw_bad_point_dimension() { throw InputError("point dimension must be 1, 2 or 3"); }

Point Point::from_span(std::span<const double> coords) {
  Point p(static_cast<int>(coords.size()));
  for (std::size_t i = 0; i < coords.size(); ++i) p.c_[i] = coords[i];
  return p;
}

}  // namespace hamrep
