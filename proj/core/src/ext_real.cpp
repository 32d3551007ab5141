#include "hamrep/ext_real.hpp"

#include <cmath>

#include "hamrep/error.hpp"

namespace hamrep {

ExtReal::ExtReal(double v) : v_(v) {
  if (std::isnan(v)) throw InputError("NaN is not an extended real");
  if (v == -std::numeric_limits<double>::infinity()) throw InputError("-inf is not allowed: functions are proper");
}

double ExtReal::value() const {
  if (is_infinite()) throw InputError("value() of +inf");
  return v_;
}

ExtReal operator+(ExtReal a, double b) { return a + ExtReal(b); }

ExtReal operator-(ExtReal a, double b) {
  if (a.is_infinite()) return a;
  return ExtReal(a.v_ - b);
}

ExtReal operator*(double s, ExtReal a) {
  if (s < 0.0) throw InputError("negative multiple of an extended real");
  if (a.is_infinite()) return s == 0.0 ? ExtReal(0.0) : a;
  return ExtReal(s * a.v_);
}

}  // namespace hamrep
