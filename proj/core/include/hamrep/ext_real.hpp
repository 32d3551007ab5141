#pragma once

#include <compare>
#include <limits>

namespace hamrep {

/// A value in R union {+inf}. There is no -inf: every function carried by
/// this type is proper. Subtracting one ExtReal from another is not defined.
class ExtReal {
 public:
  constexpr ExtReal() = default;
  /// Finite value or +inf. NaN and -inf throw InputError.
  ExtReal(double v);  // NOLINT(google-explicit-constructor)

  static constexpr ExtReal infinity() { return ExtReal(Raw{}, std::numeric_limits<double>::infinity()); }

  bool is_finite() const { return v_ != std::numeric_limits<double>::infinity(); }
  bool is_infinite() const { return !is_finite(); }
  /// The finite value; throws InputError on +inf.
  double value() const;
  /// The value as a double, with +inf mapped to the IEEE infinity.
  double raw() const { return v_; }

  friend ExtReal operator+(ExtReal a, ExtReal b) { return ExtReal(Raw{}, a.v_ + b.v_); }
  friend ExtReal operator+(ExtReal a, double b);
  friend ExtReal operator-(ExtReal a, double b);
  friend ExtReal operator-(ExtReal a, ExtReal b) = delete;
  friend ExtReal operator*(double s, ExtReal a);

  friend bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend auto operator<=>(ExtReal a, ExtReal b) { return a.v_ <=> b.v_; }

 private:
  struct Raw {};
  constexpr ExtReal(Raw, double v) : v_(v) {}
  double v_ = 0.0;
};

}  // namespace hamrep
