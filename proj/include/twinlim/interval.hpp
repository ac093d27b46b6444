#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twinlim/rational.hpp"

namespace twinlim {

/// Interval of the real line with independently open or closed ends.
struct Interval {
  Rational lo;
  Rational hi;
  bool lo_closed = false;
  bool hi_closed = false;

  static Interval open(Rational a, Rational b) { return {std::move(a), std::move(b), false, false}; }
  static Interval closed(Rational a, Rational b) { return {std::move(a), std::move(b), true, true}; }
  static Interval point(const Rational& a) { return {a, a, true, true}; }

  bool empty() const;
  bool contains(const Rational& x) const;
  bool contains(const Interval& other) const;
  Rational length() const { return hi - lo; }

  bool operator==(const Interval& o) const {
    return lo == o.lo && hi == o.hi && lo_closed == o.lo_closed && hi_closed == o.hi_closed;
  }
};

/// Strict weak order on where intervals start: earlier value first, closed
/// before open at the same value.
bool starts_before(const Interval& a, const Interval& b);
/// a's right end lies at or beyond b's right end.
bool ends_after_or_with(const Interval& a, const Interval& b);

std::optional<Interval> intersect(const Interval& a, const Interval& b);
bool intersects(const Interval& a, const Interval& b);

/// Finite union of intervals kept sorted, pairwise disjoint and maximal.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  explicit IntervalUnion(Interval i);
  explicit IntervalUnion(std::vector<Interval> parts);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(const Rational& x) const;

  Rational diam() const;  // throws StructuralError when empty
  Rational inf() const;
  Rational sup() const;

  IntervalUnion closure() const;
  /// Points within distance < eps of the set, together with the set itself,
  /// clipped to [lo, hi].
  IntervalUnion fatten(const Rational& eps, const Rational& lo, const Rational& hi) const;

  bool operator==(const IntervalUnion&) const = default;

 private:
  void normalize();
  std::vector<Interval> parts_;
};

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b);
IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b);
bool intersects(const IntervalUnion& a, const IntervalUnion& b);
/// a is a subset of b
bool subset(const IntervalUnion& a, const IntervalUnion& b);

std::string to_string(const Interval& i);
std::string to_string(const IntervalUnion& u);

}  // namespace twinlim
