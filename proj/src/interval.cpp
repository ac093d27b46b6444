#include "twinlim/interval.hpp"

#include <algorithm>

#include "twinlim/errors.hpp"

namespace twinlim {

bool Interval::empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }

bool Interval::contains(const Rational& x) const {
  if (x < lo || x > hi) return false;
  if (x == lo && !lo_closed) return false;
  if (x == hi && !hi_closed) return false;
  return true;
}

bool Interval::contains(const Interval& o) const {
  if (o.empty()) return true;
  return !starts_before(o, *this) && ends_after_or_with(*this, o);
}

bool starts_before(const Interval& a, const Interval& b) {
  if (a.lo != b.lo) return a.lo < b.lo;
  return a.lo_closed && !b.lo_closed;
}

bool ends_after_or_with(const Interval& a, const Interval& b) {
  if (a.hi != b.hi) return a.hi > b.hi;
  return a.hi_closed || !b.hi_closed;
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
  Interval r;
  if (a.lo > b.lo) {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed;
  } else if (b.lo > a.lo) {
    r.lo = b.lo;
    r.lo_closed = b.lo_closed;
  } else {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed && b.lo_closed;
  }
  if (a.hi < b.hi) {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed;
  } else if (b.hi < a.hi) {
    r.hi = b.hi;
    r.hi_closed = b.hi_closed;
  } else {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed && b.hi_closed;
  }
  if (r.empty()) return std::nullopt;
  return r;
}

bool intersects(const Interval& a, const Interval& b) {
  if (a.empty() || b.empty()) return false;
  // nonempty intersection iff each starts before the other ends
  auto before_end = [](const Interval& s, const Interval& e) {
    if (s.lo != e.hi) return s.lo < e.hi;
    return s.lo_closed && e.hi_closed;
  };
  return before_end(a, b) && before_end(b, a);
}

IntervalUnion::IntervalUnion(Interval i) {
  if (!i.empty()) parts_.push_back(std::move(i));
}

IntervalUnion::IntervalUnion(std::vector<Interval> parts) : parts_(std::move(parts)) { normalize(); }

void IntervalUnion::normalize() {
  std::erase_if(parts_, [](const Interval& i) { return i.empty(); });
  std::sort(parts_.begin(), parts_.end(), starts_before);
  std::vector<Interval> merged;
  for (auto& p : parts_) {
    if (!merged.empty()) {
      Interval& cur = merged.back();
      bool touches = p.lo < cur.hi || (p.lo == cur.hi && (cur.hi_closed || p.lo_closed));
      if (touches) {
        if (p.hi > cur.hi) {
          cur.hi = p.hi;
          cur.hi_closed = p.hi_closed;
        } else if (p.hi == cur.hi) {
          cur.hi_closed = cur.hi_closed || p.hi_closed;
        }
        continue;
      }
    }
    merged.push_back(std::move(p));
  }
  parts_ = std::move(merged);
}

bool IntervalUnion::contains(const Rational& x) const {
  return std::any_of(parts_.begin(), parts_.end(), [&](const Interval& i) { return i.contains(x); });
}

Rational IntervalUnion::inf() const {
  if (parts_.empty()) throw StructuralError("empty interval union has no infimum");
  return parts_.front().lo;
}

Rational IntervalUnion::sup() const {
  if (parts_.empty()) throw StructuralError("empty interval union has no supremum");
  return parts_.back().hi;
}

Rational IntervalUnion::diam() const {
  if (parts_.empty()) throw StructuralError("diameter of the empty set");
  return parts_.back().hi - parts_.front().lo;
}

IntervalUnion IntervalUnion::closure() const {
  std::vector<Interval> out;
  out.reserve(parts_.size());
  for (const auto& p : parts_) out.push_back(Interval::closed(p.lo, p.hi));
  return IntervalUnion(std::move(out));
}

IntervalUnion IntervalUnion::fatten(const Rational& eps, const Rational& lo, const Rational& hi) const {
  if (eps < 0) throw StructuralError("negative fattening radius");
  if (eps == 0) return *this;
  std::vector<Interval> out;
  out.reserve(parts_.size());
  for (const auto& p : parts_) {
    Interval f = Interval::open(p.lo - eps, p.hi + eps);
    if (f.lo < lo) {
      f.lo = lo;
      f.lo_closed = true;
    }
    if (f.hi > hi) {
      f.hi = hi;
      f.hi_closed = true;
    }
    out.push_back(std::move(f));
  }
  return IntervalUnion(std::move(out));
}

IntervalUnion unite(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> all = a.parts();
  all.insert(all.end(), b.parts().begin(), b.parts().end());
  return IntervalUnion(std::move(all));
}

IntervalUnion intersect(const IntervalUnion& a, const IntervalUnion& b) {
  std::vector<Interval> out;
  for (const auto& x : a.parts())
    for (const auto& y : b.parts())
      if (auto z = intersect(x, y)) out.push_back(std::move(*z));
  return IntervalUnion(std::move(out));
}

bool intersects(const IntervalUnion& a, const IntervalUnion& b) {
  std::size_t i = 0, j = 0;
  const auto& pa = a.parts();
  const auto& pb = b.parts();
  while (i < pa.size() && j < pb.size()) {
    if (intersects(pa[i], pb[j])) return true;
    // advance whichever ends first
    if (ends_after_or_with(pa[i], pb[j])) ++j;
    else ++i;
  }
  return false;
}

bool subset(const IntervalUnion& a, const IntervalUnion& b) {
  // b is maximal, so each part of a must sit inside a single part of b
  std::size_t j = 0;
  const auto& pb = b.parts();
  for (const auto& x : a.parts()) {
    while (j < pb.size() && !ends_after_or_with(pb[j], x)) ++j;
    if (j == pb.size() || !pb[j].contains(x)) return false;
  }
  return true;
}

std::string to_string(const Interval& i) {
  return std::string(i.lo_closed ? "[" : "(") + to_string(i.lo) + ", " + to_string(i.hi) + (i.hi_closed ? "]" : ")");
}

std::string to_string(const IntervalUnion& u) {
  if (u.empty()) return "{}";
  std::string s;
  for (const auto& p : u.parts()) {
    if (!s.empty()) s += " u ";
    s += to_string(p);
  }
  return s;
}

}  // namespace twinlim
