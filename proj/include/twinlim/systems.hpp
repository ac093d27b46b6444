#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "twinlim/errors.hpp"
#include "twinlim/interval.hpp"
#include "twinlim/rational.hpp"

namespace twinlim {

using IndexLists = std::vector<std::vector<std::uint32_t>>;

// ---------------------------------------------------------------- finite

/// Subset of a finite space, as sorted point indices.
struct PointSet {
  std::vector<std::uint32_t> points;

  bool empty() const { return points.empty(); }
  bool operator==(const PointSet&) const = default;
  auto operator<=>(const PointSet&) const = default;
};

/// Finite metric space with a self-map. Every subset is clopen.
class FiniteSystem {
 public:
  using Set = PointSet;

  FiniteSystem(std::vector<std::string> names, std::vector<std::vector<Rational>> metric, std::vector<std::uint32_t> map);
  /// Discrete metric (all distances 1).
  static FiniteSystem discrete(std::vector<std::uint32_t> map);

  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<Rational>>& metric() const { return metric_; }
  const std::vector<std::uint32_t>& map() const { return map_; }
  std::uint32_t apply(std::uint32_t p) const { return map_[p]; }

  Set whole() const;
  Set singleton(std::uint32_t p) const { return Set{{p}}; }
  Set image(const Set& u) const;
  Set fatten(const Set& u, const Rational& eps) const;
  Set closure(const Set& u) const { return u; }
  Set unite(const Set& a, const Set& b) const;
  Set intersect(const Set& a, const Set& b) const;
  bool intersects(const Set& a, const Set& b) const;
  bool subset(const Set& a, const Set& b) const;
  Rational diam(const Set& u) const;

  /// Candidate cover one level finer than `parents`: singletons.
  std::vector<Set> refine(const std::vector<Set>& parents, unsigned granularity) const;
  unsigned initial_granularity(std::size_t level, unsigned previous) const;
  unsigned next_granularity(unsigned g, unsigned) const { return g + 1; }
  unsigned max_granularity() const { return 1; }

  IndexLists meets(const std::vector<Set>& a, const std::vector<Set>& b) const;
  IndexLists contained_in(const std::vector<Set>& inner, const std::vector<Set>& outer) const;

  std::string describe(const Set& u) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<Rational>> metric_;
  std::vector<std::uint32_t> map_;
};

// ---------------------------------------------------------------- PL interval map

/// Continuous piecewise-linear self-map of [0,1] with rational breakpoints.
class PLIntervalMap {
 public:
  using Set = IntervalUnion;

  PLIntervalMap(std::vector<Rational> breakpoints, std::vector<Rational> values);
  static PLIntervalMap tent();

  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<Rational>& values() const { return values_; }
  Rational eval(const Rational& x) const;
  /// Largest absolute slope.
  Rational lipschitz() const;

  Set whole() const;
  Set image(const Interval& i) const;
  Set image(const Set& u) const;
  Set fatten(const Set& u, const Rational& eps) const;
  Set closure(const Set& u) const { return u.closure(); }
  Set unite(const Set& a, const Set& b) const { return twinlim::unite(a, b); }
  Set intersect(const Set& a, const Set& b) const { return twinlim::intersect(a, b); }
  bool intersects(const Set& a, const Set& b) const { return twinlim::intersects(a, b); }
  bool subset(const Set& a, const Set& b) const { return twinlim::subset(a, b); }
  Rational diam(const Set& u) const { return u.diam(); }

  /// Overlapping open pieces on a grid of about `granularity` cells per unit
  /// length that also contains every parent endpoint, so each parent is
  /// exactly the union of the pieces inside it.
  std::vector<Set> refine(const std::vector<Set>& parents, unsigned granularity) const;
  unsigned initial_granularity(std::size_t, unsigned previous) const { return 2 * std::max(previous, 1u); }
  unsigned next_granularity(unsigned g, unsigned previous) const { return g + std::max(previous, 1u); }
  unsigned max_granularity() const { return 1u << 24; }

  IndexLists meets(const std::vector<Set>& a, const std::vector<Set>& b) const;
  IndexLists contained_in(const std::vector<Set>& inner, const std::vector<Set>& outer) const;

  std::string describe(const Set& u) const { return to_string(u); }

 private:
  std::size_t segment(const Rational& x) const;
  std::vector<Rational> breaks_;
  std::vector<Rational> values_;
};

// ---------------------------------------------------------------- shift

/// Finite union of cylinders C(w) anchored at position 0. Words are strings
/// of symbol indices. Kept canonical: no word has a proper prefix in the set
/// and no complete family of one-symbol extensions remains unmerged.
struct CylinderSet {
  std::vector<std::string> words;

  bool empty() const { return words.empty(); }
  bool operator==(const CylinderSet&) const = default;
};

/// One-sided subshift of finite type given by allowed two-symbol words,
/// with d(x,y) = 2^{-k}, k the first index where x and y differ.
class ShiftSystem {
 public:
  using Set = CylinderSet;

  /// Symbols are single characters. allowed[a][b] permits "ab".
  ShiftSystem(std::vector<char> alphabet, std::vector<std::vector<bool>> allowed);
  static ShiftSystem full(std::size_t symbols);
  static ShiftSystem golden_mean();

  std::size_t symbols() const { return alphabet_.size(); }
  const std::vector<char>& alphabet() const { return alphabet_; }
  const std::vector<std::vector<bool>>& allowed() const { return allowed_; }
  bool is_full() const;
  bool allowed_word(const std::string& w) const;
  /// All allowed words of length n, in lexicographic order.
  std::vector<std::string> words(std::size_t n) const;
  /// Symbols with some predecessor, so that the shift is onto.
  bool surjective() const;

  Set whole() const { return Set{{""}}; }
  Set cylinder(const std::string& w) const;
  Set image(const Set& u) const;
  Set fatten(const Set& u, const Rational& eps) const;
  Set closure(const Set& u) const { return u; }
  Set unite(const Set& a, const Set& b) const;
  Set intersect(const Set& a, const Set& b) const;
  bool intersects(const Set& a, const Set& b) const;
  bool subset(const Set& a, const Set& b) const;
  Rational diam(const Set& u) const;

  /// The partition into allowed words of length `granularity`.
  std::vector<Set> refine(const std::vector<Set>& parents, unsigned granularity) const;
  unsigned initial_granularity(std::size_t level, unsigned previous) const;
  unsigned next_granularity(unsigned g, unsigned) const { return g + 1; }
  unsigned max_granularity() const { return 24; }

  IndexLists meets(const std::vector<Set>& a, const std::vector<Set>& b) const;
  IndexLists contained_in(const std::vector<Set>& inner, const std::vector<Set>& outer) const;

  /// Symbol string of a word, e.g. "01".
  std::string spell(const std::string& w) const;
  /// Inverse of spell; throws ParseError on unknown symbols.
  std::string parse_word(const std::string& spelled) const;
  std::string describe(const Set& u) const;

 private:
  Set canonical(std::vector<std::string> words) const;
  /// Index at which two points of C(w) can first differ, or none.
  std::optional<std::size_t> branch_index(const std::string& w) const;

  std::vector<char> alphabet_;
  std::vector<std::vector<bool>> allowed_;
  std::vector<std::vector<char>> followers_;
};

// ---------------------------------------------------------------- covers

template <class Set>
struct Cover {
  std::vector<Set> elements;
};

template <class Backend>
Rational mesh(const Backend& b, const std::vector<typename Backend::Set>& cover) {
  Rational m = 0;
  for (const auto& u : cover) {
    Rational d = b.diam(u);
    if (d > m) m = d;
  }
  return m;
}

template <class Backend>
bool covers_space(const Backend& b, const std::vector<typename Backend::Set>& cover) {
  typename Backend::Set all;
  for (const auto& u : cover) all = b.unite(all, u);
  return all == b.whole();
}

/// Certified positive lower bound on the Lebesgue number of an open cover.
/// Throws StructuralError if the family does not cover the space.
Rational lebesgue_lower_bound(const FiniteSystem& b, const std::vector<PointSet>& cover);
Rational lebesgue_lower_bound(const PLIntervalMap& b, const std::vector<IntervalUnion>& cover);
Rational lebesgue_lower_bound(const ShiftSystem& b, const std::vector<CylinderSet>& cover);

// ---------------------------------------------------------------- specs

using System = std::variant<FiniteSystem, PLIntervalMap, ShiftSystem>;

/// Parses the key = value system-spec format. Throws ParseError with a line number.
System parse_system_spec(const std::string& text);
System load_system_spec(const std::string& path);
std::string format_system_spec(const System& s);
std::string_view backend_name(const System& s);

}  // namespace twinlim
