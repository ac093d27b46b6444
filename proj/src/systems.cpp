#include "twinlim/systems.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace twinlim {

namespace {

IndexLists brute_force_meets(const auto& backend, const auto& a, const auto& b) {
  IndexLists out(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i)
    for (std::uint32_t j = 0; j < b.size(); ++j)
      if (backend.intersects(a[i], b[j])) out[i].push_back(j);
  return out;
}

IndexLists brute_force_contained(const auto& backend, const auto& inner, const auto& outer) {
  IndexLists out(inner.size());
  for (std::uint32_t i = 0; i < inner.size(); ++i)
    for (std::uint32_t j = 0; j < outer.size(); ++j)
      if (backend.subset(inner[i], outer[j])) out[i].push_back(j);
  return out;
}

}  // namespace

// ================================================================ finite

FiniteSystem::FiniteSystem(std::vector<std::string> names, std::vector<std::vector<Rational>> metric,
                           std::vector<std::uint32_t> map)
    : names_(std::move(names)), metric_(std::move(metric)), map_(std::move(map)) {
  const std::size_t n = names_.size();
  if (n == 0) throw StructuralError("finite system needs at least one point");
  if (map_.size() != n) throw StructuralError("finite system map is not total");
  for (auto p : map_)
    if (p >= n) throw StructuralError("finite system map leaves the space");
  if (metric_.size() != n) throw StructuralError("metric matrix has wrong size");
  for (const auto& row : metric_)
    if (row.size() != n) throw StructuralError("metric matrix has wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    if (metric_[i][i] != 0) throw StructuralError("metric has nonzero diagonal at " + names_[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (metric_[i][j] != metric_[j][i]) throw StructuralError("metric is not symmetric");
      if (i != j && metric_[i][j] <= 0) throw StructuralError("metric is not positive off the diagonal");
      for (std::size_t k = 0; k < n; ++k)
        if (metric_[i][k] > metric_[i][j] + metric_[j][k])
          throw StructuralError("metric violates the triangle inequality at " + names_[i] + "," + names_[j] + "," +
                                names_[k]);
    }
  }
}

FiniteSystem FiniteSystem::discrete(std::vector<std::uint32_t> map) {
  const std::size_t n = map.size();
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "p" + std::to_string(i);
  std::vector<std::vector<Rational>> metric(n, std::vector<Rational>(n, Rational(1)));
  for (std::size_t i = 0; i < n; ++i) metric[i][i] = 0;
  return FiniteSystem(std::move(names), std::move(metric), std::move(map));
}

PointSet FiniteSystem::whole() const {
  PointSet s;
  for (std::uint32_t p = 0; p < size(); ++p) s.points.push_back(p);
  return s;
}

PointSet FiniteSystem::image(const PointSet& u) const {
  PointSet s;
  for (auto p : u.points) s.points.push_back(map_[p]);
  std::sort(s.points.begin(), s.points.end());
  s.points.erase(std::unique(s.points.begin(), s.points.end()), s.points.end());
  return s;
}

PointSet FiniteSystem::fatten(const PointSet& u, const Rational& eps) const {
  if (eps < 0) throw StructuralError("negative fattening radius");
  PointSet s;
  for (std::uint32_t x = 0; x < size(); ++x) {
    bool near = false;
    for (auto p : u.points)
      if (p == x || metric_[x][p] < eps) {
        near = true;
        break;
      }
    if (near) s.points.push_back(x);
  }
  return s;
}

PointSet FiniteSystem::unite(const PointSet& a, const PointSet& b) const {
  PointSet s;
  std::set_union(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(), std::back_inserter(s.points));
  return s;
}

PointSet FiniteSystem::intersect(const PointSet& a, const PointSet& b) const {
  PointSet s;
  std::set_intersection(a.points.begin(), a.points.end(), b.points.begin(), b.points.end(),
                        std::back_inserter(s.points));
  return s;
}

bool FiniteSystem::intersects(const PointSet& a, const PointSet& b) const { return !intersect(a, b).empty(); }

bool FiniteSystem::subset(const PointSet& a, const PointSet& b) const {
  return std::includes(b.points.begin(), b.points.end(), a.points.begin(), a.points.end());
}

Rational FiniteSystem::diam(const PointSet& u) const {
  if (u.empty()) throw StructuralError("diameter of the empty set");
  Rational d = 0;
  for (auto p : u.points)
    for (auto q : u.points)
      if (metric_[p][q] > d) d = metric_[p][q];
  return d;
}

std::vector<PointSet> FiniteSystem::refine(const std::vector<PointSet>& parents, unsigned) const {
  std::vector<PointSet> out;
  PointSet all;
  for (const auto& p : parents) all = unite(all, p);
  for (auto p : all.points) out.push_back(singleton(p));
  return out;
}

unsigned FiniteSystem::initial_granularity(std::size_t, unsigned) const { return 1; }

IndexLists FiniteSystem::meets(const std::vector<PointSet>& a, const std::vector<PointSet>& b) const {
  return brute_force_meets(*this, a, b);
}

IndexLists FiniteSystem::contained_in(const std::vector<PointSet>& inner, const std::vector<PointSet>& outer) const {
  return brute_force_contained(*this, inner, outer);
}

std::string FiniteSystem::describe(const PointSet& u) const {
  std::string s = "{";
  for (std::size_t i = 0; i < u.points.size(); ++i) s += (i ? "," : "") + names_[u.points[i]];
  return s + "}";
}

Rational lebesgue_lower_bound(const FiniteSystem& b, const std::vector<PointSet>& cover) {
  if (!covers_space(b, cover)) throw StructuralError("family does not cover the space");
  const std::size_t n = b.size();
  if (n > 20) throw StructuralError("exhaustive Lebesgue bound limited to 20 points");
  for (const auto& u : cover)
    if (u == b.whole()) {
      Rational d = b.diam(b.whole());
      return d == 0 ? Rational(1) : d;
    }
  // smallest diameter of a subset that fits in no element
  std::optional<Rational> best;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    PointSet s;
    for (std::uint32_t p = 0; p < n; ++p)
      if (mask & (1u << p)) s.points.push_back(p);
    bool fits = std::any_of(cover.begin(), cover.end(), [&](const PointSet& u) { return b.subset(s, u); });
    if (fits) continue;
    Rational d = b.diam(s);
    if (!best || d < *best) best = d;
  }
  return *best;
}

// ================================================================ PL interval map

PLIntervalMap::PLIntervalMap(std::vector<Rational> breakpoints, std::vector<Rational> values)
    : breaks_(std::move(breakpoints)), values_(std::move(values)) {
  if (breaks_.size() < 2) throw StructuralError("PL map needs at least two breakpoints");
  if (breaks_.size() != values_.size()) throw StructuralError("PL map needs one value per breakpoint");
  if (breaks_.front() != 0 || breaks_.back() != 1) throw StructuralError("PL breakpoints must start at 0 and end at 1");
  for (std::size_t i = 1; i < breaks_.size(); ++i)
    if (breaks_[i] <= breaks_[i - 1]) throw StructuralError("PL breakpoints must be strictly increasing");
  for (const auto& v : values_)
    if (v < 0 || v > 1) throw StructuralError("PL values must lie in [0,1]");
}

PLIntervalMap PLIntervalMap::tent() { return PLIntervalMap({0, Rational(1, 2), 1}, {0, 1, 0}); }

std::size_t PLIntervalMap::segment(const Rational& x) const {
  // index s with breaks_[s] <= x <= breaks_[s+1]
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  std::size_t s = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
  return std::min(s, breaks_.size() - 2);
}

Rational PLIntervalMap::eval(const Rational& x) const {
  if (x < 0 || x > 1) throw StructuralError("PL map evaluated outside [0,1]");
  std::size_t s = segment(x);
  const Rational& a = breaks_[s];
  const Rational& b = breaks_[s + 1];
  return values_[s] + (values_[s + 1] - values_[s]) * (x - a) / (b - a);
}

Rational PLIntervalMap::lipschitz() const {
  Rational l = 0;
  for (std::size_t s = 0; s + 1 < breaks_.size(); ++s) {
    Rational slope = abs(Rational((values_[s + 1] - values_[s]) / (breaks_[s + 1] - breaks_[s])));
    if (slope > l) l = slope;
  }
  return l;
}

IntervalUnion PLIntervalMap::whole() const { return IntervalUnion(Interval::closed(0, 1)); }

IntervalUnion PLIntervalMap::image(const Interval& i) const {
  if (i.empty()) return {};
  if (i.lo == i.hi) return IntervalUnion(Interval::point(eval(i.lo)));
  struct Candidate {
    Rational value;
    bool attained;
  };
  std::vector<Candidate> cs;
  cs.push_back({eval(i.lo), i.lo_closed});
  cs.push_back({eval(i.hi), i.hi_closed});
  for (const auto& b : breaks_)
    if (b > i.lo && b < i.hi) cs.push_back({eval(b), true});
  // An open end's value is still attained when the adjacent piece is flat;
  // the midpoint towards the next breakpoint catches exactly that case.
  if (!i.lo_closed) {
    Rational next = i.hi;
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), i.lo);
    if (it != breaks_.end() && *it < next) next = *it;
    cs.push_back({eval(Rational((i.lo + next) / 2)), true});
  }
  if (!i.hi_closed) {
    Rational prev = i.lo;
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), i.hi);
    if (it != breaks_.begin() && *std::prev(it) > prev) prev = *std::prev(it);
    cs.push_back({eval(Rational((prev + i.hi) / 2)), true});
  }
  Interval out;
  out.lo = cs.front().value;
  out.hi = cs.front().value;
  for (const auto& c : cs) {
    if (c.value < out.lo) out.lo = c.value;
    if (c.value > out.hi) out.hi = c.value;
  }
  out.lo_closed = std::any_of(cs.begin(), cs.end(), [&](const Candidate& c) { return c.attained && c.value == out.lo; });
  out.hi_closed = std::any_of(cs.begin(), cs.end(), [&](const Candidate& c) { return c.attained && c.value == out.hi; });
  return IntervalUnion(out);
}

IntervalUnion PLIntervalMap::image(const IntervalUnion& u) const {
  std::vector<Interval> parts;
  for (const auto& p : u.parts()) {
    auto im = image(p);
    parts.insert(parts.end(), im.parts().begin(), im.parts().end());
  }
  return IntervalUnion(std::move(parts));
}

IntervalUnion PLIntervalMap::fatten(const IntervalUnion& u, const Rational& eps) const { return u.fatten(eps, 0, 1); }

std::vector<IntervalUnion> PLIntervalMap::refine(const std::vector<IntervalUnion>& parents, unsigned granularity) const {
  if (granularity == 0) throw StructuralError("granularity must be positive");
  std::vector<Rational> cuts{0, 1};
  for (const auto& parent : parents)
    for (const auto& part : parent.parts()) {
      cuts.push_back(part.lo);
      cuts.push_back(part.hi);
    }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // grid: each gap between cut points split evenly into cells of length <= 1/granularity
  std::vector<Rational> grid;
  std::vector<bool> is_cut;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    Rational len = cuts[j + 1] - cuts[j];
    mpz_class q = len.get_num() * granularity;
    mpz_class cells = (q + len.get_den() - 1) / len.get_den();
    unsigned n = std::max(1ul, cells.get_ui());
    for (unsigned t = 0; t < n; ++t) {
      grid.push_back(cuts[j] + len * t / n);
      is_cut.push_back(t == 0);
    }
  }
  grid.push_back(1);
  is_cut.push_back(true);

  const std::size_t cells = grid.size() - 1;
  auto width = [&](std::size_t t) -> Rational { return grid[t + 1] - grid[t]; };
  std::vector<IntervalUnion> out;
  for (std::size_t t = 0; t < cells; ++t) {
    // a full piece reaches halfway into the shorter neighbouring cell
    std::vector<std::pair<Rational, bool>> los, his;
    if (t == 0) {
      los.emplace_back(0, true);
    } else {
      los.emplace_back(grid[t] - std::min(width(t - 1), width(t)) / 2, false);
      if (is_cut[t]) los.emplace_back(grid[t], false);
    }
    if (t + 1 == cells) {
      his.emplace_back(1, true);
    } else {
      his.emplace_back(grid[t + 1] + std::min(width(t), width(t + 1)) / 2, false);
      if (is_cut[t + 1]) his.emplace_back(grid[t + 1], false);
    }
    for (const auto& [lo, lc] : los)
      for (const auto& [hi, hc] : his) out.emplace_back(Interval{lo, hi, lc, hc});
  }
  return out;
}

namespace {

// Sets ordered by infimum, with the longest diameter, for windowed scans.
struct HullIndex {
  std::vector<std::pair<Rational, std::uint32_t>> by_inf;
  Rational max_diam = 0;

  explicit HullIndex(const std::vector<IntervalUnion>& sets) {
    by_inf.reserve(sets.size());
    for (std::uint32_t i = 0; i < sets.size(); ++i) {
      if (sets[i].empty()) continue;
      by_inf.emplace_back(sets[i].inf(), i);
      if (sets[i].diam() > max_diam) max_diam = sets[i].diam();
    }
    std::sort(by_inf.begin(), by_inf.end());
  }

  // indices whose infimum lies in [lo, hi]
  template <class F>
  void scan(const Rational& lo, const Rational& hi, F&& f) const {
    auto it = std::lower_bound(by_inf.begin(), by_inf.end(), lo,
                               [](const auto& e, const Rational& v) { return e.first < v; });
    for (; it != by_inf.end() && it->first <= hi; ++it) f(it->second);
  }
};

}  // namespace

IndexLists PLIntervalMap::meets(const std::vector<IntervalUnion>& a, const std::vector<IntervalUnion>& b) const {
  HullIndex index(b);
  IndexLists out(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    if (a[i].empty()) continue;
    index.scan(a[i].inf() - index.max_diam, a[i].sup(), [&](std::uint32_t j) {
      if (twinlim::intersects(a[i], b[j])) out[i].push_back(j);
    });
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

IndexLists PLIntervalMap::contained_in(const std::vector<IntervalUnion>& inner,
                                       const std::vector<IntervalUnion>& outer) const {
  HullIndex index(outer);
  IndexLists out(inner.size());
  for (std::uint32_t i = 0; i < inner.size(); ++i) {
    if (inner[i].empty()) continue;
    index.scan(inner[i].sup() - index.max_diam, inner[i].inf(), [&](std::uint32_t j) {
      if (twinlim::subset(inner[i], outer[j])) out[i].push_back(j);
    });
    std::sort(out[i].begin(), out[i].end());
  }
  return out;
}

Rational lebesgue_lower_bound(const PLIntervalMap& b, const std::vector<IntervalUnion>& cover) {
  if (!covers_space(b, cover)) throw StructuralError("family does not cover the space");
  std::vector<Interval> parts;
  for (const auto& u : cover) parts.insert(parts.end(), u.parts().begin(), u.parts().end());
  for (const auto& p : parts)
    if (p.lo == 0 && p.hi == 1) return 1;
  // depth of x inside p: distance to the nearest end that is not an end of [0,1]
  auto depth = [](const Interval& p, const Rational& x) -> std::optional<Rational> {
    if (!p.contains(x)) return std::nullopt;
    std::optional<Rational> d;
    if (p.lo > 0) d = x - p.lo;
    if (p.hi < 1) {
      Rational r = p.hi - x;
      if (!d || r < *d) d = r;
    }
    return d;  // nullopt would mean p is all of [0,1]
  };
  auto radius_at = [&](const Rational& x) {
    Rational best = 0;
    for (const auto& p : parts)
      if (auto d = depth(p, x); d && *d > best) best = *d;
    return best;
  };
  // the envelope of the depth functions is piecewise linear; its minimum sits
  // at an endpoint or where a falling edge meets a rising edge
  std::vector<Rational> candidates{0, 1};
  for (const auto& p : parts) {
    candidates.push_back(p.lo);
    candidates.push_back(p.hi);
    for (const auto& q : parts)
      if (q.lo < p.hi && q.lo > p.lo) candidates.push_back((p.hi + q.lo) / 2);
  }
  std::optional<Rational> best;
  for (const auto& x : candidates) {
    if (x < 0 || x > 1) continue;
    Rational r = radius_at(x);
    if (!best || r < *best) best = r;
  }
  if (!best || *best <= 0) throw StructuralError("cover has no positive Lebesgue bound");
  return *best;
}

// ================================================================ shift

ShiftSystem::ShiftSystem(std::vector<char> alphabet, std::vector<std::vector<bool>> allowed)
    : alphabet_(std::move(alphabet)), allowed_(std::move(allowed)) {
  const std::size_t k = alphabet_.size();
  if (k == 0) throw StructuralError("shift needs a nonempty alphabet");
  if (k > 64) throw StructuralError("shift alphabet limited to 64 symbols");
  if (std::set<char>(alphabet_.begin(), alphabet_.end()).size() != k) throw StructuralError("duplicate shift symbol");
  if (allowed_.size() != k) throw StructuralError("transition matrix has wrong size");
  followers_.resize(k);
  bool any = false;
  for (std::size_t a = 0; a < k; ++a) {
    if (allowed_[a].size() != k) throw StructuralError("transition matrix has wrong size");
    for (std::size_t b = 0; b < k; ++b)
      if (allowed_[a][b]) followers_[a].push_back(static_cast<char>(b));
    if (followers_[a].empty())
      throw StructuralError(std::string("symbol '") + alphabet_[a] + "' admits no extension");
    any = true;
  }
  if (!any) throw StructuralError("shift has no allowed transition");
}

ShiftSystem ShiftSystem::full(std::size_t symbols) {
  std::vector<char> alphabet;
  for (std::size_t i = 0; i < symbols; ++i) alphabet.push_back(static_cast<char>(i < 10 ? '0' + i : 'a' + (i - 10)));
  return ShiftSystem(alphabet, std::vector<std::vector<bool>>(symbols, std::vector<bool>(symbols, true)));
}

ShiftSystem ShiftSystem::golden_mean() { return ShiftSystem({'0', '1'}, {{true, true}, {true, false}}); }

bool ShiftSystem::is_full() const {
  for (const auto& row : allowed_)
    for (bool b : row)
      if (!b) return false;
  return true;
}

bool ShiftSystem::allowed_word(const std::string& w) const {
  for (char c : w)
    if (static_cast<unsigned char>(c) >= symbols()) return false;
  for (std::size_t i = 1; i < w.size(); ++i)
    if (!allowed_[w[i - 1]][w[i]]) return false;
  return true;
}

std::vector<std::string> ShiftSystem::words(std::size_t n) const {
  std::vector<std::string> cur{""};
  for (std::size_t len = 0; len < n; ++len) {
    std::vector<std::string> next;
    for (const auto& w : cur) {
      if (w.empty()) {
        for (std::size_t s = 0; s < symbols(); ++s) next.push_back(std::string(1, static_cast<char>(s)));
      } else {
        for (char s : followers_[w.back()]) next.push_back(w + s);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

bool ShiftSystem::surjective() const {
  for (std::size_t b = 0; b < symbols(); ++b) {
    bool has_pred = false;
    for (std::size_t a = 0; a < symbols(); ++a) has_pred = has_pred || allowed_[a][b];
    if (!has_pred) return false;
  }
  return true;
}

CylinderSet ShiftSystem::cylinder(const std::string& w) const {
  if (!allowed_word(w)) throw StructuralError("word is not allowed in the subshift");
  return canonical({w});
}

CylinderSet ShiftSystem::canonical(std::vector<std::string> ws) const {
  std::set<std::string> set(ws.begin(), ws.end());
  // drop words that have a proper prefix in the set
  for (auto it = set.begin(); it != set.end();) {
    bool covered = false;
    for (std::size_t l = 0; l < it->size() && !covered; ++l) covered = set.count(it->substr(0, l)) > 0;
    it = covered ? set.erase(it) : std::next(it);
  }
  // merge complete sibling families, longest words first
  std::size_t maxlen = 0;
  for (const auto& w : set) maxlen = std::max(maxlen, w.size());
  for (std::size_t len = maxlen; len >= 1; --len) {
    std::map<std::string, std::vector<char>> groups;
    for (const auto& w : set)
      if (w.size() == len) groups[w.substr(0, len - 1)].push_back(w.back());
    for (auto& [parent, kids] : groups) {
      std::size_t need = parent.empty() ? symbols() : followers_[parent.back()].size();
      if (kids.size() != need) continue;
      for (char c : kids) set.erase(parent + c);
      set.insert(parent);
    }
  }
  return CylinderSet{{set.begin(), set.end()}};
}

CylinderSet ShiftSystem::image(const CylinderSet& u) const {
  std::vector<std::string> out;
  for (const auto& w : u.words) {
    if (w.size() >= 2) {
      out.push_back(w.substr(1));
    } else if (w.size() == 1) {
      for (char s : followers_[w[0]]) out.push_back(std::string(1, s));
    } else {
      for (std::size_t b = 0; b < symbols(); ++b)
        for (std::size_t a = 0; a < symbols(); ++a)
          if (allowed_[a][b]) {
            out.push_back(std::string(1, static_cast<char>(b)));
            break;
          }
    }
  }
  return canonical(std::move(out));
}

CylinderSet ShiftSystem::fatten(const CylinderSet& u, const Rational& eps) const {
  if (eps < 0) throw StructuralError("negative fattening radius");
  if (eps == 0) return u;
  // d(x,y) < eps iff x,y agree on the first k symbols, k the least with 2^{-k} < eps
  std::size_t k = 0;
  while (!(pow2_neg(static_cast<unsigned>(k)) < eps)) ++k;
  std::vector<std::string> out;
  for (const auto& w : u.words) out.push_back(w.substr(0, std::min(w.size(), k)));
  return canonical(std::move(out));
}

CylinderSet ShiftSystem::unite(const CylinderSet& a, const CylinderSet& b) const {
  std::vector<std::string> all = a.words;
  all.insert(all.end(), b.words.begin(), b.words.end());
  return canonical(std::move(all));
}

namespace {

bool is_prefix(const std::string& p, const std::string& w) { return p.size() <= w.size() && w.compare(0, p.size(), p) == 0; }

}  // namespace

CylinderSet ShiftSystem::intersect(const CylinderSet& a, const CylinderSet& b) const {
  std::vector<std::string> out;
  for (const auto& u : a.words)
    for (const auto& v : b.words) {
      if (is_prefix(u, v)) out.push_back(v);
      else if (is_prefix(v, u)) out.push_back(u);
    }
  return canonical(std::move(out));
}

bool ShiftSystem::intersects(const CylinderSet& a, const CylinderSet& b) const {
  for (const auto& u : a.words)
    for (const auto& v : b.words)
      if (is_prefix(u, v) || is_prefix(v, u)) return true;
  return false;
}

bool ShiftSystem::subset(const CylinderSet& a, const CylinderSet& b) const {
  for (const auto& u : a.words) {
    bool inside = std::any_of(b.words.begin(), b.words.end(), [&](const std::string& v) { return is_prefix(v, u); });
    if (!inside) return false;
  }
  return true;
}

std::optional<std::size_t> ShiftSystem::branch_index(const std::string& w) const {
  if (w.empty()) {
    if (symbols() >= 2) return 0;
    return branch_index(std::string(1, 0));
  }
  std::size_t m = w.size();
  char s = w.back();
  std::vector<bool> seen(symbols(), false);
  while (followers_[s].size() == 1) {
    if (seen[s]) return std::nullopt;  // forced periodic tail: a single point
    seen[s] = true;
    s = followers_[s].front();
    ++m;
  }
  return m;
}

Rational ShiftSystem::diam(const CylinderSet& u) const {
  if (u.empty()) throw StructuralError("diameter of the empty set");
  Rational d = 0;
  for (const auto& w : u.words)
    if (auto k = branch_index(w)) d = std::max(d, pow2_neg(static_cast<unsigned>(*k)));
  for (std::size_t i = 0; i < u.words.size(); ++i)
    for (std::size_t j = i + 1; j < u.words.size(); ++j) {
      const auto& a = u.words[i];
      const auto& b = u.words[j];
      std::size_t k = 0;
      while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
      d = std::max(d, pow2_neg(static_cast<unsigned>(k)));
    }
  return d;
}

std::vector<CylinderSet> ShiftSystem::refine(const std::vector<CylinderSet>&, unsigned granularity) const {
  std::vector<CylinderSet> out;
  for (const auto& w : words(granularity)) out.push_back(cylinder(w));
  return out;
}

unsigned ShiftSystem::initial_granularity(std::size_t level, unsigned previous) const {
  return std::max<unsigned>(previous + 1, static_cast<unsigned>(level));
}

IndexLists ShiftSystem::meets(const std::vector<CylinderSet>& a, const std::vector<CylinderSet>& b) const {
  // sorted (word, owner) table: extensions of u form a contiguous range
  std::vector<std::pair<std::string, std::uint32_t>> table;
  for (std::uint32_t j = 0; j < b.size(); ++j)
    for (const auto& w : b[j].words) table.emplace_back(w, j);
  std::sort(table.begin(), table.end());
  IndexLists out(a.size());
  for (std::uint32_t i = 0; i < a.size(); ++i) {
    for (const auto& u : a[i].words) {
      for (std::size_t l = 0; l <= u.size(); ++l) {
        auto p = u.substr(0, l);
        auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(p, std::uint32_t{0}));
        for (; it != table.end() && it->first == p; ++it) out[i].push_back(it->second);
      }
      auto it = std::lower_bound(table.begin(), table.end(), std::make_pair(u, std::uint32_t{0}));
      for (; it != table.end() && is_prefix(u, it->first); ++it) out[i].push_back(it->second);
    }
    std::sort(out[i].begin(), out[i].end());
    out[i].erase(std::unique(out[i].begin(), out[i].end()), out[i].end());
  }
  return out;
}

IndexLists ShiftSystem::contained_in(const std::vector<CylinderSet>& inner, const std::vector<CylinderSet>& outer) const {
  IndexLists candidates = meets(inner, outer);
  IndexLists out(inner.size());
  for (std::uint32_t i = 0; i < inner.size(); ++i)
    for (auto j : candidates[i])
      if (subset(inner[i], outer[j])) out[i].push_back(j);
  return out;
}

std::string ShiftSystem::spell(const std::string& w) const {
  std::string s;
  for (char c : w) s += alphabet_.at(static_cast<unsigned char>(c));
  return s;
}

std::string ShiftSystem::parse_word(const std::string& spelled) const {
  std::string w;
  for (char c : spelled) {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), c);
    if (it == alphabet_.end()) throw ParseError(std::string("unknown shift symbol '") + c + "'");
    w += static_cast<char>(it - alphabet_.begin());
  }
  return w;
}

std::string ShiftSystem::describe(const CylinderSet& u) const {
  std::string s;
  for (const auto& w : u.words) s += (s.empty() ? "" : " u ") + std::string("C(") + spell(w) + ")";
  return s.empty() ? "{}" : s;
}

Rational lebesgue_lower_bound(const ShiftSystem& b, const std::vector<CylinderSet>& cover) {
  if (!covers_space(b, cover)) throw StructuralError("family does not cover the space");
  for (const auto& u : cover)
    if (u == b.whole()) {
      Rational d = b.diam(b.whole());
      return d == 0 ? Rational(1) : d;
    }
  std::size_t maxlen = 0;
  for (const auto& u : cover)
    for (const auto& w : u.words) maxlen = std::max(maxlen, w.size());
  // sets of diameter < 2^{-(k-1)} lie in one k-cylinder
  for (std::size_t k = 1; k <= maxlen; ++k) {
    bool all_fit = true;
    for (const auto& w : b.words(k)) {
      CylinderSet c{{w}};
      if (!std::any_of(cover.begin(), cover.end(), [&](const CylinderSet& u) { return b.subset(c, u); })) {
        all_fit = false;
        break;
      }
    }
    if (all_fit) return pow2_neg(static_cast<unsigned>(k - 1));
  }
  return pow2_neg(static_cast<unsigned>(maxlen));
}

// ================================================================ spec files

namespace {

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

System parse_system_spec(const std::string& text) {
  std::map<std::string, std::pair<std::string, int>> kv;
  std::istringstream in(text);
  int lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = {trim(line.substr(eq + 1)), lineno};
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("missing key '" + key + "'");
    return it->second.first;
  };
  auto rationals = [&](const std::string& key) {
    std::vector<Rational> out;
    try {
      for (const auto& t : tokens(get(key))) out.push_back(parse_rational(t));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(kv[key].second) + ": " + e.what());
    }
    return out;
  };
  const std::string kind = get("kind");
  try {
    if (kind == "pl_interval") return PLIntervalMap(rationals("breakpoints"), rationals("values"));
    if (kind == "finite") {
      auto map_tokens = tokens(get("map"));
      std::vector<std::string> names =
          kv.count("points") ? tokens(get("points")) : std::vector<std::string>{};
      if (names.empty())
        for (std::size_t i = 0; i < map_tokens.size(); ++i) names.push_back(std::to_string(i));
      auto index_of = [&](const std::string& t) -> std::uint32_t {
        auto it = std::find(names.begin(), names.end(), t);
        if (it == names.end()) throw ParseError("line " + std::to_string(kv["map"].second) + ": unknown point '" + t + "'");
        return static_cast<std::uint32_t>(it - names.begin());
      };
      std::vector<std::uint32_t> map;
      for (const auto& t : map_tokens) map.push_back(index_of(t));
      const std::size_t n = names.size();
      std::vector<std::vector<Rational>> metric(n, std::vector<Rational>(n, Rational(1)));
      for (std::size_t i = 0; i < n; ++i) metric[i][i] = 0;
      if (kv.count("metric") && get("metric") != "discrete") {
        std::string rows = get("metric");
        std::vector<std::vector<Rational>> m;
        std::istringstream rs(rows);
        for (std::string row; std::getline(rs, row, ';');) {
          std::vector<Rational> r;
          for (const auto& t : tokens(row)) r.push_back(parse_rational(t));
          m.push_back(std::move(r));
        }
        metric = std::move(m);
      }
      return FiniteSystem(std::move(names), std::move(metric), std::move(map));
    }
    if (kind == "shift") {
      std::vector<char> alphabet;
      for (const auto& t : tokens(get("alphabet"))) {
        if (t.size() != 1) throw ParseError("shift symbols must be single characters");
        alphabet.push_back(t[0]);
      }
      const std::size_t k = alphabet.size();
      std::vector<std::vector<bool>> allowed(k, std::vector<bool>(k, false));
      const std::string trans = kv.count("transitions") ? get("transitions") : "full";
      if (trans == "full") {
        for (auto& row : allowed) row.assign(k, true);
      } else {
        for (const auto& t : tokens(trans)) {
          if (t.size() != 2) throw ParseError("transition '" + t + "' is not a two-symbol word");
          auto a = std::find(alphabet.begin(), alphabet.end(), t[0]);
          auto b = std::find(alphabet.begin(), alphabet.end(), t[1]);
          if (a == alphabet.end() || b == alphabet.end()) throw ParseError("transition '" + t + "' uses unknown symbol");
          allowed[a - alphabet.begin()][b - alphabet.begin()] = true;
        }
      }
      return ShiftSystem(std::move(alphabet), std::move(allowed));
    }
  } catch (const StructuralError& e) {
    throw ParseError(std::string("invalid system: ") + e.what());
  }
  throw ParseError("line " + std::to_string(kv["kind"].second) + ": unknown kind '" + kind + "'");
}

System load_system_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_system_spec(ss.str());
}

std::string format_system_spec(const System& s) {
  std::ostringstream out;
  auto join_rationals = [](const std::vector<Rational>& v) {
    std::string r;
    for (const auto& x : v) r += (r.empty() ? "" : " ") + to_string(x);
    return r;
  };
  std::visit(
      [&](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, FiniteSystem>) {
          out << "kind = finite\npoints =";
          for (const auto& n : b.names()) out << ' ' << n;
          out << "\nmap =";
          for (auto p : b.map()) out << ' ' << b.names()[p];
          out << "\nmetric = ";
          for (std::size_t i = 0; i < b.size(); ++i) out << (i ? " ; " : "") << join_rationals(b.metric()[i]);
          out << '\n';
        } else if constexpr (std::is_same_v<B, PLIntervalMap>) {
          out << "kind = pl_interval\nbreakpoints = " << join_rationals(b.breakpoints())
              << "\nvalues = " << join_rationals(b.values()) << '\n';
        } else {
          out << "kind = shift\nalphabet =";
          for (char c : b.alphabet()) out << ' ' << c;
          out << "\ntransitions =";
          if (b.is_full()) {
            out << " full";
          } else {
            for (std::size_t a = 0; a < b.symbols(); ++a)
              for (std::size_t c = 0; c < b.symbols(); ++c)
                if (b.allowed()[a][c]) out << ' ' << b.alphabet()[a] << b.alphabet()[c];
          }
          out << '\n';
        }
      },
      s);
  return out.str();
}

std::string_view backend_name(const System& s) {
  switch (s.index()) {
    case 0: return "finite";
    case 1: return "pl_interval";
    default: return "shift";
  }
}

}  // namespace twinlim
