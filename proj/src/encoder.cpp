#include "twinlim/encoder.hpp"

#include <algorithm>
#include <random>

namespace twinlim {

namespace {

bool set_less(const PointSet& a, const PointSet& b) { return a.points < b.points; }
bool set_less(const CylinderSet& a, const CylinderSet& b) { return a.words < b.words; }
bool set_less(const IntervalUnion& a, const IntervalUnion& b) {
  const auto& x = a.parts();
  const auto& y = b.parts();
  for (std::size_t k = 0; k < x.size() && k < y.size(); ++k) {
    if (x[k].lo != y[k].lo) return x[k].lo < y[k].lo;
    if (x[k].lo_closed != y[k].lo_closed) return x[k].lo_closed;
    if (x[k].hi != y[k].hi) return x[k].hi < y[k].hi;
    if (x[k].hi_closed != y[k].hi_closed) return !x[k].hi_closed;
  }
  return x.size() < y.size();
}

template <class Set>
void sort_unique(std::vector<Set>& v) {
  std::sort(v.begin(), v.end(), [](const Set& a, const Set& b) { return set_less(a, b); });
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <class Backend>
std::vector<typename Backend::Set> images(const Backend& b, const std::vector<typename Backend::Set>& sets) {
  std::vector<typename Backend::Set> out;
  out.reserve(sets.size());
  for (const auto& u : sets) out.push_back(b.image(u));
  return out;
}

template <class Backend>
std::vector<typename Backend::Set> fattened(const Backend& b, const std::vector<typename Backend::Set>& sets,
                                            const Rational& eps) {
  std::vector<typename Backend::Set> out;
  out.reserve(sets.size());
  for (const auto& u : sets) out.push_back(b.fatten(u, eps));
  return out;
}

// Children of each parent index, from the child -> containing parents lists.
IndexLists invert(const IndexLists& child_to_parents, std::size_t parents) {
  IndexLists out(parents);
  for (std::uint32_t c = 0; c < child_to_parents.size(); ++c)
    for (auto p : child_to_parents[c]) out[p].push_back(c);
  return out;
}

template <class Backend>
Report check_level(const Backend& b, const CoverLevel<typename Backend::Set>& previous,
                   const CoverLevel<typename Backend::Set>& current, std::size_t i, bool stop_early) {
  using Set = typename Backend::Set;
  Report r;
  const auto& cover = current.cover;
  auto done = [&] { return stop_early && !r.ok(); };

  {
    Check c;
    for (std::size_t k = 0; k < cover.size(); ++k)
      if (cover[k].empty()) {
        c = Check::fail("empty_element", "element " + std::to_string(k));
        break;
      }
    if (cover.empty()) c = Check::fail("empty_cover", "no elements");
    r.record("C1", i, c);
    if (done()) return r;
  }
  {
    const Rational m = mesh(b, cover);
    Check c;
    if (m > pow2_neg(static_cast<unsigned>(i)))
      c = Check::fail("mesh_too_large", "mesh " + to_string(m) + " > 2^-" + std::to_string(i));
    r.record("C3", i, c);
    if (done()) return r;
  }
  {
    const Rational eps = level_epsilon(b, cover);
    Check c;
    if (eps != current.epsilon)
      c = Check::fail("epsilon_mismatch", "stored " + to_string(current.epsilon) + " computed " + to_string(eps));
    r.record("eps", i, c);
    if (done()) return r;
  }
  {
    std::vector<Set> fat = fattened(b, cover, current.epsilon);
    Check c;
    // strict inequality against a previous epsilon of 0 cannot hold; zero meets zero
    Rational lhs = 0;
    for (const auto& u : fat) {
      Rational d = std::max(b.diam(u), b.diam(b.image(u)));
      if (d > lhs) lhs = d;
    }
    lhs *= 2;
    bool inequality = lhs < previous.epsilon || (previous.epsilon == 0 && lhs == 0);
    if (!inequality) {
      c = Check::fail("mesh_inequality", "2max{mesh f(U^e), mesh U^e} = " + to_string(lhs) + " >= " +
                                             to_string(previous.epsilon));
    } else {
      IndexLists inside = b.contained_in(fat, previous.cover);
      for (std::size_t k = 0; k < fat.size(); ++k)
        if (inside[k].empty()) {
          c = Check::fail("not_refining", "fattened element " + b.describe(cover[k]) + " in no previous element");
          break;
        }
    }
    r.record("C2", i, c);
    if (done()) return r;
  }
  {
    IndexLists children = invert(b.contained_in(cover, previous.cover), previous.cover.size());
    Check c;
    for (std::size_t p = 0; p < previous.cover.size(); ++p) {
      Set all;
      for (auto k : children[p]) all = b.unite(all, cover[k]);
      if (!(all == previous.cover[p])) {
        c = Check::fail("union_mismatch", "element " + b.describe(previous.cover[p]) + " is not the union of its parts");
        break;
      }
    }
    r.record("C5", i, c);
  }
  return r;
}

std::string tagged_label(const TaggedVertex& v) {
  return std::to_string(v.parent) + "/" + std::to_string(v.set_id);
}

std::vector<Edge> expand_edges(const IndexLists& set_relation, const IndexLists& copies) {
  std::vector<Edge> edges;
  for (std::uint32_t c = 0; c < set_relation.size(); ++c)
    for (auto d : set_relation[c])
      for (auto a : copies[c])
        for (auto bv : copies[d]) edges.emplace_back(a, bv);
  return edges;
}

}  // namespace

template <class Backend>
Relation f_relation(const Backend& b, const std::vector<typename Backend::Set>& cover) {
  IndexLists m = b.meets(images(b, cover), cover);
  Relation r(cover.size(), cover.size());
  for (std::uint32_t u = 0; u < m.size(); ++u)
    for (auto v : m[u]) r.add(u, v);
  r.normalize();
  return r;
}

template <class Backend>
Rational level_epsilon(const Backend& b, const std::vector<typename Backend::Set>& cover) {
  Rational m = mesh(b, cover);
  for (const auto& u : cover) {
    Rational d = b.diam(b.image(u));
    if (d > m) m = d;
  }
  return m;
}

template <class Backend>
Report verify_level(const Backend& b, const CoverLevel<typename Backend::Set>& previous,
                    const CoverLevel<typename Backend::Set>& current, std::size_t i) {
  return check_level(b, previous, current, i, false);
}

template <class Backend>
Report verify_conditions(const Backend& b, const std::vector<CoverLevel<typename Backend::Set>>& levels) {
  if (levels.empty()) throw StructuralError("no levels to verify");
  Report r;
  {
    const auto& l0 = levels.front();
    Check c;
    if (l0.cover.size() != 1 || !(l0.cover.front() == b.whole()))
      c = Check::fail("root_not_whole", "level 0 must be the single set X");
    r.record("C1", 0, c);
    Check e;
    if (l0.cover.size() == 1 && level_epsilon(b, l0.cover) != l0.epsilon)
      e = Check::fail("epsilon_mismatch", "stored " + to_string(l0.epsilon));
    r.record("eps", 0, e);
  }
  for (std::size_t i = 1; i < levels.size(); ++i) {
    Report li = verify_level(b, levels[i - 1], levels[i], i);
    r.violations.insert(r.violations.end(), li.violations.begin(), li.violations.end());
    r.lines.insert(r.lines.end(), li.lines.begin(), li.lines.end());
  }
  return r;
}

template <class Backend>
CoverLevel<typename Backend::Set> refine_cover(const Backend& b, const CoverLevel<typename Backend::Set>& previous,
                                               std::size_t i, const EncodeOptions& opts) {
  const unsigned prev = previous.granularity;
  unsigned g = b.initial_granularity(i, prev);
  std::string last = "no attempt";
  for (unsigned attempt = 0; attempt < opts.max_attempts && g <= b.max_granularity(); ++attempt) {
    CoverLevel<typename Backend::Set> cur;
    cur.cover = b.refine(previous.cover, g);
    sort_unique(cur.cover);
    cur.epsilon = level_epsilon(b, cur.cover);
    cur.granularity = g;
    Report r = check_level(b, previous, cur, i, true);
    if (r.ok()) {
      // a star of F-neighbours must fit in 2^-i, so conjugacy enclosures shrink with depth
      Rational wide = 2 * mesh(b, fattened(b, cur.cover, cur.epsilon));
      if (wide <= pow2_neg(static_cast<unsigned>(i))) return cur;
      last = "star width " + to_string(wide) + " at granularity " + std::to_string(g);
    } else {
      const auto& v = r.violations.front();
      last = v.axiom + " at granularity " + std::to_string(g) + ": " + v.witness;
    }
    g = b.next_granularity(g, prev);
  }
  throw RefinementCapExceeded("level " + std::to_string(i) + ": refinement cap reached; last failure " + last);
}

template <class Backend>
BuiltLevel build_level(const Backend& b, const std::vector<CoverLevel<typename Backend::Set>>& levels, std::size_t i,
                       const std::vector<TaggedVertex>& previous_vertices) {
  BuiltLevel out;
  if (i == 0) {
    out.vertices = {TaggedVertex{0, 0, 0}};
    out.g = Graph({"root"}, {{0, 0}}, GraphKind::directed);
    out.f = Graph({"root"}, {{0, 0}}, GraphKind::symmetric);
    return out;
  }
  const auto& cover = levels.at(i).cover;
  const auto& parents = levels.at(i - 1).cover;
  IndexLists inside = b.contained_in(cover, parents);
  for (std::size_t k = 0; k < cover.size(); ++k)
    if (inside[k].empty())
      throw AxiomViolation("C5: element " + b.describe(cover[k]) + " of level " + std::to_string(i) +
                           " lies in no previous element");
  IndexLists children = invert(inside, parents.size());

  IndexLists copies(cover.size());
  for (VertexId v = 0; v < previous_vertices.size(); ++v)
    for (auto k : children[previous_vertices[v].set_id]) {
      copies[k].push_back(static_cast<VertexId>(out.vertices.size()));
      out.vertices.push_back(TaggedVertex{i, v, k});
      out.bond.map.push_back(v);
    }

  std::vector<std::string> labels;
  labels.reserve(out.vertices.size());
  for (const auto& v : out.vertices) labels.push_back(tagged_label(v));

  auto g_sets = b.meets(images(b, cover), cover);
  auto fat = fattened(b, cover, levels.at(i).epsilon);
  auto f_sets = b.meets(fat, fat);
  out.g = Graph(labels, expand_edges(g_sets, copies), GraphKind::directed);
  out.f = Graph(std::move(labels), expand_edges(f_sets, copies), GraphKind::symmetric);
  return out;
}

template <class Backend>
Encoding<Backend> encode(const Backend& b, std::size_t depth, const EncodeOptions& opts) {
  Encoding<Backend> enc{b, {}, {}, {}};
  CoverLevel<typename Backend::Set> root;
  root.cover = {b.whole()};
  root.epsilon = level_epsilon(b, root.cover);
  enc.levels.push_back(std::move(root));
  for (std::size_t i = 1; i <= depth; ++i) enc.levels.push_back(refine_cover(b, enc.levels.back(), i, opts));

  std::vector<Graph> gs, fs;
  std::vector<GraphHom> bonds;
  for (std::size_t i = 0; i <= depth; ++i) {
    BuiltLevel lvl = build_level(b, enc.levels, i, i ? enc.vertex_table.back() : std::vector<TaggedVertex>{});
    gs.push_back(std::move(lvl.g));
    fs.push_back(std::move(lvl.f));
    if (i) bonds.push_back(std::move(lvl.bond));
    enc.vertex_table.push_back(std::move(lvl.vertices));
  }
  enc.twinned = TwinnedSequence(std::move(gs), std::move(fs), std::move(bonds));
  return enc;
}

GraphSequence encode_zero_dim(const ShiftSystem& b, std::size_t depth) {
  if (!b.surjective()) throw StructuralError("subshift is not onto; some symbol has no predecessor");
  std::vector<Graph> levels;
  std::vector<GraphHom> bonds;
  std::vector<std::string> prev_words;
  for (std::size_t i = 0; i <= depth; ++i) {
    std::vector<std::string> ws = b.words(i);
    std::vector<std::string> labels;
    for (const auto& w : ws) labels.push_back(i == 0 ? "root" : b.spell(w));
    // f(C(w)) meets C(v) iff w[1:] and v agree on their common length and w v-compatible
    std::vector<Edge> edges;
    for (VertexId u = 0; u < ws.size(); ++u)
      for (VertexId v = 0; v < ws.size(); ++v) {
        const auto& w = ws[u];
        const auto& x = ws[v];
        bool meets;
        if (i == 0) {
          meets = true;
        } else {
          // shifted word w[1:] then one free symbol; x must continue it
          std::string tail = w.substr(1);
          meets = x.compare(0, tail.size(), tail) == 0 && b.allowed_word(w + x.substr(tail.size()));
        }
        if (meets) edges.emplace_back(u, v);
      }
    levels.emplace_back(std::move(labels), edges, GraphKind::directed);
    if (i > 0) {
      GraphHom h;
      for (const auto& w : ws) {
        auto it = std::lower_bound(prev_words.begin(), prev_words.end(), w.substr(0, i - 1));
        h.map.push_back(static_cast<VertexId>(it - prev_words.begin()));
      }
      bonds.push_back(std::move(h));
    }
    prev_words = std::move(ws);
  }
  return GraphSequence(std::move(levels), std::move(bonds), SequenceKind::covers);
}

template <class Backend>
typename Backend::Set decode_psi(const Encoding<Backend>& enc, const Thread& t) {
  if (t.depth > enc.depth()) throw StructuralError("thread deeper than the encoding");
  auto path = thread_path(enc.twinned, t);
  auto s = enc.system.closure(enc.set_of(0, path[0]));
  for (std::size_t i = 1; i < path.size(); ++i) s = enc.system.intersect(s, enc.system.closure(enc.set_of(i, path[i])));
  if (s.empty()) throw AxiomViolation("empty enclosure along thread ending at " + enc.twinned.g_level(t.depth).label(t.last));
  return s;
}

template <class Backend>
typename Backend::Set class_enclosure(const Encoding<Backend>& enc, const ClassAtDepth& c) {
  typename Backend::Set s;
  for (auto v : c.members) s = enc.system.unite(s, decode_psi(enc, Thread{c.depth, v}));
  return s;
}

template <class Backend>
ConjugacyReport conjugacy_check(const Encoding<Backend>& enc, std::size_t n, std::size_t samples, std::uint64_t seed) {
  if (n < 1 || n > enc.depth()) throw StructuralError("conjugacy depth out of range");
  ConjugacyReport out;
  out.seed = seed;
  out.depth = n;
  const std::size_t count = enc.twinned.g_level(n).size();
  std::vector<VertexId> picks;
  if (samples >= count) {
    for (VertexId v = 0; v < count; ++v) picks.push_back(v);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dist(0, count - 1);
    for (std::size_t k = 0; k < samples; ++k) picks.push_back(static_cast<VertexId>(dist(rng)));
  }
  TwinnedAnalysis an(enc.twinned);
  const Rational bound = pow2_neg(static_cast<unsigned>(n - 1));
  Check commute, diam_a, diam_b, exact;
  for (auto v : picks) {
    Thread x{n, v};
    ClassAtDepth c = an.star(x);
    ClassAtDepth t = an.t_step_star(x);
    auto a = class_enclosure(enc, c);
    auto bset = class_enclosure(enc, t);
    auto fa = enc.system.image(a);
    const std::string who = enc.twinned.g_level(n).label(v);
    if (commute && !enc.system.intersects(fa, bset))
      commute = Check::fail("image_misses", who + ": f(" + enc.system.describe(a) + ") misses " + enc.system.describe(bset));
    if (diam_a && enc.system.diam(a) > bound)
      diam_a = Check::fail("enclosure_too_wide", who + ": diam " + to_string(enc.system.diam(a)));
    if (diam_b && enc.system.diam(bset) > bound)
      diam_b = Check::fail("enclosure_too_wide", who + ": diam " + to_string(enc.system.diam(bset)));
    if constexpr (std::is_same_v<Backend, FiniteSystem>) {
      if (exact && a.points.size() == 1 && bset.points.size() == 1 && !(fa == bset))
        exact = Check::fail("image_differs", who + ": f(" + enc.system.describe(a) + ") != " + enc.system.describe(bset));
    }
    ++out.checked;
  }
  out.report.record("commute", n, commute);
  out.report.record("diam_source", n, diam_a);
  out.report.record("diam_target", n, diam_b);
  if constexpr (std::is_same_v<Backend, FiniteSystem>) out.report.record("exact", n, exact);
  return out;
}

std::optional<std::size_t> finite_conjugacy_depth(const Encoding<FiniteSystem>& enc) {
  const auto& sys = enc.system;
  for (std::size_t n = 1; n <= enc.depth(); ++n) {
    auto classes = quotient_at_depth(enc.twinned, n);
    if (classes.size() != sys.size()) continue;
    TwinnedAnalysis an(enc.twinned);
    std::vector<bool> hit(sys.size(), false);
    bool ok = true;
    for (const auto& c : classes) {
      PointSet a = class_enclosure(enc, c);
      if (a.points.size() != 1 || hit[a.points[0]]) {
        ok = false;
        break;
      }
      hit[a.points[0]] = true;
      PointSet t = class_enclosure(enc, an.t_step(c));
      if (!(t == sys.image(a))) {
        ok = false;
        break;
      }
    }
    if (ok) return n;
  }
  return std::nullopt;
}

namespace {

template <class Backend, class Pred>
std::optional<Thread> descend(const Encoding<Backend>& enc, std::size_t n, Pred&& inside) {
  if (n > enc.depth()) throw StructuralError("depth beyond the encoding");
  VertexId v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<VertexId> next;
    for (auto c : enc.twinned.children(i, v))
      if (inside(enc.set_of(i + 1, c))) {
        next = c;
        break;
      }
    if (!next) return std::nullopt;
    v = *next;
  }
  return Thread{n, v};
}

}  // namespace

std::optional<Thread> locate_thread(const Encoding<PLIntervalMap>& enc, const Rational& x, std::size_t n) {
  if (x < 0 || x > 1) return std::nullopt;
  return descend(enc, n, [&](const IntervalUnion& u) { return u.contains(x); });
}

std::optional<Thread> locate_thread(const Encoding<FiniteSystem>& enc, std::uint32_t point, std::size_t n) {
  if (point >= enc.system.size()) return std::nullopt;
  return descend(enc, n, [&](const PointSet& u) { return std::binary_search(u.points.begin(), u.points.end(), point); });
}

std::optional<Thread> locate_thread(const Encoding<ShiftSystem>& enc, const std::string& word, std::size_t n) {
  if (!enc.system.allowed_word(word)) return std::nullopt;
  CylinderSet c{{word}};
  return descend(enc, n, [&](const CylinderSet& u) { return enc.system.subset(c, u); });
}

#define TWINLIM_INSTANTIATE(B)                                                                                     \
  template Relation f_relation<B>(const B&, const std::vector<B::Set>&);                                          \
  template Rational level_epsilon<B>(const B&, const std::vector<B::Set>&);                                       \
  template Report verify_conditions<B>(const B&, const std::vector<CoverLevel<B::Set>>&);                          \
  template Report verify_level<B>(const B&, const CoverLevel<B::Set>&, const CoverLevel<B::Set>&, std::size_t);   \
  template CoverLevel<B::Set> refine_cover<B>(const B&, const CoverLevel<B::Set>&, std::size_t,                    \
                                              const EncodeOptions&);                                               \
  template BuiltLevel build_level<B>(const B&, const std::vector<CoverLevel<B::Set>>&, std::size_t,               \
                                     const std::vector<TaggedVertex>&);                                            \
  template Encoding<B> encode<B>(const B&, std::size_t, const EncodeOptions&);                                     \
  template B::Set decode_psi<B>(const Encoding<B>&, const Thread&);                                                \
  template B::Set class_enclosure<B>(const Encoding<B>&, const ClassAtDepth&);                                     \
  template ConjugacyReport conjugacy_check<B>(const Encoding<B>&, std::size_t, std::size_t, std::uint64_t);

TWINLIM_INSTANTIATE(FiniteSystem)
TWINLIM_INSTANTIATE(PLIntervalMap)
TWINLIM_INSTANTIATE(ShiftSystem)

#undef TWINLIM_INSTANTIATE

}  // namespace twinlim
