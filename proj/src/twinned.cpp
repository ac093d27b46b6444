#include "twinlim/twinned.hpp"

#include <algorithm>
#include <set>

namespace twinlim {

namespace {

void sort_unique(std::vector<VertexId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Re-index an F-level onto the vertex numbering of its G-level. Returns
// nullopt when the label sets differ.
std::optional<Graph> align_to(const Graph& f, const Graph& g) {
  if (f.size() != g.size()) return std::nullopt;
  if (f.labels() == g.labels()) return f;
  std::vector<VertexId> to_g(f.size());
  for (VertexId v = 0; v < f.size(); ++v) {
    auto w = g.find(f.label(v));
    if (!w) return std::nullopt;
    to_g[v] = *w;
  }
  std::vector<Edge> edges;
  for (auto [a, b] : f.edges()) edges.emplace_back(to_g[a], to_g[b]);
  return Graph(g.labels(), edges, f.kind());
}

std::string labels_of(const Graph& g, std::initializer_list<VertexId> vs) {
  std::string s = "(";
  bool first = true;
  for (VertexId v : vs) {
    if (!first) s += ",";
    s += g.label(v);
    first = false;
  }
  return s + ")";
}

}  // namespace

TwinnedSequence::TwinnedSequence(std::vector<Graph> g_levels, std::vector<Graph> f_levels, std::vector<GraphHom> bonding)
    : g_(std::move(g_levels)), f_(std::move(f_levels)), bonding_(std::move(bonding)) {
  if (g_.empty()) throw StructuralError("twinned sequence needs at least one level");
  if (f_.size() != g_.size())
    throw StructuralError("twinned sequence has " + std::to_string(g_.size()) + " G-levels and " +
                          std::to_string(f_.size()) + " F-levels");
  if (bonding_.size() + 1 != g_.size())
    throw StructuralError("twinned sequence has " + std::to_string(g_.size()) + " levels but " +
                          std::to_string(bonding_.size()) + " bonding maps");
  for (std::size_t i = 1; i < g_.size(); ++i) require_well_formed(g_[i], g_[i - 1], bond(i));

  shared_.resize(g_.size());
  for (std::size_t i = 0; i < g_.size(); ++i) {
    auto aligned = align_to(f_[i], g_[i]);
    shared_[i] = aligned.has_value();
    if (aligned) f_[i] = std::move(*aligned);
  }

  children_.reserve(g_.size());
  for (std::size_t i = 0; i < g_.size(); ++i) {
    Relation r(g_[i].size(), i + 1 < g_.size() ? g_[i + 1].size() : 0);
    if (i + 1 < g_.size())
      for (VertexId c = 0; c < g_[i + 1].size(); ++c) r.add(bond(i + 1)(c), c);
    r.normalize();
    children_.push_back(std::move(r));
  }
}

VertexId TwinnedSequence::project(VertexId v, std::size_t n, std::size_t i) const {
  for (std::size_t k = n; k > i; --k) v = bond(k)(v);
  return v;
}

GraphSequence TwinnedSequence::g_sequence() const {
  return GraphSequence(g_, bonding_, SequenceKind::homomorphisms);
}

// ---------------------------------------------------------------- validation

namespace {

Check check_ds1(const TwinnedSequence& ts, std::size_t i) {
  const Graph& g = ts.g_level(i);
  for (VertexId v = 0; v < g.size(); ++v)
    if (g.out(v).empty()) return Check::fail("DS1", "vertex " + g.label(v) + " has no outgoing edge");
  if (i == 0) return Check::pass();
  const Graph& lower = ts.g_level(i - 1);
  if (auto c = is_homomorphism(g, lower, ts.bond(i)); !c) return Check::fail("DS1", "G not homomorphic: " + c.witness);
  if (auto c = is_edge_surjective_hom(g, lower, ts.bond(i)); !c)
    return Check::fail("DS1", "edge not covered: " + c.witness);
  return Check::pass();
}

Check check_ds2(const TwinnedSequence& ts, std::size_t i) {
  if (!ts.shares_vertices(i)) return Check::fail("DS2", "vertex sets of G and F differ");
  const Graph& f = ts.f_level(i);
  for (auto [a, b] : f.edges())
    if (!f.has_edge(b, a)) return Check::fail("DS2", "F not symmetric at " + edge_witness(f, a, b));
  for (VertexId v = 0; v < f.size(); ++v)
    if (!f.has_edge(v, v)) return Check::fail("DS2", "missing loop at " + f.label(v));
  if (i > 0 && ts.shares_vertices(i - 1))
    if (auto c = is_homomorphism(f, ts.f_level(i - 1), ts.bond(i)); !c)
      return Check::fail("DS2", "F not homomorphic: " + c.witness);
  return Check::pass();
}

Check check_ds3(const TwinnedSequence& ts, std::size_t i) {
  const Graph& g = ts.g_level(i);
  const Graph& f = ts.f_level(i);
  const Graph& lower = ts.f_level(i - 1);
  const GraphHom& phi = ts.bond(i);
  // projected successors per vertex; witnesses keep one preimage per image
  std::vector<std::vector<std::pair<VertexId, VertexId>>> proj(g.size());
  for (VertexId a = 0; a < g.size(); ++a) {
    for (VertexId s : g.out(a)) proj[a].emplace_back(phi(s), s);
    std::sort(proj[a].begin(), proj[a].end());
    proj[a].erase(std::unique(proj[a].begin(), proj[a].end(),
                              [](auto x, auto y) { return x.first == y.first; }),
                  proj[a].end());
  }
  for (auto [a, b] : f.edges())
    for (auto [pa, sa] : proj[a])
      for (auto [pb, sb] : proj[b])
        if (!lower.has_edge(pa, pb)) return Check::fail("DS3", labels_of(g, {a, b, sa, sb}));
  return Check::pass();
}

Check check_ds3b(const TwinnedSequence& ts, std::size_t i) {
  const Graph& f = ts.f_level(i);
  const Graph& lower = ts.f_level(i - 1);
  const GraphHom& phi = ts.bond(i);
  for (VertexId b = 0; b < f.size(); ++b) {
    std::vector<std::pair<VertexId, VertexId>> proj;
    for (VertexId a : f.out(b)) proj.emplace_back(phi(a), a);
    std::sort(proj.begin(), proj.end());
    proj.erase(std::unique(proj.begin(), proj.end(), [](auto x, auto y) { return x.first == y.first; }), proj.end());
    for (auto [pa, a] : proj)
      for (auto [pc, c] : proj)
        if (!lower.has_edge(pa, pc)) return Check::fail("DS3b", labels_of(f, {a, b, c}));
  }
  return Check::pass();
}

}  // namespace

Report validate_twinned(const TwinnedSequence& ts) {
  Report r;
  r.record("DS0", 0,
           ts.g_level(0).size() == 1
               ? Check::pass()
               : Check::fail("DS0", "level 0 has " + std::to_string(ts.g_level(0).size()) + " vertices"));
  for (std::size_t i = 0; i <= ts.depth(); ++i) {
    r.record("DS1", i, check_ds1(ts, i));
    r.record("DS2", i, check_ds2(ts, i));
  }
  for (std::size_t i = 1; i <= ts.depth(); ++i) {
    if (!ts.shares_vertices(i) || !ts.shares_vertices(i - 1)) {
      r.record("DS3", i, Check::fail("DS3", "skipped: F vertex set mismatch"));
      r.record("DS3b", i, Check::fail("DS3b", "skipped: F vertex set mismatch"));
      continue;
    }
    r.record("DS3", i, check_ds3(ts, i));
    r.record("DS3b", i, check_ds3b(ts, i));
  }
  return r;
}

// ---------------------------------------------------------------- relations

namespace {

Relation levelwise_relation(const TwinnedSequence& ts, std::size_t n, bool use_f) {
  if (n > ts.depth()) throw StructuralError("depth " + std::to_string(n) + " exceeds sequence depth");
  if (use_f)
    for (std::size_t i = 0; i <= n; ++i)
      if (!ts.shares_vertices(i)) throw StructuralError("F-level " + std::to_string(i) + " has a foreign vertex set");
  auto level = [&](std::size_t i) -> const Graph& { return use_f ? ts.f_level(i) : ts.g_level(i); };
  const Graph& top = level(n);
  Relation r(top.size(), top.size());
  for (auto [u, v] : top.edges()) {
    bool all = true;
    VertexId a = u, b = v;
    for (std::size_t i = n; i > 0 && all; --i) {
      a = ts.bond(i)(a);
      b = ts.bond(i)(b);
      all = level(i - 1).has_edge(a, b);
    }
    if (all) r.add(u, v);
  }
  r.normalize();
  return r;
}

}  // namespace

Relation f_relation_at_depth(const TwinnedSequence& ts, std::size_t n) { return levelwise_relation(ts, n, true); }
Relation g_relation_at_depth(const TwinnedSequence& ts, std::size_t n) { return levelwise_relation(ts, n, false); }

bool ClassAtDepth::contains(VertexId v) const { return std::binary_search(members.begin(), members.end(), v); }

std::vector<ClassAtDepth> quotient_at_depth(const TwinnedSequence& ts, std::size_t n) {
  Partition p = equivalence_closure(f_relation_at_depth(ts, n));
  std::vector<ClassAtDepth> out;
  out.reserve(p.size());
  for (auto& members : p.classes) out.push_back({n, members, members.front()});
  return out;
}

ClassAtDepth star_at_depth(const TwinnedSequence& ts, const Thread& x) { return TwinnedAnalysis(ts).star(x); }

// ---------------------------------------------------------------- cylinder sets

bool LevelSet::contains(VertexId v) const { return std::binary_search(vertices.begin(), vertices.end(), v); }

bool LevelSet::includes(const LevelSet& other) const {
  if (other.level != level) throw StructuralError("comparing cylinder sets at different levels");
  return std::includes(vertices.begin(), vertices.end(), other.vertices.begin(), other.vertices.end());
}

namespace {

LevelSet rewrite_at(const TwinnedSequence& ts, const LevelSet& a, std::size_t level) {
  if (level > ts.depth()) throw StructuralError("level exceeds sequence depth");
  LevelSet out{level, {}};
  if (a.level >= level) {
    for (VertexId v : a.vertices) out.vertices.push_back(ts.project(v, a.level, level));
    sort_unique(out.vertices);
    return out;
  }
  std::vector<VertexId> frontier = a.vertices;
  for (std::size_t i = a.level; i < level; ++i) {
    std::vector<VertexId> next;
    for (VertexId v : frontier) {
      auto kids = ts.children(i, v);
      next.insert(next.end(), kids.begin(), kids.end());
    }
    sort_unique(next);
    frontier = std::move(next);
  }
  out.vertices = std::move(frontier);
  return out;
}

}  // namespace

void CylinderUnion::add(const TwinnedSequence& ts, const LevelSet& s) {
  for (VertexId v : s.vertices) {
    bool covered = false;
    for (auto& [lvl, vs] : markers_) {
      if (lvl > s.level) break;
      if (std::binary_search(vs.begin(), vs.end(), ts.project(v, s.level, lvl))) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    // drop finer markers now inside v
    for (auto& [lvl, vs] : markers_) {
      if (lvl <= s.level) continue;
      std::erase_if(vs, [&](VertexId w) { return ts.project(w, lvl, s.level) == v; });
    }
    auto& here = markers_[s.level];
    here.insert(std::upper_bound(here.begin(), here.end(), v), v);
  }
  std::erase_if(markers_, [](const auto& kv) { return kv.second.empty(); });
}

LevelSet CylinderUnion::at_level(const TwinnedSequence& ts, std::size_t level) const {
  LevelSet out{level, {}};
  for (const auto& [lvl, vs] : markers_) {
    LevelSet part = rewrite_at(ts, LevelSet{lvl, vs}, level);
    out.vertices.insert(out.vertices.end(), part.vertices.begin(), part.vertices.end());
  }
  sort_unique(out.vertices);
  return out;
}

// ---------------------------------------------------------------- analysis

TwinnedAnalysis::TwinnedAnalysis(const TwinnedSequence& ts) : ts_(ts) {}

const Relation& TwinnedAnalysis::f_relation(std::size_t n) {
  auto it = f_rel_.find(n);
  if (it == f_rel_.end()) it = f_rel_.emplace(n, f_relation_at_depth(ts_, n)).first;
  return it->second;
}

const Relation& TwinnedAnalysis::g_relation(std::size_t n) {
  auto it = g_rel_.find(n);
  if (it == g_rel_.end()) it = g_rel_.emplace(n, g_relation_at_depth(ts_, n)).first;
  return it->second;
}

const Partition& TwinnedAnalysis::partition(std::size_t n) {
  auto it = parts_.find(n);
  if (it == parts_.end()) it = parts_.emplace(n, equivalence_closure(f_relation(n))).first;
  return it->second;
}

LevelSet TwinnedAnalysis::at_level(const LevelSet& a, std::size_t level) const { return rewrite_at(ts_, a, level); }

LevelSet TwinnedAnalysis::bar(const LevelSet& a, std::size_t i) {
  if (!ts_.shares_vertices(i)) throw StructuralError("F-level " + std::to_string(i) + " has a foreign vertex set");
  LevelSet base = at_level(a, i);
  const Graph& f = ts_.f_level(i);
  LevelSet out{i, {}};
  for (VertexId v : base.vertices) {
    auto nb = f.out(v);
    out.vertices.insert(out.vertices.end(), nb.begin(), nb.end());
  }
  sort_unique(out.vertices);
  return out;
}

LevelSet TwinnedAnalysis::bar(const Thread& x, std::size_t j) {
  if (j > x.depth) throw StructuralError("neighbourhood level exceeds thread depth");
  return bar(LevelSet{x.depth, {x.last}}, j);
}

LevelSet TwinnedAnalysis::bar_iter(const Thread& x, std::size_t j, std::size_t i) {
  if (i < j) throw StructuralError("bar_iter needs j <= i");
  LevelSet s = bar(x, j);
  for (std::size_t m = j + 1; m <= i; ++m) s = bar(s, m);
  return s;
}

CylinderUnion TwinnedAnalysis::tilde(const Thread& x, std::size_t j, std::size_t cap) {
  if (cap < j) throw StructuralError("tilde needs j <= cap");
  CylinderUnion u;
  LevelSet s = bar(x, j);
  u.add(ts_, s);
  for (std::size_t m = j + 1; m <= cap; ++m) {
    s = bar(s, m);
    u.add(ts_, s);
  }
  return u;
}

LevelSet TwinnedAnalysis::successors(const LevelSet& a) {
  if (a.level == 0) throw StructuralError("successors of level-0 cylinders drop below level 0");
  const Graph& g = ts_.g_level(a.level);
  const GraphHom& phi = ts_.bond(a.level);
  LevelSet out{a.level - 1, {}};
  for (VertexId v : a.vertices)
    for (VertexId y : g.out(v)) out.vertices.push_back(phi(y));
  sort_unique(out.vertices);
  return out;
}

ClassAtDepth TwinnedAnalysis::t_step(const ClassAtDepth& c) {
  const std::size_t n = c.depth;
  if (n == 0) throw StructuralError("t_step needs depth >= 1");
  const Relation& g = g_relation(n);
  const Partition& lower = partition(n - 1);
  const GraphHom& phi = ts_.bond(n);
  std::optional<std::uint32_t> target;
  for (VertexId x : c.members) {
    auto succ = g.row(x);
    if (succ.empty()) throw AxiomViolation("thread ending at " + ts_.g_level(n).label(x) + " has no successor");
    for (VertexId y : succ) {
      std::uint32_t k = lower.class_of[phi(y)];
      if (!target) target = k;
      else if (*target != k)
        throw AxiomViolation("T not well defined: successor " + ts_.g_level(n).label(y) + " of " +
                             ts_.g_level(n).label(x) + " leaves the class");
    }
  }
  const auto& members = lower.classes[*target];
  return {n - 1, members, members.front()};
}

ClassAtDepth TwinnedAnalysis::star(const Thread& x) {
  auto row = f_relation(x.depth).row(x.last);
  return {x.depth, {row.begin(), row.end()}, x.last};
}

ClassAtDepth TwinnedAnalysis::t_step_star(const Thread& x) {
  const std::size_t n = x.depth;
  if (n == 0) throw StructuralError("t_step needs depth >= 1");
  const Relation& g = g_relation(n);
  const GraphHom& phi = ts_.bond(n);
  auto succ = g.row(x.last);
  if (succ.empty()) throw AxiomViolation("thread ending at " + ts_.g_level(n).label(x.last) + " has no successor");
  ClassAtDepth result = star(Thread{n - 1, phi(succ.front())});
  for (VertexId m : star(x).members)
    for (VertexId y : g.row(m))
      if (!result.contains(phi(y)))
        throw AxiomViolation("T not well defined: successor " + ts_.g_level(n).label(y) + " of " +
                             ts_.g_level(n).label(m) + " leaves the neighbourhood");
  return result;
}

Check TwinnedAnalysis::continuity(const Thread& x, std::size_t k, std::size_t cap) {
  if (k + 1 > cap || cap > ts_.depth()) throw StructuralError("continuity_check needs k+1 <= cap <= depth");
  if (x.depth < k + 1) throw StructuralError("continuity_check needs a thread of depth >= k+1");
  LevelSet image_of_x = successors(LevelSet{x.depth, {x.last}});
  LevelSet lhs_base = bar(x, k + 1);
  LevelSet rhs = bar(image_of_x, k);
  for (std::size_t i = k + 1; i <= cap; ++i) {
    if (i > k + 1) {
      lhs_base = bar(lhs_base, i);
      rhs = bar(rhs, i - 1);
    }
    LevelSet lhs = successors(lhs_base);
    if (!rhs.includes(lhs)) {
      for (VertexId v : lhs.vertices)
        if (!rhs.contains(v))
          return Check::fail("continuity", "i=" + std::to_string(i) + " vertex " + ts_.g_level(i - 1).label(v) +
                                               " in E_G(Cbar(x,k+1,i)) outside Cbar(E_G x,k,i-1)");
    }
  }
  return Check::pass();
}

Check TwinnedAnalysis::saturation(const Thread& x, std::size_t j, std::size_t cap) {
  if (j >= cap || cap > ts_.depth()) throw StructuralError("saturation_check needs j < cap <= depth");
  LevelSet inner = tilde(x, j, cap - 1).at_level(ts_, cap);
  LevelSet outer = tilde(x, j, cap).at_level(ts_, cap);
  const Relation& f = f_relation(cap);
  for (VertexId u : inner.vertices)
    for (VertexId y : f.row(u))
      if (!outer.contains(y))
        return Check::fail("saturation", "thread " + ts_.g_level(cap).label(y) + " related to member " +
                                             ts_.g_level(cap).label(u) + " escapes");
  return Check::pass();
}

ClassAtDepth t_step(const TwinnedSequence& ts, const ClassAtDepth& c) { return TwinnedAnalysis(ts).t_step(c); }

LevelSet nbhd_bar(const TwinnedSequence& ts, const Thread& x, std::size_t j) { return TwinnedAnalysis(ts).bar(x, j); }

LevelSet nbhd_bar_iter(const TwinnedSequence& ts, const Thread& x, std::size_t j, std::size_t i) {
  return TwinnedAnalysis(ts).bar_iter(x, j, i);
}

CylinderUnion nbhd_tilde(const TwinnedSequence& ts, const Thread& x, std::size_t j, std::size_t cap) {
  return TwinnedAnalysis(ts).tilde(x, j, cap);
}

Check continuity_check(const TwinnedSequence& ts, const Thread& x, std::size_t k, std::size_t cap) {
  return TwinnedAnalysis(ts).continuity(x, k, cap);
}

Check saturation_check(const TwinnedSequence& ts, const Thread& x, std::size_t j, std::size_t cap) {
  return TwinnedAnalysis(ts).saturation(x, j, cap);
}

Check ds3b_projection_check(const TwinnedSequence& ts, std::size_t n) {
  if (n == 0 || n > ts.depth()) throw StructuralError("ds3b_projection_check needs 1 <= n <= depth");
  Relation upper = f_relation_at_depth(ts, n);
  Relation lower = f_relation_at_depth(ts, n - 1);
  const GraphHom& phi = ts.bond(n);
  for (VertexId b = 0; b < upper.left_size(); ++b) {
    std::vector<VertexId> proj;
    for (VertexId a : upper.row(b)) proj.push_back(phi(a));
    sort_unique(proj);
    for (VertexId pa : proj)
      for (VertexId pc : proj)
        if (!lower.contains(pa, pc))
          return Check::fail("DS3b_projection", "chain through " + ts.g_level(n).label(b) + " projects to " +
                                                    edge_witness(ts.g_level(n - 1), pa, pc));
  }
  return Check::pass();
}

}  // namespace twinlim
