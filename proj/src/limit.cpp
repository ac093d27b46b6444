#include "twinlim/limit.hpp"

namespace twinlim {

std::string_view to_string(SequenceKind kind) {
  return kind == SequenceKind::covers ? "covers" : "homomorphisms";
}

SequenceKind sequence_kind_from_string(std::string_view s) {
  if (s == "covers") return SequenceKind::covers;
  if (s == "homomorphisms") return SequenceKind::homomorphisms;
  throw StructuralError("unknown sequence kind '" + std::string(s) + "'");
}

void Report::record(const std::string& axiom, std::size_t level, const Check& c) {
  std::string line = axiom + " level " + std::to_string(level) + ": " + (c.ok ? "PASS" : "FAIL");
  if (!c.ok) {
    line += " " + c.witness;
    violations.push_back({axiom, level, c.witness});
  }
  lines.push_back(std::move(line));
}

GraphSequence::GraphSequence(std::vector<Graph> levels, std::vector<GraphHom> bonding, SequenceKind kind)
    : levels_(std::move(levels)), bonding_(std::move(bonding)), kind_(kind) {
  if (levels_.empty()) throw StructuralError("graph sequence needs at least one level");
  if (bonding_.size() + 1 != levels_.size())
    throw StructuralError("graph sequence has " + std::to_string(levels_.size()) + " levels but " +
                          std::to_string(bonding_.size()) + " bonding maps");
  for (std::size_t i = 1; i < levels_.size(); ++i) require_well_formed(levels_[i], levels_[i - 1], bond(i));
}

VertexId GraphSequence::project(VertexId v, std::size_t n, std::size_t i) const {
  for (std::size_t k = n; k > i; --k) v = bond(k)(v);
  return v;
}

Report validate_sequence(const GraphSequence& s) {
  Report r;
  const bool covers = s.kind() == SequenceKind::covers;
  if (covers)
    for (std::size_t i = 0; i <= s.depth(); ++i) r.record("edge_surjective_graph", i, is_edge_surjective_graph(s.level(i)));
  for (std::size_t i = 1; i <= s.depth(); ++i) {
    const Graph& src = s.level(i);
    const Graph& dst = s.level(i - 1);
    if (covers) {
      r.record("graph_cover", i, is_graph_cover(src, dst, s.bond(i)));
    } else {
      r.record("homomorphism", i, is_homomorphism(src, dst, s.bond(i)));
    }
  }
  return r;
}

std::vector<Thread> enumerate_threads(const GraphSequence& s, std::size_t n) {
  if (n > s.depth()) throw StructuralError("depth " + std::to_string(n) + " exceeds sequence depth");
  std::vector<Thread> out;
  out.reserve(s.level(n).size());
  for (VertexId v = 0; v < s.level(n).size(); ++v) out.push_back({n, v});
  return out;
}

Relation thread_edge_relation(const GraphSequence& s, std::size_t n) {
  if (n > s.depth()) throw StructuralError("depth " + std::to_string(n) + " exceeds sequence depth");
  const Graph& top = s.level(n);
  Relation r(top.size(), top.size());
  for (auto [u, v] : top.edges()) {
    bool all = true;
    VertexId a = u, b = v;
    for (std::size_t i = n; i > 0 && all; --i) {
      a = s.bond(i)(a);
      b = s.bond(i)(b);
      all = s.level(i - 1).has_edge(a, b);
    }
    if (all) r.add(u, v);
  }
  r.normalize();
  return r;
}

Thread cover_successor(const GraphSequence& s, const Thread& t) {
  if (t.depth == 0 || t.depth > s.depth()) throw StructuralError("cover_successor needs 1 <= depth <= sequence depth");
  const Graph& g = s.level(t.depth);
  auto outs = g.out(t.last);
  if (outs.empty()) throw AxiomViolation("vertex " + g.label(t.last) + " has no outgoing edge");
  const GraphHom& phi = s.bond(t.depth);
  const VertexId image = phi(outs.front());
  for (VertexId w : outs)
    if (phi(w) != image)
      throw AxiomViolation("successor not unique at " + edge_witness(g, t.last, outs.front()) + "," +
                           edge_witness(g, t.last, w));
  return {t.depth - 1, image};
}

Check surjectivity_at_depth(const GraphSequence& s, std::size_t n) {
  if (n == 0 || n > s.depth()) throw StructuralError("surjectivity_at_depth needs 1 <= n <= depth");
  std::vector<bool> hit(s.level(n - 1).size(), false);
  for (const Thread& t : enumerate_threads(s, n)) hit[cover_successor(s, t).last] = true;
  for (VertexId w = 0; w < hit.size(); ++w)
    if (!hit[w]) return Check::fail("not_surjective", s.level(n - 1).label(w));
  return Check::pass();
}

}  // namespace twinlim
