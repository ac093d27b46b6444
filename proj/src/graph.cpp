#include "twinlim/graph.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace twinlim {

std::string_view to_string(GraphKind kind) {
  return kind == GraphKind::directed ? "directed" : "symmetric";
}

GraphKind graph_kind_from_string(std::string_view s) {
  if (s == "directed") return GraphKind::directed;
  if (s == "symmetric") return GraphKind::symmetric;
  throw StructuralError("unknown graph kind '" + std::string(s) + "'");
}

// ---------------------------------------------------------------- Relation

Relation::Relation(std::size_t left, std::size_t right) : right_(right), rows_(left) {}

Relation Relation::identity(std::size_t n) {
  Relation r(n, n);
  for (VertexId v = 0; v < n; ++v) r.rows_[v].push_back(v);
  return r;
}

void Relation::add(VertexId a, VertexId b) {
  if (a >= rows_.size() || b >= right_) throw StructuralError("relation pair outside its domains");
  rows_[a].push_back(b);
}

void Relation::normalize() {
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
}

bool Relation::contains(VertexId a, VertexId b) const {
  if (a >= rows_.size()) return false;
  return std::binary_search(rows_[a].begin(), rows_[a].end(), b);
}

std::size_t Relation::pair_count() const {
  std::size_t n = 0;
  for (const auto& row : rows_) n += row.size();
  return n;
}

std::vector<Edge> Relation::pairs() const {
  std::vector<Edge> out;
  out.reserve(pair_count());
  for (VertexId a = 0; a < rows_.size(); ++a)
    for (VertexId b : rows_[a]) out.emplace_back(a, b);
  return out;
}

std::vector<VertexId> relation_image(const Relation& r, VertexId v) {
  if (v >= r.left_size()) throw StructuralError("element outside the relation's left domain");
  auto row = r.row(v);
  return {row.begin(), row.end()};
}

Relation compose_relations(const Relation& q, const Relation& r) {
  if (r.right_size() != q.left_size())
    throw StructuralError("cannot compose relations: right domain of R differs from left domain of Q");
  Relation out(r.left_size(), q.right_size());
  for (VertexId v = 0; v < r.left_size(); ++v)
    for (VertexId w : r.row(v))
      for (VertexId u : q.row(w)) out.add(v, u);
  out.normalize();
  return out;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  VertexId find(VertexId x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // smaller root wins so the representative is the minimum member
  void merge(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<VertexId> parent_;
};

}  // namespace

Partition equivalence_closure(const Relation& r) {
  const std::size_t n = r.left_size();
  if (r.right_size() != n) throw StructuralError("equivalence closure needs a relation on one set");
  UnionFind uf(n);
  for (VertexId a = 0; a < n; ++a)
    for (VertexId b : r.row(a)) uf.merge(a, b);

  Partition p;
  p.class_of.assign(n, 0);
  std::vector<std::int64_t> slot(n, -1);
  for (VertexId v = 0; v < n; ++v) {
    VertexId root = uf.find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<std::int64_t>(p.classes.size());
      p.classes.emplace_back();
    }
    p.class_of[v] = static_cast<std::uint32_t>(slot[root]);
    p.classes[slot[root]].push_back(v);
  }
  return p;
}

// ---------------------------------------------------------------- Graph

Graph::Graph(std::vector<std::string> labels, const std::vector<Edge>& edges, GraphKind kind)
    : labels_(std::move(labels)), kind_(kind), adj_(labels_.size(), labels_.size()), rev_(labels_.size(), labels_.size()) {
  index_.reserve(labels_.size());
  for (VertexId v = 0; v < labels_.size(); ++v) {
    if (!index_.emplace(labels_[v], v).second) throw StructuralError("duplicate vertex label '" + labels_[v] + "'");
  }
  for (auto [u, v] : edges) {
    if (u >= labels_.size() || v >= labels_.size()) throw StructuralError("edge endpoint is not a vertex");
    adj_.add(u, v);
    rev_.add(v, u);
  }
  adj_.normalize();
  rev_.normalize();
  if (kind_ == GraphKind::symmetric) {
    for (auto [u, v] : edges)
      if (!adj_.contains(v, u))
        throw StructuralError("symmetric graph is missing reverse edge of " + edge_witness(*this, u, v));
  }
}

Graph Graph::with_indices(std::size_t n, const std::vector<Edge>& edges, GraphKind kind) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
  return Graph(std::move(labels), edges, kind);
}

std::optional<VertexId> Graph::find(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId Graph::at(std::string_view label) const {
  auto v = find(label);
  if (!v) throw StructuralError("unknown vertex '" + std::string(label) + "'");
  return *v;
}

Graph Graph::without_edge(VertexId u, VertexId v) const {
  std::vector<Edge> kept;
  for (auto e : edges()) {
    if (e == Edge{u, v}) continue;
    if (kind_ == GraphKind::symmetric && e == Edge{v, u}) continue;
    kept.push_back(e);
  }
  return Graph(labels_, kept, kind_);
}

bool Graph::operator==(const Graph& other) const {
  return kind_ == other.kind_ && labels_ == other.labels_ && adj_ == other.adj_;
}

std::string edge_witness(const Graph& g, VertexId u, VertexId v) {
  return "(" + g.label(u) + "," + g.label(v) + ")";
}

// ---------------------------------------------------------------- homomorphisms

void require_well_formed(const Graph& source, const Graph& target, const GraphHom& hom) {
  if (hom.map.size() != source.size())
    throw StructuralError("vertex map has " + std::to_string(hom.map.size()) + " entries for " +
                          std::to_string(source.size()) + " source vertices");
  for (VertexId v = 0; v < hom.map.size(); ++v)
    if (hom.map[v] >= target.size())
      throw StructuralError("vertex " + source.label(v) + " maps outside the target graph");
}

GraphHom identity_hom(const Graph& g) {
  GraphHom h;
  h.map.resize(g.size());
  std::iota(h.map.begin(), h.map.end(), 0u);
  return h;
}

GraphHom compose(const GraphHom& outer, const GraphHom& inner) {
  GraphHom h;
  h.map.reserve(inner.map.size());
  for (VertexId w : inner.map) {
    if (w >= outer.map.size()) throw StructuralError("homomorphisms are not composable");
    h.map.push_back(outer.map[w]);
  }
  return h;
}

Check is_homomorphism(const Graph& source, const Graph& target, const GraphHom& hom) {
  require_well_formed(source, target, hom);
  for (VertexId u = 0; u < source.size(); ++u)
    for (VertexId v : source.out(u))
      if (!target.has_edge(hom(u), hom(v)))
        return Check::fail("not_homomorphism", edge_witness(source, u, v) + " -> " + edge_witness(target, hom(u), hom(v)));
  return Check::pass();
}

Check is_edge_surjective_graph(const Graph& g) {
  for (VertexId v = 0; v < g.size(); ++v) {
    if (g.in(v).empty()) return Check::fail("no_incoming_edge", g.label(v));
    if (g.out(v).empty()) return Check::fail("no_outgoing_edge", g.label(v));
  }
  return Check::pass();
}

namespace {

void require_homomorphism(const Graph& source, const Graph& target, const GraphHom& hom) {
  if (auto c = is_homomorphism(source, target, hom); !c)
    throw AxiomViolation("not a graph homomorphism: " + c.witness);
}

}  // namespace

Check is_edge_surjective_hom(const Graph& source, const Graph& target, const GraphHom& hom) {
  require_homomorphism(source, target, hom);
  Relation hit(target.size(), target.size());
  for (VertexId u = 0; u < source.size(); ++u)
    for (VertexId v : source.out(u)) hit.add(hom(u), hom(v));
  hit.normalize();
  for (auto [a, b] : target.edges())
    if (!hit.contains(a, b)) return Check::fail("not_edge_surjective_hom", edge_witness(target, a, b));
  return Check::pass();
}

Check is_plus_directional(const Graph& source, const Graph& target, const GraphHom& hom) {
  require_homomorphism(source, target, hom);
  for (VertexId u = 0; u < source.size(); ++u) {
    auto outs = source.out(u);
    for (VertexId w : outs)
      if (hom(w) != hom(outs.front()))
        return Check::fail("not_plus_directional",
                           edge_witness(source, u, outs.front()) + "," + edge_witness(source, u, w));
  }
  return Check::pass();
}

Check is_graph_cover(const Graph& source, const Graph& target, const GraphHom& hom) {
  if (auto c = is_edge_surjective_graph(source); !c) return Check::fail("source_not_edge_surjective", c.witness);
  if (auto c = is_edge_surjective_graph(target); !c) return Check::fail("target_not_edge_surjective", c.witness);
  if (auto c = is_homomorphism(source, target, hom); !c) return c;
  if (auto c = is_plus_directional(source, target, hom); !c) return c;
  return is_edge_surjective_hom(source, target, hom);
}

}  // namespace twinlim
