#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "twinlim/errors.hpp"

namespace twinlim {

using VertexId = std::uint32_t;
using Edge = std::pair<VertexId, VertexId>;

enum class GraphKind { directed, symmetric };

std::string_view to_string(GraphKind kind);
GraphKind graph_kind_from_string(std::string_view s);

/// Binary relation between two finite index sets [0, left) and [0, right).
/// Rows are kept sorted and deduplicated.
class Relation {
 public:
  Relation() = default;
  Relation(std::size_t left, std::size_t right);

  static Relation identity(std::size_t n);

  void add(VertexId a, VertexId b);
  /// Sorts and deduplicates rows; call after a batch of add().
  void normalize();

  bool contains(VertexId a, VertexId b) const;
  std::size_t left_size() const { return rows_.size(); }
  std::size_t right_size() const { return right_; }
  std::size_t pair_count() const;
  std::span<const VertexId> row(VertexId a) const { return rows_[a]; }
  std::vector<Edge> pairs() const;

  bool operator==(const Relation& other) const = default;

 private:
  std::size_t right_ = 0;
  std::vector<std::vector<VertexId>> rows_;
};

/// Image Rv of a single element. Throws StructuralError if v is outside the left domain.
std::vector<VertexId> relation_image(const Relation& r, VertexId v);

/// The relation QR: (v,u) iff (v,w) in R and (w,u) in Q for some w.
Relation compose_relations(const Relation& q, const Relation& r);

/// Partition of [0, n) into classes; class ids are ordered by smallest member.
struct Partition {
  std::vector<std::uint32_t> class_of;
  std::vector<std::vector<VertexId>> classes;

  std::size_t size() const { return classes.size(); }
  bool same(VertexId a, VertexId b) const { return class_of[a] == class_of[b]; }
};

/// Reflexive-symmetric-transitive closure of a relation on one set, as a partition.
Partition equivalence_closure(const Relation& r);

/// Finite graph over vertices 0..n-1 with string labels. Symmetric graphs
/// store both orientations of every edge.
class Graph {
 public:
  Graph() = default;
  Graph(std::vector<std::string> labels, const std::vector<Edge>& edges, GraphKind kind);

  /// Labels "0", "1", ... for quick construction in code.
  static Graph with_indices(std::size_t n, const std::vector<Edge>& edges, GraphKind kind = GraphKind::directed);

  std::size_t size() const { return labels_.size(); }
  GraphKind kind() const { return kind_; }
  const std::string& label(VertexId v) const { return labels_.at(v); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<VertexId> find(std::string_view label) const;
  VertexId at(std::string_view label) const;

  std::span<const VertexId> out(VertexId v) const { return adj_.row(v); }
  std::span<const VertexId> in(VertexId v) const { return rev_.row(v); }
  bool has_edge(VertexId u, VertexId v) const { return adj_.contains(u, v); }
  std::size_t edge_count() const { return adj_.pair_count(); }
  std::vector<Edge> edges() const { return adj_.pairs(); }
  const Relation& relation() const { return adj_; }

  /// Same vertices, one edge removed (both orientations when symmetric).
  Graph without_edge(VertexId u, VertexId v) const;

  bool operator==(const Graph& other) const;

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, VertexId> index_;
  GraphKind kind_ = GraphKind::directed;
  Relation adj_;
  Relation rev_;
};

/// Vertex map between two graphs; which graphs it relates is supplied by the caller.
struct GraphHom {
  std::vector<VertexId> map;

  VertexId operator()(VertexId v) const { return map[v]; }
  bool operator==(const GraphHom&) const = default;
};

/// Throws StructuralError unless hom is total on source and lands in target.
void require_well_formed(const Graph& source, const Graph& target, const GraphHom& hom);

GraphHom identity_hom(const Graph& g);

/// (outer . inner): apply inner first.
GraphHom compose(const GraphHom& outer, const GraphHom& inner);

/// Outcome of an axiom check with the first witness found.
struct Check {
  bool ok = true;
  std::string code;
  std::string witness;

  explicit operator bool() const { return ok; }
  static Check pass() { return {}; }
  static Check fail(std::string code, std::string witness) { return {false, std::move(code), std::move(witness)}; }
};

Check is_homomorphism(const Graph& source, const Graph& target, const GraphHom& hom);
Check is_edge_surjective_graph(const Graph& g);

/// Throw AxiomViolation when hom is not a homomorphism.
Check is_edge_surjective_hom(const Graph& source, const Graph& target, const GraphHom& hom);
Check is_plus_directional(const Graph& source, const Graph& target, const GraphHom& hom);

/// Edge-surjective source and target, homomorphism, +directional, edge-surjective.
/// Codes: source_not_edge_surjective, target_not_edge_surjective,
/// not_homomorphism, not_plus_directional, not_edge_surjective_hom.
Check is_graph_cover(const Graph& source, const Graph& target, const GraphHom& hom);

std::string edge_witness(const Graph& g, VertexId u, VertexId v);

}  // namespace twinlim
