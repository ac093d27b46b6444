#pragma once

#include <string>
#include <vector>

#include "twinlim/graph.hpp"

namespace twinlim {

enum class SequenceKind { homomorphisms, covers };

std::string_view to_string(SequenceKind kind);
SequenceKind sequence_kind_from_string(std::string_view s);

/// One violated axiom at one level, with its witness.
struct Violation {
  std::string axiom;
  std::size_t level = 0;
  std::string witness;
};

struct Report {
  std::vector<Violation> violations;
  /// Human readable PASS/FAIL lines, one per (axiom, level).
  std::vector<std::string> lines;

  bool ok() const { return violations.empty(); }
  void record(const std::string& axiom, std::size_t level, const Check& c);
};

/// Inverse sequence G_0 <- G_1 <- ... <- G_N. bond(i) maps level i to level i-1.
class GraphSequence {
 public:
  GraphSequence() = default;
  /// bonding.size() must equal levels.size() - 1; bonding[k] maps levels[k+1] -> levels[k].
  GraphSequence(std::vector<Graph> levels, std::vector<GraphHom> bonding, SequenceKind kind);

  std::size_t depth() const { return levels_.size() - 1; }
  SequenceKind kind() const { return kind_; }
  const Graph& level(std::size_t i) const { return levels_.at(i); }
  const std::vector<Graph>& levels() const { return levels_; }
  const GraphHom& bond(std::size_t i) const { return bonding_.at(i - 1); }
  const std::vector<GraphHom>& bonding() const { return bonding_; }

  /// Level-i vertex above v at level n (i <= n).
  VertexId project(VertexId v, std::size_t n, std::size_t i) const;

 private:
  std::vector<Graph> levels_;
  std::vector<GraphHom> bonding_;
  SequenceKind kind_ = SequenceKind::homomorphisms;
};

/// A depth-n compatible tuple, stored as its last vertex; the prefix is forced.
/// Equivalently the cylinder of all limit points through that vertex.
struct Thread {
  std::size_t depth = 0;
  VertexId last = 0;

  bool operator==(const Thread&) const = default;
  auto operator<=>(const Thread&) const = default;
};

/// Full tuple (x_0, ..., x_n) along any sequence of bonding maps.
template <class Seq>
std::vector<VertexId> thread_path(const Seq& s, const Thread& t) {
  std::vector<VertexId> path(t.depth + 1);
  VertexId v = t.last;
  for (std::size_t i = t.depth;; --i) {
    path[i] = v;
    if (i == 0) break;
    v = s.bond(i)(v);
  }
  return path;
}

Report validate_sequence(const GraphSequence& s);

std::vector<Thread> enumerate_threads(const GraphSequence& s, std::size_t n);

/// Pairs of depth-n threads related by an edge at every level 0..n.
/// Indices are level-n vertex ids.
Relation thread_edge_relation(const GraphSequence& s, std::size_t n);

/// The unique depth-(n-1) successor of a depth-n thread in a cover sequence.
/// Throws AxiomViolation when out-edge choices disagree.
Thread cover_successor(const GraphSequence& s, const Thread& t);

/// Every depth-(n-1) thread is the successor of some depth-n thread.
Check surjectivity_at_depth(const GraphSequence& s, std::size_t n);

}  // namespace twinlim
