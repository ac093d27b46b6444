#pragma once

#include <map>
#include <optional>
#include <vector>

#include "twinlim/limit.hpp"

namespace twinlim {

/// Paired inverse sequences: directed G-levels (dynamics) and symmetric
/// F-levels (proximity) on shared vertex sets and bonding maps.
class TwinnedSequence {
 public:
  TwinnedSequence() = default;
  /// Throws StructuralError on length mismatch or a bonding map that is not
  /// total between consecutive G-levels. F-levels whose vertex set differs
  /// from the G-level are kept as given and reported by validate_twinned.
  TwinnedSequence(std::vector<Graph> g_levels, std::vector<Graph> f_levels, std::vector<GraphHom> bonding);

  std::size_t depth() const { return g_.size() - 1; }
  const Graph& g_level(std::size_t i) const { return g_.at(i); }
  const Graph& f_level(std::size_t i) const { return f_.at(i); }
  const std::vector<Graph>& g_levels() const { return g_; }
  const std::vector<Graph>& f_levels() const { return f_; }
  const GraphHom& bond(std::size_t i) const { return bonding_.at(i - 1); }
  const std::vector<GraphHom>& bonding() const { return bonding_; }

  /// Level-(i+1) vertices mapped onto v by bond(i+1).
  std::span<const VertexId> children(std::size_t i, VertexId v) const { return children_.at(i).row(v); }

  VertexId project(VertexId v, std::size_t n, std::size_t i) const;
  /// True when F-level i has exactly the vertex set of G-level i.
  bool shares_vertices(std::size_t i) const { return shared_.at(i); }

  GraphSequence g_sequence() const;

 private:
  std::vector<Graph> g_;
  std::vector<Graph> f_;
  std::vector<GraphHom> bonding_;
  std::vector<Relation> children_;
  std::vector<bool> shared_;
};

/// Checks DS0, DS1, DS2, DS3, DS3b exhaustively at every level.
Report validate_twinned(const TwinnedSequence& ts);

/// Raw F-relation on depth-n threads: F-edges at every level 0..n.
Relation f_relation_at_depth(const TwinnedSequence& ts, std::size_t n);
/// E_G restricted to depth-n threads.
Relation g_relation_at_depth(const TwinnedSequence& ts, std::size_t n);

struct ClassAtDepth {
  std::size_t depth = 0;
  std::vector<VertexId> members;  // level-`depth` vertex ids, sorted
  VertexId representative = 0;

  bool contains(VertexId v) const;
  bool operator==(const ClassAtDepth& o) const { return depth == o.depth && members == o.members; }
};

/// Classes of the equivalence closure of the raw depth-n F-relation.
std::vector<ClassAtDepth> quotient_at_depth(const TwinnedSequence& ts, std::size_t n);

/// Raw F-neighbourhood of a single thread at its own depth. Where the raw
/// relation is transitive this is the closure class; otherwise it is the
/// finite-depth picture of the class of that thread in the limit.
ClassAtDepth star_at_depth(const TwinnedSequence& ts, const Thread& x);

/// Union of a set of level-`level` cylinders.
struct LevelSet {
  std::size_t level = 0;
  std::vector<VertexId> vertices;  // sorted, unique

  bool contains(VertexId v) const;
  bool includes(const LevelSet& other) const;
  bool operator==(const LevelSet&) const = default;
};

/// Union of cylinders at mixed levels; normalized so that no marker lies
/// inside a coarser marker.
class CylinderUnion {
 public:
  CylinderUnion() = default;
  void add(const TwinnedSequence& ts, const LevelSet& s);
  /// All level-`level` vertices whose cylinder meets (level below markers)
  /// or lies in (level above markers) the union.
  LevelSet at_level(const TwinnedSequence& ts, std::size_t level) const;
  const std::map<std::size_t, std::vector<VertexId>>& markers() const { return markers_; }
  bool operator==(const CylinderUnion&) const = default;

 private:
  std::map<std::size_t, std::vector<VertexId>> markers_;
};

/// Caches per-depth relations and closure partitions for repeated queries
/// against one sequence. Holds a reference; the sequence must outlive it.
class TwinnedAnalysis {
 public:
  explicit TwinnedAnalysis(const TwinnedSequence& ts);

  const TwinnedSequence& sequence() const { return ts_; }
  const Relation& f_relation(std::size_t n);
  const Relation& g_relation(std::size_t n);
  const Partition& partition(std::size_t n);

  /// Rewrite a cylinder union at another level: projection upward,
  /// descendants downward.
  LevelSet at_level(const LevelSet& a, std::size_t level) const;

  /// C-bar(A, i): level-i cylinders F_i-adjacent to a point of A.
  LevelSet bar(const LevelSet& a, std::size_t i);
  LevelSet bar(const Thread& x, std::size_t j);
  /// C-bar(x, j, i) for j <= i.
  LevelSet bar_iter(const Thread& x, std::size_t j, std::size_t i);
  /// C-tilde(x, j) truncated at cap.
  CylinderUnion tilde(const Thread& x, std::size_t j, std::size_t cap);

  /// E_G applied to a union of level-i cylinders; lands at level i-1.
  LevelSet successors(const LevelSet& a);

  ClassAtDepth t_step(const ClassAtDepth& c);
  ClassAtDepth star(const Thread& x);
  /// T on raw neighbourhoods: star of the canonical successor, checked
  /// against every member's successors.
  ClassAtDepth t_step_star(const Thread& x);

  Check continuity(const Thread& x, std::size_t k, std::size_t cap);
  Check saturation(const Thread& x, std::size_t j, std::size_t cap);

 private:
  const TwinnedSequence& ts_;
  std::map<std::size_t, Relation> f_rel_;
  std::map<std::size_t, Relation> g_rel_;
  std::map<std::size_t, Partition> parts_;
};

/// One step of T on closure classes; depth n class to depth n-1 class.
/// Throws AxiomViolation when member/successor choices disagree.
ClassAtDepth t_step(const TwinnedSequence& ts, const ClassAtDepth& c);

LevelSet nbhd_bar(const TwinnedSequence& ts, const Thread& x, std::size_t j);
LevelSet nbhd_bar_iter(const TwinnedSequence& ts, const Thread& x, std::size_t j, std::size_t i);
CylinderUnion nbhd_tilde(const TwinnedSequence& ts, const Thread& x, std::size_t j, std::size_t cap);

/// Checks E_G(C-bar(x,k+1,i)) inside C-bar(E_G x, k, i-1) for i = k+1..cap.
Check continuity_check(const TwinnedSequence& ts, const Thread& x, std::size_t k, std::size_t cap);

/// Every depth-cap thread F-related at depth cap to a member of C-tilde(x,j)
/// truncated at cap-1 lies in C-tilde(x,j) truncated at cap. Needs j < cap.
Check saturation_check(const TwinnedSequence& ts, const Thread& x, std::size_t j, std::size_t cap);

/// Transitive chains of the raw depth-n F-relation project into the raw
/// depth-(n-1) relation.
Check ds3b_projection_check(const TwinnedSequence& ts, std::size_t n);

}  // namespace twinlim
