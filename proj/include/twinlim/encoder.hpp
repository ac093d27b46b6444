#pragma once

#include <cstdint>
#include <vector>

#include "twinlim/limit.hpp"
#include "twinlim/systems.hpp"
#include "twinlim/twinned.hpp"

namespace twinlim {

/// Vertex of G_i/F_i: a level-i cover element listed under one level-(i-1)
/// vertex whose set contains it. The same set under two parents is two vertices.
struct TaggedVertex {
  std::size_t level = 0;
  VertexId parent = 0;
  std::uint32_t set_id = 0;

  bool operator==(const TaggedVertex&) const = default;
};

template <class Set>
struct CoverLevel {
  std::vector<Set> cover;
  /// max{mesh f(cover), mesh cover}
  Rational epsilon;
  /// Refinement parameter the cover was generated with (0 for level 0).
  unsigned granularity = 0;
};

template <class Backend>
struct Encoding {
  using Set = typename Backend::Set;

  Backend system;
  std::vector<CoverLevel<Set>> levels;
  TwinnedSequence twinned;
  std::vector<std::vector<TaggedVertex>> vertex_table;

  std::size_t depth() const { return levels.size() - 1; }
  /// Underlying set of a vertex.
  const Set& set_of(std::size_t level, VertexId v) const { return levels[level].cover[vertex_table[level][v].set_id]; }
};

struct EncodeOptions {
  /// Hard ceiling on refinement attempts per level before giving up.
  unsigned max_attempts = 4096;
};

/// {(U,V) : f(U) meets V}, indices into `cover`.
template <class Backend>
Relation f_relation(const Backend& b, const std::vector<typename Backend::Set>& cover);

template <class Backend>
Rational level_epsilon(const Backend& b, const std::vector<typename Backend::Set>& cover);

/// C1, C2, C3, C5 and the epsilon bookkeeping at every level.
template <class Backend>
Report verify_conditions(const Backend& b, const std::vector<CoverLevel<typename Backend::Set>>& levels);

/// Conditions for level i against level i-1 only (i >= 1).
template <class Backend>
Report verify_level(const Backend& b, const CoverLevel<typename Backend::Set>& previous,
                    const CoverLevel<typename Backend::Set>& current, std::size_t i);

/// Next cover, searched over the backend's granularity schedule until the
/// level conditions hold. Throws RefinementCapExceeded with the last failure.
template <class Backend>
CoverLevel<typename Backend::Set> refine_cover(const Backend& b, const CoverLevel<typename Backend::Set>& previous,
                                               std::size_t i, const EncodeOptions& opts = {});

struct BuiltLevel {
  Graph g;
  Graph f;
  GraphHom bond;  // into the previous level; empty at level 0
  std::vector<TaggedVertex> vertices;
};

/// Graphs of level i from the covers and the level-(i-1) vertex table.
template <class Backend>
BuiltLevel build_level(const Backend& b, const std::vector<CoverLevel<typename Backend::Set>>& levels, std::size_t i,
                       const std::vector<TaggedVertex>& previous_vertices);

template <class Backend>
Encoding<Backend> encode(const Backend& b, std::size_t depth, const EncodeOptions& opts = {});

/// Cylinder partitions of a subshift: level i is the graph of allowed
/// i-words with the shift relation, bonded by dropping the last symbol.
GraphSequence encode_zero_dim(const ShiftSystem& b, std::size_t depth);

/// Intersection of the closures of the sets along the thread.
template <class Backend>
typename Backend::Set decode_psi(const Encoding<Backend>& enc, const Thread& t);

/// Union of decode_psi over a class.
template <class Backend>
typename Backend::Set class_enclosure(const Encoding<Backend>& enc, const ClassAtDepth& c);

struct ConjugacyReport {
  std::uint64_t seed = 0;
  std::size_t depth = 0;
  std::size_t checked = 0;
  Report report;
};

/// For sampled depth-n threads x: A = enclosure of the F-neighbourhood of x,
/// B = enclosure of its T-image at depth n-1. Requires f(A) to meet B and
/// both diameters <= 2^{-(n-1)}; for finite systems with single-point
/// enclosures f(A) = B exactly. All threads are checked when samples covers them.
template <class Backend>
ConjugacyReport conjugacy_check(const Encoding<Backend>& enc, std::size_t n, std::size_t samples, std::uint64_t seed);

/// Smallest depth at which the closure classes are in bijection with the
/// points and T matches the map through decode_psi, if any up to the
/// encoding depth.
std::optional<std::size_t> finite_conjugacy_depth(const Encoding<FiniteSystem>& enc);

/// Depth-n thread whose enclosure contains the point, if any.
std::optional<Thread> locate_thread(const Encoding<PLIntervalMap>& enc, const Rational& x, std::size_t n);
std::optional<Thread> locate_thread(const Encoding<FiniteSystem>& enc, std::uint32_t point, std::size_t n);
std::optional<Thread> locate_thread(const Encoding<ShiftSystem>& enc, const std::string& word, std::size_t n);

}  // namespace twinlim
