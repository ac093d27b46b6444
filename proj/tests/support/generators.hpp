#pragma once

#include <algorithm>
#include <optional>
#include <random>

#include "twinlim/limit.hpp"
#include "twinlim/systems.hpp"

namespace twinlim::gen {

/// p/q in lowest terms; mpq_class does not reduce on construction.
inline Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

inline std::size_t pick(std::mt19937& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

/// Random graph with every vertex having an in- and an out-edge.
inline Graph random_edge_surjective_graph(std::mt19937& rng, std::size_t n) {
  std::vector<Edge> edges;
  for (VertexId u = 0; u < n; ++u) {
    edges.emplace_back(u, static_cast<VertexId>(pick(rng, n)));
    if (coin(rng, 0.3)) edges.emplace_back(u, static_cast<VertexId>(pick(rng, n)));
  }
  std::vector<bool> has_in(n, false);
  for (auto [u, v] : edges) has_in[v] = true;
  for (VertexId v = 0; v < n; ++v)
    if (!has_in[v]) edges.emplace_back(static_cast<VertexId>(pick(rng, n)), v);
  return Graph::with_indices(n, edges);
}

/// A graph over `g` and a cover map onto it, with at most `max_vertices`
/// vertices, or nothing when the attempt overflows.
inline std::optional<std::pair<Graph, GraphHom>> random_cover_over(std::mt19937& rng, const Graph& g,
                                                                    std::size_t max_vertices) {
  // one copy per out-edge fixes the direction of that copy; extras choose freely
  std::vector<VertexId> base, direction;
  for (VertexId v = 0; v < g.size(); ++v) {
    auto outs = g.out(v);
    for (VertexId w : outs) {
      base.push_back(v);
      direction.push_back(w);
    }
    if (coin(rng, 0.3)) {
      base.push_back(v);
      direction.push_back(outs[pick(rng, outs.size())]);
    }
  }
  const std::size_t n = base.size();
  if (n > max_vertices) return std::nullopt;
  std::vector<std::vector<VertexId>> copies(g.size());
  for (VertexId u = 0; u < n; ++u) copies[base[u]].push_back(u);
  std::vector<Edge> edges;
  std::vector<bool> has_in(n, false);
  for (VertexId u = 0; u < n; ++u) {
    const auto& targets = copies[direction[u]];
    VertexId x = targets[pick(rng, targets.size())];
    edges.emplace_back(u, x);
    has_in[x] = true;
    if (coin(rng, 0.25)) {
      VertexId y = targets[pick(rng, targets.size())];
      edges.emplace_back(u, y);
      has_in[y] = true;
    }
  }
  for (VertexId x = 0; x < n; ++x) {
    if (has_in[x]) continue;
    std::vector<VertexId> feeders;
    for (VertexId u = 0; u < n; ++u)
      if (direction[u] == base[x]) feeders.push_back(u);
    edges.emplace_back(feeders[pick(rng, feeders.size())], x);
  }
  return std::make_pair(Graph::with_indices(n, edges), GraphHom{base});
}

/// Cover sequence with a one-vertex root, retrying levels that overflow.
inline GraphSequence random_cover_sequence(std::mt19937& rng, std::size_t depth, std::size_t max_vertices) {
  for (;;) {
    std::vector<Graph> levels{Graph::with_indices(1, {{0, 0}})};
    std::vector<GraphHom> bonds;
    bool ok = true;
    for (std::size_t i = 1; i <= depth && ok; ++i) {
      std::optional<std::pair<Graph, GraphHom>> next;
      for (int attempt = 0; attempt < 50 && !next; ++attempt) next = random_cover_over(rng, levels.back(), max_vertices);
      if (!next) {
        ok = false;
        break;
      }
      levels.push_back(std::move(next->first));
      bonds.push_back(std::move(next->second));
    }
    if (ok) return GraphSequence(std::move(levels), std::move(bonds), SequenceKind::covers);
  }
}

/// Finite system on n points with distances in [1,2] (always a metric).
inline FiniteSystem random_finite_system(std::mt19937& rng, std::size_t n) {
  std::vector<std::uint32_t> map(n);
  for (auto& p : map) p = static_cast<std::uint32_t>(pick(rng, n));
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = "x" + std::to_string(i);
  std::vector<std::vector<Rational>> metric(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) metric[i][j] = metric[j][i] = frac(8 + static_cast<long>(pick(rng, 9)), 8);
  return FiniteSystem(std::move(names), std::move(metric), std::move(map));
}

/// All self-maps of {0..n-1}.
inline std::vector<std::vector<std::uint32_t>> all_maps(std::size_t n) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> m(n, 0);
  for (;;) {
    out.push_back(m);
    std::size_t k = 0;
    while (k < n && ++m[k] == n) m[k++] = 0;
    if (k == n) break;
  }
  return out;
}

}  // namespace twinlim::gen
