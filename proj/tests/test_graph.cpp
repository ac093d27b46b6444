#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "twinlim/graph.hpp"

using namespace twinlim;

namespace {

Graph loop() { return Graph::with_indices(1, {{0, 0}}); }
Graph two_cycle() { return Graph({"a", "b"}, {{0, 1}, {1, 0}}, GraphKind::directed); }
Graph four_cycle() { return Graph({"w", "x", "y", "z"}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, GraphKind::directed); }
GraphHom four_to_two() { return GraphHom{{0, 1, 0, 1}}; }

Relation random_relation(std::mt19937& rng, std::size_t left, std::size_t right, double p) {
  Relation r(left, right);
  for (VertexId a = 0; a < left; ++a)
    for (VertexId b = 0; b < right; ++b)
      if (gen::coin(rng, p)) r.add(a, b);
  r.normalize();
  return r;
}

}  // namespace

TEST(Graph, SymmetricNeedsBothOrientations) {
  EXPECT_THROW(Graph({"a", "b"}, {{0, 1}}, GraphKind::symmetric), StructuralError);
  Graph g({"a", "b"}, {{0, 1}, {1, 0}}, GraphKind::symmetric);
  EXPECT_TRUE(g.has_edge(1, 0));
}

TEST(Graph, EdgeEndpointOutOfRange) { EXPECT_THROW(Graph::with_indices(2, {{0, 2}}), StructuralError); }

TEST(Graph, LabelLookup) {
  Graph g = four_cycle();
  EXPECT_EQ(g.at("y"), 2u);
  EXPECT_FALSE(g.find("q"));
  EXPECT_THROW(g.at("q"), StructuralError);
}

TEST(Homomorphism, IdentityIsHom) {
  Graph g = four_cycle();
  EXPECT_TRUE(is_homomorphism(g, g, identity_hom(g)));
}

TEST(Homomorphism, ConstantOntoLoop) {
  Graph x({"x"}, {{0, 0}}, GraphKind::directed);
  EXPECT_TRUE(is_homomorphism(two_cycle(), x, GraphHom{{0, 0}}));
}

TEST(Homomorphism, EmptyTargetEdges) {
  Graph src({"a", "b"}, {{0, 1}}, GraphKind::directed);
  Graph dst({"x", "y"}, {}, GraphKind::directed);
  Check c = is_homomorphism(src, dst, GraphHom{{0, 1}});
  EXPECT_FALSE(c);
  EXPECT_NE(c.witness.find("a"), std::string::npos);
}

TEST(Homomorphism, MalformedMapIsStructural) {
  EXPECT_THROW(is_homomorphism(two_cycle(), loop(), GraphHom{{0}}), StructuralError);
  EXPECT_THROW(is_homomorphism(two_cycle(), loop(), GraphHom{{0, 3}}), StructuralError);
}

TEST(EdgeSurjectiveGraph, Examples) {
  EXPECT_TRUE(is_edge_surjective_graph(loop()));
  EXPECT_FALSE(is_edge_surjective_graph(Graph({"a", "b"}, {{0, 1}}, GraphKind::directed)));
  EXPECT_TRUE(is_edge_surjective_graph(four_cycle()));
}

TEST(EdgeSurjectiveGraph, MatchesDegreeOracle) {
  std::mt19937 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 1 + gen::pick(rng, 6);
    std::vector<Edge> edges;
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = 0; v < n; ++v)
        if (gen::coin(rng, 0.2)) edges.emplace_back(u, v);
    Graph g = Graph::with_indices(n, edges);
    std::vector<int> in(n), out(n);
    for (auto [u, v] : edges) ++out[u], ++in[v];
    bool expect = true;
    for (std::size_t v = 0; v < n; ++v) expect = expect && in[v] > 0 && out[v] > 0;
    EXPECT_EQ(bool(is_edge_surjective_graph(g)), expect);
  }
}

TEST(EdgeSurjectiveHom, Examples) {
  Graph g = four_cycle();
  EXPECT_TRUE(is_edge_surjective_hom(g, g, identity_hom(g)));
  EXPECT_TRUE(is_edge_surjective_hom(four_cycle(), two_cycle(), four_to_two()));
  Graph t({"x", "y"}, {{0, 0}, {0, 1}}, GraphKind::directed);
  Check c = is_edge_surjective_hom(two_cycle(), t, GraphHom{{0, 0}});
  EXPECT_FALSE(c);
  EXPECT_NE(c.witness.find("y"), std::string::npos);
}

TEST(EdgeSurjectiveHom, NonHomThrows) {
  Graph src({"a", "b"}, {{0, 1}}, GraphKind::directed);
  Graph dst({"x", "y"}, {}, GraphKind::directed);
  EXPECT_THROW(is_edge_surjective_hom(src, dst, GraphHom{{0, 1}}), AxiomViolation);
}

TEST(PlusDirectional, Examples) {
  EXPECT_TRUE(is_plus_directional(four_cycle(), two_cycle(), four_to_two()));
  Graph src({"u", "v", "w"}, {{0, 1}, {0, 2}, {1, 0}, {2, 0}}, GraphKind::directed);
  Graph dst({"a", "b", "c"}, {{0, 1}, {0, 2}, {1, 0}, {2, 0}}, GraphKind::directed);
  EXPECT_FALSE(is_plus_directional(src, dst, identity_hom(src)));
  Graph path({"a", "b"}, {{0, 1}, {1, 1}}, GraphKind::directed);
  EXPECT_TRUE(is_plus_directional(path, path, identity_hom(path)));
}

TEST(GraphCover, Examples) {
  EXPECT_TRUE(is_graph_cover(loop(), loop(), identity_hom(loop())));
  EXPECT_TRUE(is_graph_cover(four_cycle(), two_cycle(), four_to_two()));
  Graph bad({"a", "b"}, {{0, 1}, {1, 1}}, GraphKind::directed);
  Check c = is_graph_cover(bad, loop(), GraphHom{{0, 0}});
  EXPECT_FALSE(c);
  EXPECT_EQ(c.code, "source_not_edge_surjective");
}

TEST(GraphCover, CompositionOfRandomCovers) {
  std::mt19937 rng(7);
  for (int t = 0; t < 60; ++t) {
    auto s = gen::random_cover_sequence(rng, 2, 40);
    ASSERT_TRUE(is_graph_cover(s.level(1), s.level(0), s.bond(1)));
    ASSERT_TRUE(is_graph_cover(s.level(2), s.level(1), s.bond(2)));
    GraphHom both = compose(s.bond(1), s.bond(2));
    EXPECT_TRUE(is_graph_cover(s.level(2), s.level(0), both));
  }
}

TEST(GraphCover, ImpliesSubAxioms) {
  std::mt19937 rng(8);
  int covers = 0;
  for (int t = 0; t < 400; ++t) {
    std::size_t n = 1 + gen::pick(rng, 4), m = 1 + gen::pick(rng, 3);
    Graph a = gen::random_edge_surjective_graph(rng, n);
    Graph b = gen::random_edge_surjective_graph(rng, m);
    GraphHom h;
    for (std::size_t v = 0; v < n; ++v) h.map.push_back(static_cast<VertexId>(gen::pick(rng, m)));
    if (!is_graph_cover(a, b, h)) continue;
    ++covers;
    EXPECT_TRUE(is_homomorphism(a, b, h));
    EXPECT_TRUE(is_plus_directional(a, b, h));
    EXPECT_TRUE(is_edge_surjective_hom(a, b, h));
  }
  EXPECT_GT(covers, 10);
}

TEST(Relations, ComposeIdentity) {
  std::mt19937 rng(3);
  Relation r = random_relation(rng, 4, 5, 0.4);
  EXPECT_EQ(compose_relations(Relation::identity(5), r), r);
}

TEST(Relations, ComposeChain) {
  Relation r(1, 1), q(1, 2);
  r.add(0, 0);
  q.add(0, 0);
  q.add(0, 1);
  r.normalize();
  q.normalize();
  auto out = compose_relations(q, r);
  EXPECT_EQ(out.pairs(), (std::vector<Edge>{{0, 0}, {0, 1}}));
}

TEST(Relations, ComposeDomainMismatch) { EXPECT_THROW(compose_relations(Relation(3, 3), Relation(2, 2)), StructuralError); }

TEST(Relations, ComposeMatchesBooleanProduct) {
  std::mt19937 rng(5);
  for (int t = 0; t < 50; ++t) {
    Relation r = random_relation(rng, 5, 5, 0.3), q = random_relation(rng, 5, 5, 0.3);
    Relation qr = compose_relations(q, r);
    for (VertexId v = 0; v < 5; ++v)
      for (VertexId u = 0; u < 5; ++u) {
        bool expect = false;
        for (VertexId w = 0; w < 5; ++w) expect = expect || (r.contains(v, w) && q.contains(w, u));
        EXPECT_EQ(qr.contains(v, u), expect);
      }
    // image of a composite is the union of images
    for (VertexId v = 0; v < 5; ++v) {
      std::vector<bool> hit(5, false);
      for (VertexId w : relation_image(r, v))
        for (VertexId u : relation_image(q, w)) hit[u] = true;
      auto img = relation_image(qr, v);
      for (VertexId u = 0; u < 5; ++u) EXPECT_EQ(std::count(img.begin(), img.end(), u) == 1, hit[u]);
    }
  }
}

TEST(Relations, Image) {
  EXPECT_TRUE(relation_image(Relation(2, 2), 1).empty());
  Relation r(1, 3);
  r.add(0, 2);
  r.add(0, 1);
  r.normalize();
  EXPECT_EQ(relation_image(r, 0), (std::vector<VertexId>{1, 2}));
  EXPECT_THROW(relation_image(r, 1), StructuralError);
}

TEST(Relations, ImageMatchesScan) {
  std::mt19937 rng(9);
  Relation r = random_relation(rng, 6, 7, 0.35);
  auto all = r.pairs();
  for (VertexId v = 0; v < 6; ++v) {
    std::vector<VertexId> expect;
    for (auto [a, b] : all)
      if (a == v) expect.push_back(b);
    EXPECT_EQ(relation_image(r, v), expect);
  }
}

TEST(Closure, Examples) {
  Partition p = equivalence_closure(Relation(3, 3));
  EXPECT_EQ(p.size(), 3u);
  Relation r(3, 3);
  r.add(0, 1);
  r.add(1, 2);
  r.normalize();
  EXPECT_EQ(equivalence_closure(r).size(), 1u);
}

TEST(Closure, MatchesMatrixClosure) {
  std::mt19937 rng(13);
  for (int t = 0; t < 100; ++t) {
    Relation r = random_relation(rng, 8, 8, 0.08);
    // reflexive symmetric closure, then square until stable
    std::vector<std::vector<bool>> m(8, std::vector<bool>(8));
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) m[a][b] = a == b || r.contains(a, b) || r.contains(b, a);
    for (int step = 0; step < 4; ++step) {
      auto sq = m;
      for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b)
          for (int c = 0; c < 8; ++c) sq[a][c] = sq[a][c] || (m[a][b] && m[b][c]);
      m = sq;
    }
    Partition p = equivalence_closure(r);
    for (VertexId a = 0; a < 8; ++a)
      for (VertexId b = 0; b < 8; ++b) EXPECT_EQ(p.same(a, b), bool(m[a][b]));

    // partition shape
    std::vector<int> seen(8, 0);
    for (std::size_t c = 0; c < p.size(); ++c) {
      EXPECT_FALSE(p.classes[c].empty());
      for (VertexId v : p.classes[c]) {
        ++seen[v];
        EXPECT_EQ(p.class_of[v], c);
      }
    }
    for (int s : seen) EXPECT_EQ(s, 1);
  }
}
