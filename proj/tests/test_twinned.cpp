#include <gtest/gtest.h>

#include <random>

#include "generators.hpp"
#include "twinlim/encoder.hpp"
#include "twinlim/twinned.hpp"

using namespace twinlim;

namespace {

Graph loops_on(const Graph& g) {
  std::vector<Edge> e;
  for (VertexId v = 0; v < g.size(); ++v) e.emplace_back(v, v);
  return Graph(g.labels(), e, GraphKind::symmetric);
}

Graph complete_on(const Graph& g) {
  std::vector<Edge> e;
  for (VertexId u = 0; u < g.size(); ++u)
    for (VertexId v = 0; v < g.size(); ++v) e.emplace_back(u, v);
  return Graph(g.labels(), e, GraphKind::symmetric);
}

TwinnedSequence with_f(const GraphSequence& s, Graph (*make)(const Graph&)) {
  std::vector<Graph> f;
  for (const auto& g : s.levels()) f.push_back(make(g));
  return TwinnedSequence(s.levels(), f, s.bonding());
}

TwinnedSequence root_only() {
  Graph r({"r"}, {{0, 0}}, GraphKind::directed);
  return TwinnedSequence({r}, {Graph({"r"}, {{0, 0}}, GraphKind::symmetric)}, {});
}

// F_2 joins a and b, but their successors a', b' sit over c and d, which
// F_1 keeps apart.
TwinnedSequence ds3_counterexample() {
  Graph g0({"r"}, {{0, 0}}, GraphKind::directed);
  Graph f0({"r"}, {{0, 0}}, GraphKind::symmetric);
  Graph g1({"c", "d"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, GraphKind::directed);
  Graph f1({"c", "d"}, {{0, 0}, {1, 1}}, GraphKind::symmetric);
  std::vector<std::string> v2{"a", "b", "a'", "b'"};
  Graph g2(v2, {{0, 2}, {1, 3}, {2, 1}, {3, 3}, {3, 0}}, GraphKind::directed);
  Graph f2(v2, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {0, 1}, {1, 0}}, GraphKind::symmetric);
  return TwinnedSequence({g0, g1, g2}, {f0, f1, f2}, {GraphHom{{0, 0}}, GraphHom{{0, 0, 0, 1}}});
}

std::vector<TwinnedSequence> sample_encodings() {
  std::vector<TwinnedSequence> out;
  out.push_back(encode(FiniteSystem::discrete({1, 0}), 3).twinned);
  out.push_back(encode(FiniteSystem::discrete({1, 2, 0, 0}), 3).twinned);
  out.push_back(encode(ShiftSystem::golden_mean(), 3).twinned);
  out.push_back(encode(ShiftSystem::full(2), 2).twinned);
  out.push_back(encode(PLIntervalMap::tent(), 2).twinned);
  std::mt19937 rng(5);
  for (int t = 0; t < 3; ++t) out.push_back(encode(gen::random_finite_system(rng, 4), 3).twinned);
  return out;
}

const std::vector<TwinnedSequence>& encodings() {
  static const std::vector<TwinnedSequence> all = sample_encodings();
  return all;
}

}  // namespace

TEST(Validate, RootOnly) { EXPECT_TRUE(validate_twinned(root_only()).ok()); }

TEST(Validate, Ds3Counterexample) {
  Report r = validate_twinned(ds3_counterexample());
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].axiom, "DS3");
  EXPECT_EQ(r.violations[0].level, 2u);
  EXPECT_EQ(r.violations[0].witness, "(a,b,a',b')");
}

TEST(Validate, Ds0TwoRoots) {
  Graph g({"r", "s"}, {{0, 0}, {1, 1}}, GraphKind::directed);
  Report r = validate_twinned(TwinnedSequence({g}, {loops_on(g)}, {}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations[0].axiom, "DS0");
}

TEST(Validate, Ds1NoOutEdge) {
  Graph g0({"r"}, {{0, 0}}, GraphKind::directed);
  Graph g1({"a", "b"}, {{0, 0}, {1, 0}, {0, 1}}, GraphKind::directed);
  Graph dead({"a", "b"}, {{0, 0}, {0, 1}}, GraphKind::directed);
  EXPECT_TRUE(validate_twinned(TwinnedSequence({g0, g1}, {loops_on(g0), loops_on(g1)}, {GraphHom{{0, 0}}})).ok());
  Report r = validate_twinned(TwinnedSequence({g0, dead}, {loops_on(g0), loops_on(dead)}, {GraphHom{{0, 0}}}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations[0].axiom, "DS1");
}

TEST(Validate, Ds2MissingLoopAndVertexMismatch) {
  Graph g0({"r"}, {{0, 0}}, GraphKind::directed);
  Graph g1({"a", "b"}, {{0, 0}, {1, 1}, {0, 1}, {1, 0}}, GraphKind::directed);
  Graph f1({"a", "b"}, {{0, 0}}, GraphKind::symmetric);
  Report r = validate_twinned(TwinnedSequence({g0, g1}, {loops_on(g0), f1}, {GraphHom{{0, 0}}}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations[0].axiom, "DS2");

  Graph other({"a", "z"}, {{0, 0}, {1, 1}}, GraphKind::symmetric);
  Report m = validate_twinned(TwinnedSequence({g0, g1}, {loops_on(g0), other}, {GraphHom{{0, 0}}}));
  ASSERT_FALSE(m.ok());
  EXPECT_EQ(m.violations[0].axiom, "DS2");
}

TEST(Validate, Ds3bViolation) {
  // b is F-adjacent to a and c, which lie over F_1-separated vertices
  Graph g0({"r"}, {{0, 0}}, GraphKind::directed);
  Graph g1({"u", "v"}, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, GraphKind::directed);
  Graph f1({"u", "v"}, {{0, 0}, {1, 1}}, GraphKind::symmetric);
  std::vector<std::string> l{"a", "b", "c"};
  Graph g2(l, {{0, 0}, {0, 2}, {2, 0}, {2, 2}, {1, 1}, {1, 0}}, GraphKind::directed);
  Graph f2(l, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 0}, {1, 2}, {2, 1}}, GraphKind::symmetric);
  Report r = validate_twinned(TwinnedSequence({g0, g1, g2}, {loops_on(g0), f1, f2}, {GraphHom{{0, 0}}, GraphHom{{0, 0, 1}}}));
  bool seen = false;
  for (const auto& v : r.violations) seen = seen || v.axiom == "DS3b";
  EXPECT_TRUE(seen);
}

TEST(Validate, EncodingsPass) {
  for (const auto& ts : encodings()) EXPECT_TRUE(validate_twinned(ts).ok());
}

TEST(FRelation, RootIsComplete) {
  for (const auto& ts : encodings()) EXPECT_EQ(f_relation_at_depth(ts, 0).pairs(), (std::vector<Edge>{{0, 0}}));
}

TEST(FRelation, ReflexiveSymmetric) {
  for (const auto& ts : encodings())
    for (std::size_t n = 0; n <= ts.depth(); ++n) {
      Relation r = f_relation_at_depth(ts, n);
      for (VertexId v = 0; v < r.left_size(); ++v) EXPECT_TRUE(r.contains(v, v));
      for (auto [u, v] : r.pairs()) EXPECT_TRUE(r.contains(v, u));
    }
}

TEST(FRelation, TopLevelEdgeIsNecessary) {
  for (const auto& ts : encodings()) {
    std::size_t n = ts.depth();
    Relation r = f_relation_at_depth(ts, n);
    for (auto [u, v] : r.pairs()) EXPECT_TRUE(ts.f_level(n).has_edge(u, v));
  }
}

TEST(FRelation, SwapSeparatesPoints) {
  auto enc = encode(FiniteSystem::discrete({1, 0}), 4);
  Relation r = f_relation_at_depth(enc.twinned, 4);
  EXPECT_EQ(r.pair_count(), r.left_size());
  for (auto [u, v] : r.pairs()) EXPECT_EQ(u, v);
}

TEST(Quotient, DepthZeroOneClass) {
  for (const auto& ts : encodings()) EXPECT_EQ(quotient_at_depth(ts, 0).size(), 1u);
}

TEST(Quotient, SwapHasTwoClasses) {
  auto enc = encode(FiniteSystem::discrete({1, 0}), 3);
  auto classes = quotient_at_depth(enc.twinned, 3);
  ASSERT_EQ(classes.size(), 2u);
  // each class decodes to one point
  std::vector<PointSet> seen;
  for (const auto& c : classes) seen.push_back(class_enclosure(enc, c));
  EXPECT_NE(seen[0], seen[1]);
  for (const auto& s : seen) EXPECT_EQ(s.points.size(), 1u);
}

TEST(Quotient, ClassesRefineUpward) {
  for (const auto& ts : encodings()) {
    TwinnedAnalysis an(ts);
    for (std::size_t n = 1; n <= ts.depth(); ++n) {
      const Partition& deep = an.partition(n);
      const Partition& shallow = an.partition(n - 1);
      EXPECT_GE(deep.size(), shallow.size());
      for (const auto& cls : deep.classes)
        for (VertexId v : cls) EXPECT_TRUE(shallow.same(ts.bond(n)(v), ts.bond(n)(cls.front())));
    }
  }
}

TEST(Ds3bProjection, ChainsProject) {
  for (const auto& ts : encodings())
    for (std::size_t n = 1; n <= ts.depth(); ++n) EXPECT_TRUE(ds3b_projection_check(ts, n)) << n;
}

TEST(TStep, RootToRoot) {
  const auto& ts = encodings().front();
  ClassAtDepth c = t_step(ts, quotient_at_depth(ts, 1).front());
  EXPECT_EQ(c.depth, 0u);
  EXPECT_EQ(c.members, (std::vector<VertexId>{0}));
}

TEST(TStep, SwapExchangesPoints) {
  auto enc = encode(FiniteSystem::discrete({1, 0}), 3);
  TwinnedAnalysis an(enc.twinned);
  for (const auto& c : quotient_at_depth(enc.twinned, 3)) {
    PointSet from = class_enclosure(enc, c);
    PointSet to = class_enclosure(enc, an.t_step(c));
    ASSERT_EQ(from.points.size(), 1u);
    EXPECT_EQ(to, enc.system.image(from));
  }
}

TEST(TStep, FixedPointsStayOverOwnPrefix) {
  auto enc = encode(FiniteSystem::discrete({0, 1, 2}), 3);
  const auto& ts = enc.twinned;
  TwinnedAnalysis an(ts);
  for (std::size_t n = 1; n <= 3; ++n)
    for (const auto& c : quotient_at_depth(ts, n)) {
      ClassAtDepth image = an.t_step(c);
      for (VertexId v : c.members) EXPECT_TRUE(image.contains(ts.bond(n)(v)));
    }
}

TEST(TStep, CommutesWithTruncation) {
  for (const auto& ts : encodings()) {
    TwinnedAnalysis an(ts);
    for (std::size_t n = 2; n <= ts.depth(); ++n)
      for (const auto& c : quotient_at_depth(ts, n)) {
        ClassAtDepth stepped = an.t_step(c);
        // truncate: the depth-(n-1) class holding the projected members
        VertexId m = ts.bond(n)(c.members.front());
        const auto& part = an.partition(n - 1);
        ClassAtDepth truncated{n - 1, part.classes[part.class_of[m]], m};
        ClassAtDepth a = an.t_step(truncated);
        VertexId s = ts.bond(n - 1)(stepped.members.front());
        EXPECT_TRUE(a.contains(s));
      }
  }
}

TEST(TStep, StarStepWellDefinedOnEncodings) {
  for (const auto& ts : encodings()) {
    TwinnedAnalysis an(ts);
    for (std::size_t n = 1; n <= ts.depth(); ++n)
      for (VertexId v = 0; v < ts.g_level(n).size(); ++v) EXPECT_NO_THROW(an.t_step_star(Thread{n, v}));
  }
}

TEST(TStep, Ds3ViolationDetected) {
  auto ts = ds3_counterexample();
  TwinnedAnalysis an(ts);
  EXPECT_THROW(an.t_step_star(Thread{2, 0}), AxiomViolation);
}

TEST(Neighbourhoods, LoopsGiveOwnCylinder) {
  std::mt19937 rng(31);
  auto ts = with_f(gen::random_cover_sequence(rng, 3, 20), loops_on);
  ASSERT_TRUE(validate_twinned(ts).ok());
  TwinnedAnalysis an(ts);
  for (VertexId v = 0; v < ts.g_level(3).size(); ++v) {
    Thread x{3, v};
    for (std::size_t j = 0; j <= 3; ++j) {
      LevelSet own{j, {ts.project(v, 3, j)}};
      EXPECT_EQ(an.bar(x, j), own);
      for (std::size_t i = j; i <= 3; ++i) EXPECT_EQ(an.at_level(an.bar_iter(x, j, i), j), own);
      EXPECT_EQ(nbhd_tilde(ts, x, j, 3).at_level(ts, j), own);
      if (j < 3) EXPECT_TRUE(an.saturation(x, j, 3));
    }
  }
}

TEST(Neighbourhoods, CompleteGivesEverything) {
  std::mt19937 rng(32);
  auto ts = with_f(gen::random_cover_sequence(rng, 3, 20), complete_on);
  ASSERT_TRUE(validate_twinned(ts).ok());
  TwinnedAnalysis an(ts);
  for (VertexId v = 0; v < ts.g_level(3).size(); ++v) {
    Thread x{3, v};
    for (std::size_t j = 0; j <= 3; ++j) {
      EXPECT_EQ(an.bar(x, j).vertices.size(), ts.g_level(j).size());
      if (j < 3) EXPECT_TRUE(an.saturation(x, j, 3));
    }
  }
}

TEST(Neighbourhoods, BarIterBaseCase) {
  for (const auto& ts : encodings()) {
    TwinnedAnalysis an(ts);
    for (VertexId v = 0; v < ts.g_level(ts.depth()).size(); ++v) {
      Thread x{ts.depth(), v};
      for (std::size_t j = 0; j <= ts.depth(); ++j) {
        EXPECT_EQ(an.bar_iter(x, j, j), nbhd_bar(ts, x, j));
        EXPECT_EQ(nbhd_tilde(ts, x, j, j).at_level(ts, j), nbhd_bar(ts, x, j));
      }
    }
  }
}

TEST(Neighbourhoods, BarIterGrowsAndTildeShrinks) {
  for (const auto& ts : encodings()) {
    TwinnedAnalysis an(ts);
    const std::size_t cap = ts.depth();
    for (VertexId v = 0; v < ts.g_level(cap).size(); ++v) {
      Thread x{cap, v};
      for (std::size_t j = 0; j <= cap; ++j) {
        for (std::size_t i = j + 1; i <= cap; ++i)
          EXPECT_TRUE(an.bar_iter(x, j, i).includes(an.at_level(an.bar_iter(x, j, i - 1), i)));
        if (j + 1 <= cap)
          EXPECT_TRUE(an.tilde(x, j, cap).at_level(ts, cap).includes(an.tilde(x, j + 1, cap).at_level(ts, cap)));
      }
    }
  }
}

TEST(Neighbourhoods, ShiftBarMatchesFattenedSets) {
  auto enc = encode(ShiftSystem::full(2), 3);
  const auto& ts = enc.twinned;
  TwinnedAnalysis an(ts);
  for (std::size_t j = 1; j <= 3; ++j) {
    const auto& eps = enc.levels[j].epsilon;
    for (VertexId v = 0; v < ts.g_level(j).size(); ++v) {
      LevelSet got = an.bar(Thread{j, v}, j);
      auto mine = enc.system.fatten(enc.set_of(j, v), eps);
      for (VertexId w = 0; w < ts.g_level(j).size(); ++w) {
        bool meets = enc.system.intersects(mine, enc.system.fatten(enc.set_of(j, w), eps));
        EXPECT_EQ(got.contains(w), meets);
      }
    }
  }
}

TEST(Continuity, RootOnly) {
  auto enc = encode(FiniteSystem::discrete({0}), 1);
  EXPECT_TRUE(continuity_check(enc.twinned, Thread{1, 0}, 0, 1));
}

TEST(Continuity, EncodingsPass) {
  for (const auto& ts : encodings()) {
    TwinnedAnalysis an(ts);
    for (std::size_t k = 0; k < ts.depth(); ++k)
      for (VertexId v = 0; v < ts.g_level(k + 1).size(); ++v)
        EXPECT_TRUE(an.continuity(Thread{k + 1, v}, k, ts.depth()));
  }
}

TEST(Continuity, Ds3ViolationFails) {
  auto ts = ds3_counterexample();
  Check c = continuity_check(ts, Thread{2, 0}, 1, 2);
  EXPECT_FALSE(c);
  EXPECT_FALSE(c.witness.empty());
}

TEST(Saturation, EncodingsPass) {
  for (const auto& ts : encodings()) {
    TwinnedAnalysis an(ts);
    for (std::size_t j = 0; j < ts.depth(); ++j)
      for (VertexId v = 0; v < ts.g_level(j).size(); ++v) EXPECT_TRUE(an.saturation(Thread{j, v}, j, ts.depth()));
  }
}

TEST(CylinderUnion, NormalizesSubsumedMarkers) {
  auto enc = encode(ShiftSystem::full(2), 2);
  const auto& ts = enc.twinned;
  CylinderUnion u;
  u.add(ts, LevelSet{2, {0}});
  u.add(ts, LevelSet{1, {ts.bond(2)(0)}});
  ASSERT_EQ(u.markers().size(), 1u);
  EXPECT_EQ(u.markers().begin()->first, 1u);
}
