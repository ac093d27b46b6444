#include "twinlim/suite.hpp"

#include <algorithm>

namespace twinlim {

bool SuiteReport::ok() const {
  return std::all_of(families.begin(), families.end(), [](const FamilyResult& f) { return f.ok; });
}

namespace {

FamilyResult from_report(std::string name, const Report& r) {
  FamilyResult f{std::move(name), r.ok(), r.lines.size(), r.violations.size(), ""};
  if (!r.ok()) {
    const auto& v = r.violations.front();
    f.witness = v.axiom + " level " + std::to_string(v.level) + ": " + v.witness;
  }
  return f;
}

void tally(FamilyResult& f, const Check& c) {
  ++f.checked;
  if (c) return;
  ++f.failed;
  if (f.ok) {
    f.ok = false;
    f.witness = c.witness;
  }
}

void tally_error(FamilyResult& f, const std::exception& e) {
  ++f.checked;
  ++f.failed;
  if (f.ok) {
    f.ok = false;
    f.witness = e.what();
  }
}

template <class Backend>
FamilyResult rebuild(const Encoding<Backend>& enc) {
  FamilyResult f{"construction", true, 0, 0, ""};
  const auto& ts = enc.twinned;
  std::vector<TaggedVertex> prev;
  for (std::size_t i = 0; i <= ts.depth(); ++i) {
    BuiltLevel lvl;
    try {
      lvl = build_level(enc.system, enc.levels, i, prev);
    } catch (const std::exception& e) {
      tally_error(f, e);
      return f;
    }
    const std::string at = "level " + std::to_string(i) + ": ";
    tally(f, lvl.vertices == enc.vertex_table[i] ? Check::pass() : Check::fail("table", at + "vertex table differs"));
    tally(f, lvl.g == ts.g_level(i) ? Check::pass() : Check::fail("g", at + "G-edges differ from the covers"));
    tally(f, lvl.f == ts.f_level(i) ? Check::pass() : Check::fail("f", at + "F-edges differ from the covers"));
    if (i > 0) tally(f, lvl.bond == ts.bond(i) ? Check::pass() : Check::fail("bond", at + "bonding map differs"));
    prev = std::move(lvl.vertices);
  }
  return f;
}

FamilyResult rebuild(const ZeroDimEncoding& enc) {
  FamilyResult f{"construction", true, 0, 0, ""};
  GraphSequence expect = encode_zero_dim(enc.system, enc.sequence.depth());
  for (std::size_t i = 0; i <= expect.depth(); ++i) {
    const std::string at = "level " + std::to_string(i) + ": ";
    tally(f, expect.level(i) == enc.sequence.level(i) ? Check::pass()
                                                       : Check::fail("g", at + "graph differs from the cylinders"));
    if (i > 0)
      tally(f, expect.bond(i) == enc.sequence.bond(i) ? Check::pass() : Check::fail("bond", at + "bonding map differs"));
  }
  tally(f, expect.kind() == enc.sequence.kind() ? Check::pass() : Check::fail("kind", "sequence kind differs"));
  return f;
}

std::string thread_name(const TwinnedSequence& ts, const Thread& x) {
  return "thread " + ts.g_level(x.depth).label(x.last) + " at depth " + std::to_string(x.depth);
}

template <class Backend>
void twinned_families(SuiteReport& r, const Encoding<Backend>& enc, const SuiteOptions& opts) {
  const auto& ts = enc.twinned;
  const std::size_t cap = std::min(opts.cap, ts.depth());
  r.families.push_back(from_report("axioms", validate_twinned(ts)));
  r.families.push_back(from_report("conditions", verify_conditions(enc.system, enc.levels)));
  r.families.push_back(rebuild(enc));
  if (!r.families[0].ok) return;  // neighbourhood machinery assumes the axioms
  r.families.push_back(continuity_family(ts, cap));
  r.families.push_back(saturation_family(ts, cap));
  r.families.push_back(ds3b_family(ts, cap));

  FamilyResult conj{"conjugacy", true, 0, 0, ""};
  for (std::size_t n = 1; n <= ts.depth(); ++n) {
    try {
      auto c = conjugacy_check(enc, n, opts.samples, opts.seed);
      conj.checked += c.checked;
      if (!c.report.ok() && conj.ok) {
        conj.ok = false;
        conj.witness = "depth " + std::to_string(n) + ": " + c.report.violations.front().witness;
      }
      conj.failed += c.report.violations.size();
    } catch (const std::exception& e) {
      tally_error(conj, e);
    }
  }
  r.families.push_back(conj);

  if constexpr (std::is_same_v<Backend, FiniteSystem>) {
    FamilyResult fin{"finite_conjugacy", true, 1, 0, ""};
    auto n = finite_conjugacy_depth(enc);
    if (!n) {
      fin.ok = false;
      fin.failed = 1;
      fin.witness = "no depth up to " + std::to_string(ts.depth()) + " separates all points";
    } else {
      fin.witness = "depth " + std::to_string(*n);
    }
    if (ts.depth() >= 2 || enc.system.size() == 1) r.families.push_back(fin);
  }
}

}  // namespace

FamilyResult construction_check(const AnyEncoding& enc) {
  return std::visit([](const auto& e) { return rebuild(e); }, enc);
}

FamilyResult continuity_family(const TwinnedSequence& ts, std::size_t cap) {
  FamilyResult f{"continuity", true, 0, 0, ""};
  TwinnedAnalysis an(ts);
  for (std::size_t k = 0; k < cap; ++k)
    for (VertexId v = 0; v < ts.g_level(k + 1).size(); ++v) {
      Thread x{k + 1, v};
      try {
        Check c = an.continuity(x, k, cap);
        if (!c) c.witness = thread_name(ts, x) + ", k=" + std::to_string(k) + ": " + c.witness;
        tally(f, c);
      } catch (const std::exception& e) {
        tally_error(f, e);
      }
    }
  return f;
}

FamilyResult saturation_family(const TwinnedSequence& ts, std::size_t cap) {
  FamilyResult f{"saturation", true, 0, 0, ""};
  TwinnedAnalysis an(ts);
  for (std::size_t j = 0; j < cap; ++j)
    for (VertexId v = 0; v < ts.g_level(j).size(); ++v) {
      Thread x{j, v};
      try {
        Check c = an.saturation(x, j, cap);
        if (!c) c.witness = thread_name(ts, x) + ": " + c.witness;
        tally(f, c);
      } catch (const std::exception& e) {
        tally_error(f, e);
      }
    }
  return f;
}

FamilyResult ds3b_family(const TwinnedSequence& ts, std::size_t cap) {
  FamilyResult f{"ds3b_projection", true, 0, 0, ""};
  for (std::size_t n = 1; n <= cap; ++n) {
    Check c = ds3b_projection_check(ts, n);
    if (!c) c.witness = "depth " + std::to_string(n) + ": " + c.witness;
    tally(f, c);
  }
  return f;
}

FamilyResult zero_dim_successor_family(const ZeroDimEncoding& enc) {
  FamilyResult f{"successor", true, 0, 0, ""};
  const auto& s = enc.sequence;
  for (std::size_t n = 1; n <= s.depth(); ++n) {
    for (VertexId v = 0; v < s.level(n).size(); ++v) {
      const std::string& word = s.level(n).label(v);
      try {
        Thread t = cover_successor(s, Thread{n, v});
        std::string expect = n == 1 ? "root" : word.substr(1);
        const std::string& got = s.level(n - 1).label(t.last);
        tally(f, got == expect ? Check::pass()
                               : Check::fail("shift", "word " + word + " steps to " + got + ", shift gives " + expect));
      } catch (const std::exception& e) {
        tally_error(f, e);
      }
    }
    Check c = surjectivity_at_depth(s, n);
    if (!c) c.witness = "depth " + std::to_string(n) + ": " + c.witness;
    tally(f, c);
  }
  return f;
}

SuiteReport run_suite(const AnyEncoding& enc, const SuiteOptions& opts) {
  SuiteReport r{opts.seed, opts.samples, {}};
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, ZeroDimEncoding>) {
          r.families.push_back(from_report("axioms", validate_sequence(e.sequence)));
          r.families.push_back(rebuild(e));
          r.families.push_back(zero_dim_successor_family(e));
        } else {
          twinned_families(r, e, opts);
        }
      },
      enc);
  return r;
}

SuiteReport run_suite(const TwinnedSequence& ts, const SuiteOptions& opts) {
  SuiteReport r{opts.seed, opts.samples, {}};
  r.families.push_back(from_report("axioms", validate_twinned(ts)));
  if (!r.families[0].ok) return r;
  const std::size_t cap = std::min(opts.cap, ts.depth());
  r.families.push_back(continuity_family(ts, cap));
  r.families.push_back(saturation_family(ts, cap));
  r.families.push_back(ds3b_family(ts, cap));
  return r;
}

SuiteReport run_suite(const GraphSequence& s, const SuiteOptions& opts) {
  SuiteReport r{opts.seed, opts.samples, {}};
  r.families.push_back(from_report("axioms", validate_sequence(s)));
  if (s.kind() == SequenceKind::covers && r.families[0].ok) {
    FamilyResult f{"successor", true, 0, 0, ""};
    for (std::size_t n = 1; n <= s.depth(); ++n) {
      for (VertexId v = 0; v < s.level(n).size(); ++v) {
        try {
          cover_successor(s, Thread{n, v});
          tally(f, Check::pass());
        } catch (const std::exception& e) {
          tally_error(f, e);
        }
      }
      tally(f, surjectivity_at_depth(s, n));
    }
    r.families.push_back(f);
  }
  return r;
}

}  // namespace twinlim
