#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "twinlim/suite.hpp"

namespace twinlim::cli {

namespace {

using nlohmann::json;

struct Config {
  std::string input;
  std::size_t depth = 0;
  bool depth_set = false;
  std::uint64_t seed = 1;
  std::size_t samples = 20;
  std::size_t cap = 5;
  std::size_t level = 0;
  std::size_t steps = 0;
  unsigned max_attempts = 4096;
  std::string out;
  std::string format = "text";
  std::string mode = "twinned";
  std::string start_point;
  std::string start_vertex;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string header(const Config& c) {
  return std::string("twinlim ") + TWINLIM_VERSION + " seed=" + std::to_string(c.seed);
}

json tool(const Config& c) { return {{"name", "twinlim"}, {"version", TWINLIM_VERSION}, {"seed", c.seed}}; }

void emit(const Config& c, const std::string& body, std::ostream& out) {
  if (c.out.empty()) {
    out << body;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << body;
}

json report_json(const Report& r) {
  json v = json::array();
  for (const auto& x : r.violations) v.push_back({{"axiom", x.axiom}, {"level", x.level}, {"witness", x.witness}});
  return {{"ok", r.ok()}, {"checks", r.lines.size()}, {"violations", v}};
}

void print_report(const Report& r, std::ostream& out) {
  for (const auto& l : r.lines)
    if (l.find("FAIL") != std::string::npos) out << l << "\n";
  out << "result: " << (r.ok() ? "PASS" : "FAIL") << " (" << r.lines.size() << " checks, " << r.violations.size()
      << " violations)\n";
}

Report validate_document(const Document& doc) {
  return std::visit(
      [](const auto& d) -> Report {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, GraphSequence>) {
          return validate_sequence(d);
        } else if constexpr (std::is_same_v<D, TwinnedSequence>) {
          return validate_twinned(d);
        } else {
          return std::visit(
              [](const auto& e) -> Report {
                if constexpr (std::is_same_v<std::decay_t<decltype(e)>, ZeroDimEncoding>) return validate_sequence(e.sequence);
                else return validate_twinned(e.twinned);
              },
              d);
        }
      },
      doc);
}

int cmd_validate(const Config& c, std::ostream& out) {
  Document doc = load_document(c.input);
  Report r = validate_document(doc);
  if (c.format == "json") {
    json j = report_json(r);
    j["tool"] = tool(c);
    j["command"] = "validate";
    out << j.dump(2) << "\n";
  } else {
    out << header(c) << "\nvalidate " << c.input << "\n";
    print_report(r, out);
  }
  return r.ok() ? ok : axiom_failure;
}

template <class Backend>
void level_lines(const Encoding<Backend>& enc, std::ostream& out, json& levels) {
  for (std::size_t i = 0; i <= enc.depth(); ++i) {
    const auto& g = enc.twinned.g_level(i);
    const auto& f = enc.twinned.f_level(i);
    std::size_t loops = 0;
    for (VertexId v = 0; v < f.size(); ++v) loops += f.has_edge(v, v);
    std::size_t f_pairs = (f.edge_count() + loops) / 2;
    out << "level " << i << ": sets " << enc.levels[i].cover.size() << ", vertices " << g.size() << ", G-edges "
        << g.edge_count() << ", F-edges " << f_pairs << ", epsilon " << to_string(enc.levels[i].epsilon) << "\n";
    levels.push_back({{"sets", enc.levels[i].cover.size()},
                      {"vertices", g.size()},
                      {"g_edges", g.edge_count()},
                      {"f_edges", f_pairs},
                      {"epsilon", to_string(enc.levels[i].epsilon)}});
  }
}

int cmd_encode(const Config& c, std::ostream& out) {
  System sys = load_system_spec(c.input);
  std::ostringstream text;
  json levels = json::array();
  AnyEncoding enc = [&]() -> AnyEncoding {
    if (c.mode == "zero-dim") {
      auto* shift = std::get_if<ShiftSystem>(&sys);
      if (!shift) throw UsageError("zero-dim mode needs a shift system");
      return ZeroDimEncoding{*shift, encode_zero_dim(*shift, c.depth)};
    }
    EncodeOptions opts;
    opts.max_attempts = c.max_attempts;
    return std::visit([&](const auto& b) -> AnyEncoding { return encode(b, c.depth, opts); }, sys);
  }();

  Report r;
  std::visit(
      [&](const auto& e) {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, ZeroDimEncoding>) {
          for (std::size_t i = 0; i <= e.sequence.depth(); ++i) {
            const auto& g = e.sequence.level(i);
            text << "level " << i << ": vertices " << g.size() << ", edges " << g.edge_count() << "\n";
            levels.push_back({{"vertices", g.size()}, {"edges", g.edge_count()}});
          }
          r = validate_sequence(e.sequence);
        } else {
          level_lines(e, text, levels);
          r = validate_twinned(e.twinned);
          Report cond = verify_conditions(e.system, e.levels);
          r.violations.insert(r.violations.end(), cond.violations.begin(), cond.violations.end());
          r.lines.insert(r.lines.end(), cond.lines.begin(), cond.lines.end());
        }
      },
      enc);

  if (r.ok() && !c.out.empty()) {
    std::ofstream f(c.out);
    if (!f) throw UsageError("cannot write " + c.out);
    f << write_encoding(enc);
  }
  if (c.format == "json") {
    json j = report_json(r);
    j["tool"] = tool(c);
    j["command"] = "encode";
    j["backend"] = std::string(encoding_backend(enc));
    j["levels"] = levels;
    if (!c.out.empty()) j["out"] = c.out;
    out << j.dump(2) << "\n";
  } else {
    out << header(c) << "\nencode " << c.input << " (" << encoding_backend(enc) << ", depth " << c.depth << ")\n"
        << text.str();
    print_report(r, out);
    if (r.ok() && !c.out.empty()) out << "wrote " << c.out << "\n";
  }
  return r.ok() ? ok : axiom_failure;
}

// ---------------------------------------------------------------- simulate

template <class Backend>
std::optional<Thread> locate(const Encoding<Backend>& enc, const std::string& point, std::size_t n) {
  if constexpr (std::is_same_v<Backend, FiniteSystem>) {
    const auto& names = enc.system.names();
    auto it = std::find(names.begin(), names.end(), point);
    if (it == names.end()) throw UsageError("unknown point '" + point + "'");
    return locate_thread(enc, static_cast<std::uint32_t>(it - names.begin()), n);
  } else if constexpr (std::is_same_v<Backend, PLIntervalMap>) {
    return locate_thread(enc, parse_rational(point), n);
  } else {
    return locate_thread(enc, enc.system.parse_word(point), n);
  }
}

std::string class_labels(const Graph& g, const std::vector<VertexId>& members) {
  std::string s = "{";
  const std::size_t shown = std::min<std::size_t>(members.size(), 8);
  for (std::size_t k = 0; k < shown; ++k) s += (k ? "," : "") + g.label(members[k]);
  if (shown < members.size()) s += ",... " + std::to_string(members.size()) + " threads";
  return s + "}";
}

template <class Backend>
int simulate_twinned(const Config& c, const Encoding<Backend>& enc, std::ostream& out) {
  const std::size_t n = c.depth_set ? c.depth : enc.depth();
  if (n > enc.depth()) throw UsageError("depth beyond the bundle");
  if (c.steps > n) throw UsageError("steps exceed the depth; each step drops one level");
  Thread x{n, 0};
  if (!c.start_vertex.empty()) {
    auto v = enc.twinned.g_level(n).find(c.start_vertex);
    if (!v) throw UsageError("no vertex '" + c.start_vertex + "' at level " + std::to_string(n));
    x.last = *v;
  } else if (!c.start_point.empty()) {
    auto t = locate(enc, c.start_point, n);
    if (!t) throw UsageError("point " + c.start_point + " lies in no depth-" + std::to_string(n) + " thread");
    x = *t;
  }
  TwinnedAnalysis an(enc.twinned);
  json traj = json::array();
  std::ostringstream text;
  for (std::size_t s = 0;; ++s) {
    ClassAtDepth cls = an.star(x);
    auto e = class_enclosure(enc, cls);
    const std::string labels = class_labels(enc.twinned.g_level(x.depth), cls.members);
    const std::string encl = enc.system.describe(e);
    const std::string diam = to_string(enc.system.diam(e));
    text << "step " << s << " depth " << x.depth << ": thread " << enc.twinned.g_level(x.depth).label(x.last)
         << " class " << labels << " enclosure " << encl << " diam " << diam << "\n";
    traj.push_back({{"step", s},
                    {"depth", x.depth},
                    {"thread", enc.twinned.g_level(x.depth).label(x.last)},
                    {"class_size", cls.members.size()},
                    {"enclosure", encl},
                    {"diam", diam}});
    if (s == c.steps) break;
    ClassAtDepth next = an.t_step_star(x);
    x = Thread{next.depth, next.representative};
  }
  if (c.format == "json") {
    out << json{{"tool", tool(c)}, {"command", "simulate"}, {"trajectory", traj}}.dump(2) << "\n";
  } else {
    out << header(c) << "\nsimulate " << c.input << "\n" << text.str();
  }
  return ok;
}

int simulate_zero_dim(const Config& c, const ZeroDimEncoding& enc, std::ostream& out) {
  const auto& s = enc.sequence;
  const std::size_t n = c.depth_set ? c.depth : s.depth();
  if (n > s.depth()) throw UsageError("depth beyond the bundle");
  if (c.steps > n) throw UsageError("steps exceed the depth; each step drops one level");
  Thread x{n, 0};
  std::string start = !c.start_vertex.empty() ? c.start_vertex : c.start_point;
  if (!start.empty()) {
    auto v = s.level(n).find(start.substr(0, n));
    if (!v || start.size() < n) throw UsageError("no word '" + start + "' of length " + std::to_string(n));
    x.last = *v;
  }
  json traj = json::array();
  std::ostringstream text;
  for (std::size_t k = 0;; ++k) {
    const std::string& w = s.level(x.depth).label(x.last);
    text << "step " << k << " depth " << x.depth << ": cylinder " << w << " diam "
         << to_string(enc.system.diam(x.depth ? enc.system.cylinder(enc.system.parse_word(w)) : enc.system.whole()))
         << "\n";
    traj.push_back({{"step", k}, {"depth", x.depth}, {"word", w}});
    if (k == c.steps) break;
    x = cover_successor(s, x);
  }
  if (c.format == "json") {
    out << json{{"tool", tool(c)}, {"command", "simulate"}, {"trajectory", traj}}.dump(2) << "\n";
  } else {
    out << header(c) << "\nsimulate " << c.input << "\n" << text.str();
  }
  return ok;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  Document doc = load_document(c.input);
  auto* enc = std::get_if<AnyEncoding>(&doc);
  if (!enc) throw UsageError("simulate needs an encoder bundle");
  return std::visit(
      [&](const auto& e) -> int {
        if constexpr (std::is_same_v<std::decay_t<decltype(e)>, ZeroDimEncoding>) return simulate_zero_dim(c, e, out);
        else return simulate_twinned(c, e, out);
      },
      *enc);
}

// ---------------------------------------------------------------- check

int cmd_check(const Config& c, std::ostream& out) {
  Document doc = load_document(c.input);
  SuiteOptions opts;
  opts.seed = c.seed;
  opts.samples = c.samples;
  opts.cap = c.cap;
  SuiteReport r = std::visit([&](const auto& d) { return run_suite(d, opts); }, doc);
  if (c.format == "json") {
    json fam = json::array();
    for (const auto& f : r.families)
      fam.push_back({{"family", f.name}, {"ok", f.ok}, {"checked", f.checked}, {"failed", f.failed}, {"witness", f.witness}});
    out << json{{"tool", tool(c)}, {"command", "check"}, {"samples", c.samples}, {"ok", r.ok()}, {"families", fam}}.dump(2)
        << "\n";
  } else {
    out << header(c) << " samples=" << c.samples << "\ncheck " << c.input << "\n";
    for (const auto& f : r.families) {
      out << f.name << ": " << (f.ok ? "PASS" : "FAIL") << " (" << f.checked << " checked";
      if (!f.ok) out << ", " << f.failed << " failed";
      out << ")";
      if (!f.witness.empty()) out << " " << f.witness;
      out << "\n";
    }
    out << "result: " << (r.ok() ? "PASS" : "FAIL") << "\n";
  }
  return r.ok() ? ok : axiom_failure;
}

// ---------------------------------------------------------------- export

int cmd_export(const Config& c, std::ostream& out) {
  Document doc = load_document(c.input);
  const std::string name = "level_" + std::to_string(c.level);
  auto twinned = [&](const TwinnedSequence& ts) {
    if (c.level > ts.depth()) throw UsageError("level " + std::to_string(c.level) + " beyond depth " + std::to_string(ts.depth()));
    if (c.format == "dot") return to_dot(ts.g_level(c.level), &ts.f_level(c.level), name);
    return write_twinned(truncate(ts, c.level));
  };
  auto plain = [&](const GraphSequence& s) {
    if (c.level > s.depth()) throw UsageError("level " + std::to_string(c.level) + " beyond depth " + std::to_string(s.depth()));
    if (c.format == "dot") return to_dot(s.level(c.level), nullptr, name);
    return write_sequence(truncate(s, c.level));
  };
  std::string body = std::visit(
      [&](const auto& d) -> std::string {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, GraphSequence>) {
          return plain(d);
        } else if constexpr (std::is_same_v<D, TwinnedSequence>) {
          return twinned(d);
        } else {
          return std::visit(
              [&](const auto& e) -> std::string {
                if constexpr (std::is_same_v<std::decay_t<decltype(e)>, ZeroDimEncoding>) return plain(e.sequence);
                else return twinned(e.twinned);
              },
              d);
        }
      },
      doc);
  emit(c, body, out);
  return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Encode dynamical systems as twinned inverse sequences of graphs and check them", "twinlim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("twinlim ") + TWINLIM_VERSION);
  Config c;

  auto common = [&](CLI::App* sub, const char* input_help) {
    sub->add_option("input", c.input, input_help)->required();
    sub->add_option("--seed", c.seed, "Seed recorded in reports and used for sampling");
  };

  auto* validate = app.add_subcommand("validate", "Check sequence or twinned-sequence axioms");
  common(validate, "Sequence, twinned sequence or bundle JSON");
  validate->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));

  auto* encode_cmd = app.add_subcommand("encode", "Encode a system spec as a twinned sequence or cover sequence");
  common(encode_cmd, "System spec file");
  encode_cmd->add_option("--depth", c.depth, "Deepest level")->required();
  encode_cmd->add_option("--mode", c.mode)->check(CLI::IsMember({"twinned", "zero-dim"}));
  encode_cmd->add_option("--out", c.out, "Bundle path");
  encode_cmd->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));
  encode_cmd->add_option("--max-attempts", c.max_attempts, "Refinement attempts per level")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Follow a class under T, dropping one level per step");
  common(simulate, "Bundle JSON");
  simulate->add_option("--steps", c.steps)->required();
  auto* depth_opt = simulate->add_option("--depth", c.depth, "Start depth (default: bundle depth)");
  auto* sp = simulate->add_option("--start-point", c.start_point, "Point, rational or word locating the start thread");
  auto* sv = simulate->add_option("--start-vertex", c.start_vertex, "Vertex label at the start depth");
  sp->excludes(sv);
  simulate->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));

  auto* check = app.add_subcommand("check", "Run the property suite on a bundle or sequence");
  common(check, "Bundle or sequence JSON");
  check->add_option("--samples", c.samples, "Sampled classes per depth for the conjugacy check");
  check->add_option("--cap", c.cap, "Deepest level for neighbourhood checks");
  check->add_option("--format", c.format)->check(CLI::IsMember({"text", "json"}));

  auto* export_cmd = app.add_subcommand("export", "Write one level as DOT or the levels up to it as JSON");
  common(export_cmd, "Bundle or sequence JSON");
  export_cmd->add_option("--level", c.level)->required();
  export_cmd->add_option("--format", c.format)->check(CLI::IsMember({"dot", "json"}));
  export_cmd->add_option("--out", c.out, "Output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForVersion&) {
    out << std::string("twinlim ") + TWINLIM_VERSION << "\n";
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage_error;
  }
  c.depth_set = depth_opt->count() > 0;
  if (export_cmd->parsed() && c.format == "text") c.format = "dot";

  try {
    if (validate->parsed()) return cmd_validate(c, out);
    if (encode_cmd->parsed()) return cmd_encode(c, out);
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (check->parsed()) return cmd_check(c, out);
    if (export_cmd->parsed()) return cmd_export(c, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage_error;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return parse_error;
  } catch (const RefinementCapExceeded& e) {
    err << "refinement cap exceeded: " << e.what() << "\n";
    return refinement_cap;
  } catch (const AxiomViolation& e) {
    err << "axiom violation: " << e.what() << "\n";
    return axiom_failure;
  } catch (const StructuralError& e) {
    err << "invalid input: " << e.what() << "\n";
    return parse_error;
  }
  return usage_error;
}

}  // namespace twinlim::cli
