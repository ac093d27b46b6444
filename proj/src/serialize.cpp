#include "twinlim/serialize.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace twinlim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ParseError(where + ": " + what); }

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

// ---------------------------------------------------------------- graphs

json graph_json(const Graph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) {
    if (g.kind() == GraphKind::symmetric && u > v) continue;
    edges.push_back({g.label(u), g.label(v)});
  }
  return {{"kind", std::string(to_string(g.kind()))}, {"vertices", g.labels()}, {"edges", edges}};
}

Graph graph_from(const json& j, const std::string& where, std::optional<GraphKind> forced = std::nullopt) {
  GraphKind kind = forced.value_or(GraphKind::directed);
  if (j.contains("kind")) {
    try {
      kind = graph_kind_from_string(text(j["kind"], where + ".kind"));
    } catch (const StructuralError& e) {
      fail(where + ".kind", e.what());
    }
    if (forced && kind != *forced) fail(where + ".kind", "expected " + std::string(to_string(*forced)));
  }
  std::vector<std::string> labels;
  const auto& vs = array(field(j, "vertices", where), where + ".vertices");
  for (std::size_t k = 0; k < vs.size(); ++k) labels.push_back(text(vs[k], where + ".vertices[" + std::to_string(k) + "]"));
  std::unordered_map<std::string, VertexId> index;
  for (VertexId v = 0; v < labels.size(); ++v)
    if (!index.emplace(labels[v], v).second) fail(where + ".vertices", "duplicate label '" + labels[v] + "'");
  std::vector<Edge> edges;
  const auto& es = array(field(j, "edges", where), where + ".edges");
  for (std::size_t k = 0; k < es.size(); ++k) {
    const std::string at = where + ".edges[" + std::to_string(k) + "]";
    if (!es[k].is_array() || es[k].size() != 2) fail(at, "expected a pair of labels");
    auto lookup = [&](const json& x) {
      auto it = index.find(text(x, at));
      if (it == index.end()) fail(at, "unknown vertex '" + x.get<std::string>() + "'");
      return it->second;
    };
    VertexId u = lookup(es[k][0]), v = lookup(es[k][1]);
    edges.emplace_back(u, v);
    if (kind == GraphKind::symmetric && u != v) edges.emplace_back(v, u);
  }
  return Graph(std::move(labels), edges, kind);
}

json hom_json(const Graph& source, const Graph& target, const GraphHom& h) {
  json m = json::object();
  for (VertexId v = 0; v < source.size(); ++v) m[source.label(v)] = target.label(h(v));
  return {{"map", m}};
}

GraphHom hom_from(const json& j, const Graph& source, const Graph& target, const std::string& where) {
  if (!j.is_object() || !j.contains("map")) fail(where, "expected an object with a 'map' field");
  const json& m = j.at("map");
  if (!m.is_object()) fail(where + ".map", "expected an object mapping labels to labels");
  GraphHom h;
  h.map.resize(source.size());
  std::vector<bool> seen(source.size(), false);
  for (auto it = m.begin(); it != m.end(); ++it) {
    auto s = source.find(it.key());
    if (!s) fail(where, "unknown source vertex '" + it.key() + "'");
    auto t = target.find(text(it.value(), where + "." + it.key()));
    if (!t) fail(where + "." + it.key(), "unknown target vertex '" + it.value().get<std::string>() + "'");
    h.map[*s] = *t;
    seen[*s] = true;
  }
  for (VertexId v = 0; v < source.size(); ++v)
    if (!seen[v]) fail(where, "vertex '" + source.label(v) + "' is not mapped");
  return h;
}

json sequence_json(const GraphSequence& s) {
  json levels = json::array(), bonding = json::array();
  for (const auto& g : s.levels()) levels.push_back(graph_json(g));
  for (std::size_t i = 1; i <= s.depth(); ++i) bonding.push_back(hom_json(s.level(i), s.level(i - 1), s.bond(i)));
  return {{"type", "graph_sequence"}, {"kind", std::string(to_string(s.kind()))}, {"levels", levels}, {"bonding", bonding}};
}

GraphSequence sequence_from(const json& j, const std::string& where) {
  SequenceKind kind = SequenceKind::homomorphisms;
  if (j.contains("kind")) {
    try {
      kind = sequence_kind_from_string(text(j["kind"], where + ".kind"));
    } catch (const StructuralError& e) {
      fail(where + ".kind", e.what());
    }
  }
  std::vector<Graph> levels;
  const auto& ls = array(field(j, "levels", where), where + ".levels");
  if (ls.empty()) fail(where + ".levels", "at least one level is required");
  for (std::size_t k = 0; k < ls.size(); ++k) levels.push_back(graph_from(ls[k], where + ".levels[" + std::to_string(k) + "]"));
  const auto& bs = array(field(j, "bonding", where), where + ".bonding");
  if (bs.size() + 1 != levels.size()) fail(where + ".bonding", "expected one map per level above 0");
  std::vector<GraphHom> bonding;
  for (std::size_t k = 0; k < bs.size(); ++k)
    bonding.push_back(hom_from(bs[k], levels[k + 1], levels[k], where + ".bonding[" + std::to_string(k) + "]"));
  try {
    return GraphSequence(std::move(levels), std::move(bonding), kind);
  } catch (const StructuralError& e) {
    fail(where, e.what());
  }
}

json twinned_json(const TwinnedSequence& ts) {
  json g = json::array(), f = json::array(), bonding = json::array();
  for (const auto& x : ts.g_levels()) g.push_back(graph_json(x));
  for (const auto& x : ts.f_levels()) f.push_back(graph_json(x));
  for (std::size_t i = 1; i <= ts.depth(); ++i)
    bonding.push_back(hom_json(ts.g_level(i), ts.g_level(i - 1), ts.bond(i)));
  return {{"type", "twinned_sequence"}, {"g_levels", g}, {"f_levels", f}, {"bonding", bonding}};
}

TwinnedSequence twinned_from(const json& j, const std::string& where) {
  std::vector<Graph> g, f;
  const auto& gs = array(field(j, "g_levels", where), where + ".g_levels");
  const auto& fs = array(field(j, "f_levels", where), where + ".f_levels");
  if (gs.empty()) fail(where + ".g_levels", "at least one level is required");
  if (gs.size() != fs.size()) fail(where, "g_levels and f_levels differ in length");
  for (std::size_t k = 0; k < gs.size(); ++k) {
    g.push_back(graph_from(gs[k], where + ".g_levels[" + std::to_string(k) + "]", GraphKind::directed));
    f.push_back(graph_from(fs[k], where + ".f_levels[" + std::to_string(k) + "]", GraphKind::symmetric));
  }
  const auto& bs = array(field(j, "bonding", where), where + ".bonding");
  if (bs.size() + 1 != g.size()) fail(where + ".bonding", "expected one map per level above 0");
  std::vector<GraphHom> bonding;
  for (std::size_t k = 0; k < bs.size(); ++k)
    bonding.push_back(hom_from(bs[k], g[k + 1], g[k], where + ".bonding[" + std::to_string(k) + "]"));
  try {
    return TwinnedSequence(std::move(g), std::move(f), std::move(bonding));
  } catch (const StructuralError& e) {
    fail(where, e.what());
  }
}

// ---------------------------------------------------------------- sets

json set_json(const FiniteSystem& b, const PointSet& s) {
  json out = json::array();
  for (auto p : s.points) out.push_back(b.names()[p]);
  return out;
}

json set_json(const PLIntervalMap&, const IntervalUnion& s) { return to_string(s); }

json set_json(const ShiftSystem& b, const CylinderSet& s) {
  json out = json::array();
  for (const auto& w : s.words) out.push_back(b.spell(w));
  return out;
}

PointSet set_from(const FiniteSystem& b, const json& j, const std::string& where) {
  PointSet s;
  for (const auto& x : array(j, where)) {
    auto name = text(x, where);
    auto it = std::find(b.names().begin(), b.names().end(), name);
    if (it == b.names().end()) fail(where, "unknown point '" + name + "'");
    s.points.push_back(static_cast<std::uint32_t>(it - b.names().begin()));
  }
  std::sort(s.points.begin(), s.points.end());
  s.points.erase(std::unique(s.points.begin(), s.points.end()), s.points.end());
  return s;
}

Interval interval_from(std::string t, const std::string& where) {
  auto strip = [](std::string s) {
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s;
  };
  t = strip(t);
  if (t.size() < 5 || (t.front() != '[' && t.front() != '(') || (t.back() != ']' && t.back() != ')'))
    fail(where, "malformed interval '" + t + "'");
  auto comma = t.find(',');
  if (comma == std::string::npos) fail(where, "malformed interval '" + t + "'");
  Interval i;
  try {
    i.lo = parse_rational(t.substr(1, comma - 1));
    i.hi = parse_rational(t.substr(comma + 1, t.size() - comma - 2));
  } catch (const ParseError& e) {
    fail(where, e.what());
  }
  i.lo_closed = t.front() == '[';
  i.hi_closed = t.back() == ']';
  return i;
}

IntervalUnion set_from(const PLIntervalMap&, const json& j, const std::string& where) {
  std::string t = text(j, where);
  if (t == "{}") return {};
  std::vector<Interval> parts;
  std::size_t start = 0;
  for (;;) {
    auto u = t.find(" u ", start);
    parts.push_back(interval_from(t.substr(start, u == std::string::npos ? std::string::npos : u - start), where));
    if (u == std::string::npos) break;
    start = u + 3;
  }
  return IntervalUnion(std::move(parts));
}

CylinderSet set_from(const ShiftSystem& b, const json& j, const std::string& where) {
  CylinderSet all;
  for (const auto& x : array(j, where)) {
    try {
      all = b.unite(all, b.cylinder(b.parse_word(text(x, where))));
    } catch (const StructuralError& e) {
      fail(where, e.what());
    }
  }
  return all;
}

// ---------------------------------------------------------------- bundles

json tool_json() { return {{"name", "twinlim"}, {"version", TWINLIM_VERSION}}; }

template <class Backend>
json encoding_json(const Encoding<Backend>& enc) {
  json levels = json::array(), table = json::array();
  for (const auto& l : enc.levels) {
    json cover = json::array();
    for (const auto& s : l.cover) cover.push_back(set_json(enc.system, s));
    levels.push_back({{"cover", cover}, {"epsilon", to_string(l.epsilon)}, {"granularity", l.granularity}});
  }
  for (const auto& row : enc.vertex_table) {
    json r = json::array();
    for (const auto& v : row) r.push_back({v.parent, v.set_id});
    table.push_back(std::move(r));
  }
  return {{"type", "encoding"},
          {"mode", "twinned"},
          {"tool", tool_json()},
          {"system_spec", format_system_spec(System(enc.system))},
          {"levels", levels},
          {"twinned", twinned_json(enc.twinned)},
          {"vertex_table", table}};
}

template <class Backend>
Encoding<Backend> encoding_from(const Backend& b, const json& j) {
  Encoding<Backend> enc{b, {}, {}, {}};
  const auto& ls = array(field(j, "levels", "bundle"), "bundle.levels");
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const std::string at = "bundle.levels[" + std::to_string(i) + "]";
    CoverLevel<typename Backend::Set> l;
    const auto& cover = array(field(ls[i], "cover", at), at + ".cover");
    for (std::size_t k = 0; k < cover.size(); ++k)
      l.cover.push_back(set_from(b, cover[k], at + ".cover[" + std::to_string(k) + "]"));
    try {
      l.epsilon = parse_rational(text(field(ls[i], "epsilon", at), at + ".epsilon"));
    } catch (const ParseError& e) {
      fail(at + ".epsilon", e.what());
    }
    if (ls[i].contains("granularity") && ls[i]["granularity"].is_number_unsigned())
      l.granularity = ls[i]["granularity"].get<unsigned>();
    enc.levels.push_back(std::move(l));
  }
  enc.twinned = twinned_from(field(j, "twinned", "bundle"), "bundle.twinned");
  if (enc.levels.size() != enc.twinned.depth() + 1) fail("bundle.levels", "level count differs from the twinned sequence");
  const auto& table = array(field(j, "vertex_table", "bundle"), "bundle.vertex_table");
  if (table.size() != enc.levels.size()) fail("bundle.vertex_table", "expected one row per level");
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string at = "bundle.vertex_table[" + std::to_string(i) + "]";
    std::vector<TaggedVertex> row;
    for (const auto& e : array(table[i], at)) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
        fail(at, "expected [parent, set] pairs");
      TaggedVertex v{i, e[0].get<VertexId>(), e[1].get<std::uint32_t>()};
      if (v.set_id >= enc.levels[i].cover.size()) fail(at, "set index out of range");
      row.push_back(v);
    }
    if (row.size() != enc.twinned.g_level(i).size()) fail(at, "row length differs from the level's vertex count");
    enc.vertex_table.push_back(std::move(row));
  }
  return enc;
}

json any_encoding_json(const AnyEncoding& enc) {
  return std::visit(
      [](const auto& e) -> json {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, ZeroDimEncoding>) {
          return {{"type", "encoding"},
                  {"mode", "zero-dim"},
                  {"tool", tool_json()},
                  {"system_spec", format_system_spec(System(e.system))},
                  {"sequence", sequence_json(e.sequence)}};
        } else {
          return encoding_json(e);
        }
      },
      enc);
}

AnyEncoding any_encoding_from(const json& j) {
  System sys = [&] {
    try {
      return parse_system_spec(text(field(j, "system_spec", "bundle"), "bundle.system_spec"));
    } catch (const ParseError& e) {
      fail("bundle.system_spec", e.what());
    }
  }();
  std::string mode = j.contains("mode") ? text(j["mode"], "bundle.mode") : "twinned";
  if (mode == "zero-dim") {
    auto* shift = std::get_if<ShiftSystem>(&sys);
    if (!shift) fail("bundle.mode", "zero-dim bundles need a shift system");
    return ZeroDimEncoding{*shift, sequence_from(field(j, "sequence", "bundle"), "bundle.sequence")};
  }
  if (mode != "twinned") fail("bundle.mode", "unknown mode '" + mode + "'");
  return std::visit([&](const auto& b) -> AnyEncoding { return encoding_from(b, j); }, sys);
}

json parse_json(const std::string& s) {
  try {
    return json::parse(s);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump() + "\n"; }

}  // namespace

std::string write_graph(const Graph& g) { return dump(graph_json(g)); }
std::string write_sequence(const GraphSequence& s) { return dump(sequence_json(s)); }
std::string write_twinned(const TwinnedSequence& ts) { return dump(twinned_json(ts)); }
std::string write_encoding(const AnyEncoding& enc) { return dump(any_encoding_json(enc)); }

Graph read_graph(const std::string& t) { return graph_from(parse_json(t), "graph"); }
GraphSequence read_sequence(const std::string& t) { return sequence_from(parse_json(t), "sequence"); }
TwinnedSequence read_twinned(const std::string& t) { return twinned_from(parse_json(t), "twinned"); }
AnyEncoding read_encoding(const std::string& t) { return any_encoding_from(parse_json(t)); }

Document read_document(const std::string& t) {
  json j = parse_json(t);
  if (!j.is_object()) fail("document", "expected an object");
  std::string type = j.contains("type") ? text(j["type"], "document.type") : "";
  if (type.empty()) type = j.contains("g_levels") ? "twinned_sequence" : "graph_sequence";
  if (type == "graph_sequence") return sequence_from(j, "sequence");
  if (type == "twinned_sequence") return twinned_from(j, "twinned");
  if (type == "encoding") return any_encoding_from(j);
  fail("document.type", "unknown type '" + type + "'");
}

Document load_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_document(ss.str());
}

GraphSequence truncate(const GraphSequence& s, std::size_t level) {
  if (level > s.depth()) throw StructuralError("level beyond the sequence");
  std::vector<Graph> levels(s.levels().begin(), s.levels().begin() + level + 1);
  std::vector<GraphHom> bonds(s.bonding().begin(), s.bonding().begin() + level);
  return GraphSequence(std::move(levels), std::move(bonds), s.kind());
}

TwinnedSequence truncate(const TwinnedSequence& ts, std::size_t level) {
  if (level > ts.depth()) throw StructuralError("level beyond the sequence");
  std::vector<Graph> g(ts.g_levels().begin(), ts.g_levels().begin() + level + 1);
  std::vector<Graph> f(ts.f_levels().begin(), ts.f_levels().begin() + level + 1);
  std::vector<GraphHom> bonds(ts.bonding().begin(), ts.bonding().begin() + level);
  return TwinnedSequence(std::move(g), std::move(f), std::move(bonds));
}

std::string to_dot(const Graph& g, const Graph* f, const std::string& name) {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') q += '\\';
      q += c;
    }
    return q + "\"";
  };
  std::ostringstream out;
  out << "digraph " << quote(name) << " {\n";
  for (VertexId v = 0; v < g.size(); ++v) out << "  " << quote(g.label(v)) << ";\n";
  for (auto [u, v] : g.edges()) out << "  " << quote(g.label(u)) << " -> " << quote(g.label(v)) << ";\n";
  if (f) {
    for (auto [u, v] : f->edges()) {
      if (u > v) continue;
      out << "  " << quote(f->label(u)) << " -> " << quote(f->label(v)) << " [style=dashed, dir=none];\n";
    }
  }
  out << "}\n";
  return out.str();
}

std::string_view encoding_backend(const AnyEncoding& enc) {
  switch (enc.index()) {
    case 0: return "finite";
    case 1: return "pl_interval";
    case 2: return "shift";
    default: return "shift zero-dim";
  }
}

}  // namespace twinlim
