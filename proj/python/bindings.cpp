#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "twinlim/encoder.hpp"
#include "twinlim/serialize.hpp"
#include "twinlim/suite.hpp"
#include "twinlim/twinned.hpp"

namespace py = pybind11;
using namespace twinlim;

namespace {

GraphHom to_hom(const std::vector<VertexId>& m) { return GraphHom{m}; }

std::vector<GraphHom> to_homs(const std::vector<std::vector<VertexId>>& ms) {
  std::vector<GraphHom> out;
  for (const auto& m : ms) out.push_back(GraphHom{m});
  return out;
}

// std::variant has its own caster in pybind11/stl.h, so bundles travel in a box.
struct EncodingBox {
  AnyEncoding enc;
};

py::object wrap_document(Document d) {
  return std::visit(
      [](auto&& x) -> py::object {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, AnyEncoding>)
          return py::cast(EncodingBox{std::move(x)});
        else
          return py::cast(std::move(x));
      },
      std::move(d));
}

EncodingBox encode_text(const std::string& spec, std::size_t depth, bool zero_dim, unsigned max_attempts) {
  System sys = parse_system_spec(spec);
  if (zero_dim) {
    auto* shift = std::get_if<ShiftSystem>(&sys);
    if (!shift) throw StructuralError("zero-dim encoding needs a shift system");
    return {ZeroDimEncoding{*shift, encode_zero_dim(*shift, depth)}};
  }
  EncodeOptions opts;
  opts.max_attempts = max_attempts;
  return {std::visit([&](const auto& b) -> AnyEncoding { return encode(b, depth, opts); }, sys)};
}

py::object encoding_twinned(const AnyEncoding& enc) {
  return std::visit(
      [](const auto& e) -> py::object {
        if constexpr (std::is_same_v<std::decay_t<decltype(e)>, ZeroDimEncoding>)
          return py::none();
        else
          return py::cast(e.twinned);
      },
      enc);
}

std::size_t encoding_depth(const AnyEncoding& enc) {
  return std::visit(
      [](const auto& e) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(e)>, ZeroDimEncoding>)
          return e.sequence.depth();
        else
          return e.twinned.depth();
      },
      enc);
}

py::dict suite_dict(const SuiteReport& r) {
  py::dict out;
  out["seed"] = r.seed;
  out["samples"] = r.samples;
  out["ok"] = r.ok();
  py::list fams;
  for (const auto& f : r.families) {
    py::dict d;
    d["name"] = f.name;
    d["ok"] = f.ok;
    d["checked"] = f.checked;
    d["failed"] = f.failed;
    d["witness"] = f.witness;
    fams.append(d);
  }
  out["families"] = fams;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "twinned inverse sequences of graphs";
  m.attr("__version__") = TWINLIM_VERSION;

  py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
  py::register_exception<AxiomViolation>(m, "AxiomViolation", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<RefinementCapExceeded>(m, "RefinementCapExceeded", PyExc_RuntimeError);

  py::class_<Check>(m, "Check")
      .def_readonly("ok", &Check::ok)
      .def_readonly("code", &Check::code)
      .def_readonly("witness", &Check::witness)
      .def("__bool__", [](const Check& c) { return c.ok; })
      .def("__repr__", [](const Check& c) {
        return c.ok ? std::string("<Check ok>") : "<Check " + c.code + ": " + c.witness + ">";
      });

  py::class_<Report>(m, "Report")
      .def_property_readonly("ok", &Report::ok)
      .def_readonly("lines", &Report::lines)
      .def_property_readonly("violations", [](const Report& r) {
        py::list out;
        for (const auto& v : r.violations) out.append(py::make_tuple(v.axiom, v.level, v.witness));
        return out;
      })
      .def("__bool__", &Report::ok);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](std::vector<std::string> labels, std::vector<Edge> edges, const std::string& kind) {
             return Graph(std::move(labels), std::move(edges), graph_kind_from_string(kind));
           }),
           py::arg("labels"), py::arg("edges"), py::arg("kind") = "directed")
      .def_property_readonly("labels", &Graph::labels)
      .def_property_readonly("edges", &Graph::edges)
      .def_property_readonly("kind", [](const Graph& g) { return std::string(to_string(g.kind())); })
      .def("__len__", &Graph::size)
      .def("index", &Graph::at)
      .def("has_edge", &Graph::has_edge)
      .def("out", &Graph::out)
      .def("to_json", &write_graph)
      .def("to_dot", [](const Graph& g, const std::string& name) { return to_dot(g, nullptr, name); },
           py::arg("name") = "G");

  py::class_<GraphSequence>(m, "GraphSequence")
      .def(py::init([](std::vector<Graph> levels, const std::vector<std::vector<VertexId>>& bonding,
                       const std::string& kind) {
             return GraphSequence(std::move(levels), to_homs(bonding), sequence_kind_from_string(kind));
           }),
           py::arg("levels"), py::arg("bonding"), py::arg("kind") = "covers")
      .def_property_readonly("depth", &GraphSequence::depth)
      .def("level", &GraphSequence::level, py::return_value_policy::copy)
      .def("bond", [](const GraphSequence& s, std::size_t i) { return s.bond(i).map; })
      .def("threads", [](const GraphSequence& s, std::size_t n) {
        std::vector<VertexId> out;
        for (const auto& t : enumerate_threads(s, n)) out.push_back(t.last);
        return out;
      })
      .def("to_json", &write_sequence);

  py::class_<TwinnedSequence>(m, "TwinnedSequence")
      .def(py::init([](std::vector<Graph> g, std::vector<Graph> f, const std::vector<std::vector<VertexId>>& bonding) {
             return TwinnedSequence(std::move(g), std::move(f), to_homs(bonding));
           }),
           py::arg("g_levels"), py::arg("f_levels"), py::arg("bonding"))
      .def_property_readonly("depth", &TwinnedSequence::depth)
      .def("g_level", &TwinnedSequence::g_level, py::return_value_policy::copy)
      .def("f_level", &TwinnedSequence::f_level, py::return_value_policy::copy)
      .def("bond", [](const TwinnedSequence& s, std::size_t i) { return s.bond(i).map; })
      .def("to_json", &write_twinned);

  py::class_<EncodingBox>(m, "Encoding")
      .def_property_readonly("backend", [](const EncodingBox& b) { return std::string(encoding_backend(b.enc)); })
      .def_property_readonly("depth", [](const EncodingBox& b) { return encoding_depth(b.enc); })
      .def_property_readonly("twinned", [](const EncodingBox& b) { return encoding_twinned(b.enc); })
      .def_property_readonly("sequence",
                             [](const EncodingBox& b) -> py::object {
                               if (auto* z = std::get_if<ZeroDimEncoding>(&b.enc)) return py::cast(z->sequence);
                               return py::none();
                             })
      .def("to_json", [](const EncodingBox& b) { return write_encoding(b.enc); })
      .def(
          "check",
          [](const EncodingBox& b, std::uint64_t seed, std::size_t samples, std::size_t cap) {
            return suite_dict(run_suite(b.enc, SuiteOptions{seed, samples, cap}));
          },
          py::arg("seed") = 1, py::arg("samples") = 20, py::arg("cap") = 5);

  m.def("is_homomorphism", [](const Graph& a, const Graph& b, const std::vector<VertexId>& h) {
    return is_homomorphism(a, b, to_hom(h));
  });
  m.def("is_edge_surjective_graph", &is_edge_surjective_graph);
  m.def("is_edge_surjective_hom", [](const Graph& a, const Graph& b, const std::vector<VertexId>& h) {
    return is_edge_surjective_hom(a, b, to_hom(h));
  });
  m.def("is_plus_directional", [](const Graph& a, const Graph& b, const std::vector<VertexId>& h) {
    return is_plus_directional(a, b, to_hom(h));
  });
  m.def("is_graph_cover", [](const Graph& a, const Graph& b, const std::vector<VertexId>& h) {
    return is_graph_cover(a, b, to_hom(h));
  });
  m.def(
      "compose", [](const std::vector<VertexId>& outer, const std::vector<VertexId>& inner) {
        return compose(to_hom(outer), to_hom(inner)).map;
      },
      "outer after inner");

  m.def("validate_sequence", &validate_sequence);
  m.def("validate_twinned", &validate_twinned);
  m.def("surjectivity_at_depth", &surjectivity_at_depth);
  m.def("cover_successor", [](const GraphSequence& s, std::size_t depth, VertexId v) {
    Thread t = cover_successor(s, Thread{depth, v});
    return py::make_tuple(t.depth, t.last);
  });
  m.def("quotient_at_depth", [](const TwinnedSequence& ts, std::size_t n) {
    std::vector<std::vector<VertexId>> out;
    for (const auto& c : quotient_at_depth(ts, n)) out.push_back(c.members);
    return out;
  });
  m.def("t_step", [](const TwinnedSequence& ts, std::size_t depth, std::vector<VertexId> members) {
    std::sort(members.begin(), members.end());
    ClassAtDepth c{depth, members, members.empty() ? 0 : members.front()};
    return t_step(ts, c).members;
  });

  m.def("encode", &encode_text, py::arg("spec"), py::arg("depth"), py::arg("zero_dim") = false,
        py::arg("max_attempts") = EncodeOptions{}.max_attempts, "Encode a system given as spec text.");
  m.def("loads", [](const std::string& text) { return wrap_document(read_document(text)); });
  m.def("load", [](const std::string& path) { return wrap_document(load_document(path)); });
}
