#pragma once

#include <string>
#include <variant>

#include "twinlim/encoder.hpp"

namespace twinlim {

/// Output of the clopen-partition path: a cover sequence of a subshift.
struct ZeroDimEncoding {
  ShiftSystem system;
  GraphSequence sequence;
};

using AnyEncoding =
    std::variant<Encoding<FiniteSystem>, Encoding<PLIntervalMap>, Encoding<ShiftSystem>, ZeroDimEncoding>;

/// Anything the tools read: a bare sequence, a twinned pair, or an encoder bundle.
using Document = std::variant<GraphSequence, TwinnedSequence, AnyEncoding>;

std::string write_graph(const Graph& g);
std::string write_sequence(const GraphSequence& s);
std::string write_twinned(const TwinnedSequence& ts);
std::string write_encoding(const AnyEncoding& enc);

Graph read_graph(const std::string& text);
GraphSequence read_sequence(const std::string& text);
TwinnedSequence read_twinned(const std::string& text);
AnyEncoding read_encoding(const std::string& text);

/// Dispatches on the "type" field. Throws ParseError on malformed JSON or
/// on structure that does not fit (unknown labels, partial bonding maps).
Document read_document(const std::string& text);
Document load_document(const std::string& path);

/// Levels 0..level of a sequence, which is again a sequence of the same kind.
GraphSequence truncate(const GraphSequence& s, std::size_t level);
TwinnedSequence truncate(const TwinnedSequence& ts, std::size_t level);

/// One digraph; G-edges solid, F-edges dashed.
std::string to_dot(const Graph& g, const Graph* f, const std::string& name);

std::string_view encoding_backend(const AnyEncoding& enc);

}  // namespace twinlim
