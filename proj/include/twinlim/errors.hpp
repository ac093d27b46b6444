#pragma once

#include <stdexcept>
#include <string>

namespace twinlim {

/// Malformed input: a vertex outside its graph, mismatched domains, bad lengths.
class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked axiom does not hold; the message carries the witness.
class AxiomViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cover refinement did not satisfy its conditions before hitting the granularity cap.
class RefinementCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace twinlim
