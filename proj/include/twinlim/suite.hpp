#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twinlim/serialize.hpp"

namespace twinlim {

struct FamilyResult {
  std::string name;
  bool ok = true;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::string witness;  // first failure
};

struct SuiteReport {
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::vector<FamilyResult> families;

  bool ok() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t samples = 20;
  /// Deepest level used by the neighbourhood checks.
  std::size_t cap = 5;
};

/// Rebuilds the graphs from the stored covers (or the subshift) and compares
/// them with the stored ones; catches any edited edge.
FamilyResult construction_check(const AnyEncoding& enc);

/// Continuity at every thread of depth k+1 for k < cap.
FamilyResult continuity_family(const TwinnedSequence& ts, std::size_t cap);
/// Saturation at every thread of depth j for j < cap.
FamilyResult saturation_family(const TwinnedSequence& ts, std::size_t cap);
/// DS3b chain projection at every depth 1..cap.
FamilyResult ds3b_family(const TwinnedSequence& ts, std::size_t cap);

/// Successor determinism, agreement with the shift on words, and
/// surjectivity at every depth.
FamilyResult zero_dim_successor_family(const ZeroDimEncoding& enc);

SuiteReport run_suite(const AnyEncoding& enc, const SuiteOptions& opts = {});
/// Axiom-level checks for a bare twinned sequence.
SuiteReport run_suite(const TwinnedSequence& ts, const SuiteOptions& opts = {});
SuiteReport run_suite(const GraphSequence& s, const SuiteOptions& opts = {});

}  // namespace twinlim
