#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "contcalc/elaborator.hpp"

namespace contcalc {

struct SuiteOptions {
  /// μ: trees of height ≤ height are enumerated and compared with F^height(∅).
  std::size_t height = 4;
  /// ν: paths with fewer than `paths` nodes (at most paths - 1 below-steps).
  std::size_t paths = 10;
  /// ν: truncation depths 0..trunc_depth are compared with the oracle.
  std::size_t trunc_depth = 4;
  /// Cap on elements taken from an enumeration.
  std::size_t samples = 200;
  /// ν: number of generated coalgebras and their maximal state count.
  std::size_t coalgebras = 8;
  std::size_t max_states = 6;
  std::uint64_t seed = 1;
  std::size_t count = 100000;
  /// Replace the body container with one that has no positions at all;
  /// a negative control for the suite itself.
  bool corrupt = false;
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string detail;
};

struct SuiteReport {
  std::string decl;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::string render() const;
};

/// Runs the invariant checks of the declaration's fixed point against the
/// oracle. `x` assigns an atom domain to every parameter.
SuiteReport run_iso_suite(const Elaborated& d, const FamilyAssignment& x, const SuiteOptions& options = {});

/// Body with every position family emptied.
SplitContainer corrupted(const SplitContainer& f);

}  // namespace contcalc
