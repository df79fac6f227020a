// sanity.hpp - fast self-check suite for release gating
#pragma once

#include <string>
#include <vector>

namespace afdm {

struct SanityCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SanityReport {
  std::vector<SanityCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Runs the fast invariant suite: transform unitarity and round trips,
// factor-table agreement with the direct formula, single-path diagonal
// reconstruction at N=1024, and transmit/receive pipeline duality against
// the closed-form matrix. corrupt_factor_table deliberately damages the
// table first, so the oracle check must then report a failure by name
// (negative-path hook for tests).
SanityReport run_sanity(bool corrupt_factor_table = false);

}  // namespace afdm
