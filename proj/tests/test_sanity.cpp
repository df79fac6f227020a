// test_sanity.cpp - built-in self checks pass and notice injected corruption
#include <doctest.h>

#include <afdm/sanity.hpp>

using namespace afdm;

TEST_SUITE("sanity") {

TEST_CASE("all built-in checks pass on a healthy build") {
  const SanityReport report = run_sanity();
  CHECK(report.all_pass());
  for (const SanityCheck& c : report.checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
  CHECK(report.checks.size() >= 4);
}

TEST_CASE("a corrupted factor table is caught by the oracle check") {
  const SanityReport report = run_sanity(true);
  CHECK_FALSE(report.all_pass());
  bool oracle_failed = false;
  for (const SanityCheck& c : report.checks)
    if (!c.pass) {
      CHECK(c.name == "factor-table-oracle");
      oracle_failed = true;
    }
  CHECK(oracle_failed);
}

}  // TEST_SUITE
