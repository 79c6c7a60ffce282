// Runs the full acceptance suite and requires every criterion to pass.
// Each criterion prints its one-line verdict so a failure is self-describing.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>

#include "nlab/acceptance.hpp"

TEST_CASE("all acceptance criteria hold") {
  auto results = nlab::acceptance::run_all();
  REQUIRE(results.size() == 14);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    std::printf("%s\n", nlab::acceptance::format_line(r).c_str());
    CHECK(r.id == int(i) + 1);
    CAPTURE(r.name);
    CAPTURE(r.note);
    CHECK(r.pass);
  }
}
