#include "doctest.h"

#include "properties.hpp"
#include "support.hpp"

using namespace anticoord::testing;

TEST_CASE("randomized module invariants") {
  for (const auto& property : property_suite()) {
    SUBCASE(property.name) {
      const auto result = property.check(kCases);
      INFO(result.first_failure);
      CHECK(result.cases == kCases);
      CHECK(result.failures == 0);
    }
  }
}
