#include "corpus.hpp"
#include "doctest.h"

using namespace stratk;

TEST_CASE("flatten corpus") {
  const auto cases = corpus::flatten_cases();
  CHECK(cases.size() == 12);
  for (const auto& c : cases) {
    CAPTURE(c.name);
    const auto x = c.build();
    if (c.flattens) {
      const VBundle flat = flatten(x);
      CHECK(validate_bundle(flat).ok());
      for (std::size_t j = 0; j < x.strata(); ++j)
        CHECK(is_isomorphic(restrict_to_stratum(x, flat, j), x.stratum_bundle(j)));
      continue;
    }
    try {
      flatten(x);
      FAIL("flatten accepted a rank-dropping object");
    } catch (const Error& e) {
      CHECK(e.kind() == Error::Kind::not_a_bundle);
    }
  }
}
