#include <doctest.h>

#include "common.hpp"
#include "oracles.hpp"

using namespace piterm;

TEST_CASE("multiset ordering agrees with brute force") {
  auto all = oracle::all_multisets(3, 3);
  CHECK(all.size() == 35);
  for (const auto& a : all)
    for (const auto& b : all)
      CHECK(multiset_greater(Measure(a), Measure(b)) == oracle::multiset_greater_bruteforce(a, b));
}

TEST_CASE("subtyping agrees with the closure of its axioms on small types") {
  auto r = oracle::check_subtype_against_closure(2, 2, 2);
  CHECK(r.mismatches == 0);
  CHECK(r.first_mismatch == "");
  CHECK(r.related > r.types);
}

TEST_CASE("least levels are below every solution") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    LevelGraph g = oracle::random_graph(rng, 4, 5);
    auto sols = oracle::satisfying_assignments(g, 4);
    if (sols.empty()) {
      CHECK_THROWS_AS(assign_levels(g), InferenceError);
      continue;
    }
    auto least = assign_levels(g);
    for (const auto& s : sols)
      for (std::size_t k = 0; k < s.size(); ++k) CHECK(least[k] <= s[k]);
  }
}

TEST_CASE("generated processes type-check") {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    auto tc = oracle::generate_typed(rng);
    CHECK_NOTHROW(check(tc.env, tc.process));
    Process v = oracle::congruent_variant(tc.process, rng);
    CHECK(congruent(v, tc.process));
  }
}

TEST_CASE("properties on a small sample") {
  auto st = oracle::run_properties(3, 60, 2000);
  INFO(st.first_failure);
  CHECK(st.generator_failures == 0);
  CHECK(st.subject_reduction_failures == 0);
  CHECK(st.measure_failures == 0);
  CHECK(st.congruence_failures == 0);
  CHECK(st.diverged == 0);
  CHECK(st.bound_exceeded == 0);
}
