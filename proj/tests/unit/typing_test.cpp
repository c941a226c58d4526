#include <doctest.h>

#include "common.hpp"

using namespace piterm;

namespace {

ErrorCode rejection(const TypeEnv& env, const std::string& text, bool ds = false) {
  try {
    Process p = parse_process(text);
    ds ? check_ds(env, p) : check(env, p);
  } catch (const TypeError& e) {
    return e.code();
  }
  FAIL("process was accepted: " << text);
  return ErrorCode::Sort;
}

}  // namespace

TEST_CASE("server answering on a received name") {
  TypeEnv env = sample_env("server.env");
  Process p = parse_process(sample("server.pi"));
  CHECK(check(env, p) == 3);
  CHECK(measure(env, p) == Measure({3, 3}));
  CHECK(rejection(env, sample("server.pi"), true) == ErrorCode::Capability);
}

TEST_CASE("higher-order servers need subtyping on levels") {
  Process p = parse_process(sample("higher_order.pi"));
  CHECK(check(sample_env("higher_order.env"), p) == 3);
  CHECK(rejection(sample_env("higher_order_equal.env"), sample("higher_order.pi"), true) == ErrorCode::LevelViolation);
}

TEST_CASE("weights") {
  TypeEnv env = env_of("a : #2[Unit]  b : #1[Unit]  c : #3[Unit]");
  CHECK(check(env, parse_process("0")) == 0);
  CHECK(check(env, parse_process("a<> | b<>")) == 2);
  CHECK(check(env, parse_process("b().c<>")) == 3);
  CHECK(check(env, parse_process("!a().b<>")) == 0);
  CHECK(check(env, parse_process("!c().(a<> | b().a<>)")) == 0);
  CHECK(measure(env, parse_process("a<> | c<> | !c().a<>")) == Measure({2, 3}));
}

TEST_CASE("replicated inputs must dominate their bodies") {
  TypeEnv env = env_of("a : #2[Unit]  b : #2[Unit]");
  CHECK(rejection(env, "!a().b<>") == ErrorCode::LevelViolation);
  CHECK(rejection(env, "!a().a<>") == ErrorCode::LevelViolation);
}

TEST_CASE("error codes") {
  TypeEnv env = env_of("a : #1[Unit]  o : o1[Unit]  i : i1[Unit]  n : #1[Nat]");
  CHECK(rejection(env, "z<>") == ErrorCode::UnboundName);
  CHECK(rejection(env, "new b. b<>") == ErrorCode::MissingAnnotation);
  CHECK(rejection(env, "o().0") == ErrorCode::Capability);
  CHECK(rejection(env, "i<>") == ErrorCode::Capability);
  CHECK(rejection(env, "n<*>") == ErrorCode::PayloadMismatch);
  CHECK(rejection(env, "a<*, *>") == ErrorCode::PayloadMismatch);
  CHECK(code_of(ErrorCode::FunctionalNotIsolated) == "FUN");
}

TEST_CASE("subtyping") {
  auto t = [](const char* s) { return parse_type(s); };
  CHECK(subtype(t("#1[Unit]"), t("o1[Unit]")));
  CHECK(subtype(t("#1[Unit]"), t("i1[Unit]")));
  CHECK_FALSE(subtype(t("o1[Unit]"), t("#1[Unit]")));
  CHECK(subtype(t("o1[Unit]"), t("o3[Unit]")));
  CHECK_FALSE(subtype(t("o3[Unit]"), t("o1[Unit]")));
  CHECK(subtype(t("i3[Unit]"), t("i1[Unit]")));
  CHECK_FALSE(subtype(t("i1[Unit]"), t("i3[Unit]")));
  // Output is contravariant, input covariant in the payload.
  CHECK(subtype(t("o1[o2[Unit]]"), t("o1[#2[Unit]]")));
  CHECK(subtype(t("i1[#2[Unit]]"), t("i1[o2[Unit]]")));
  CHECK_FALSE(subtype(t("#1[#2[Unit]]"), t("#1[o2[Unit]]")));
  CHECK_FALSE(subtype(t("Unit"), t("Nat")));
}

TEST_CASE("multiset ordering") {
  auto gt = [](std::vector<unsigned> a, std::vector<unsigned> b) {
    return multiset_greater(Measure(a), Measure(b));
  };
  CHECK(gt({3}, {2, 2, 2, 1}));
  CHECK(gt({3, 1}, {3}));
  CHECK_FALSE(gt({3}, {3}));
  CHECK_FALSE(gt({}, {}));
  CHECK_FALSE(gt({2, 2}, {3}));
  CHECK(gt({2, 2}, {2, 1, 1}));
}

TEST_CASE("environments reject rebinding") {
  TypeEnv env;
  env.bind(Name::free("a"), Type::unit());
  CHECK_THROWS_AS(env.bind(Name::free("a"), Type::nat()), std::invalid_argument);
}
