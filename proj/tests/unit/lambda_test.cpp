#include <doctest.h>

#include "common.hpp"
#include "piterm/inference.hpp"
#include "piterm/lambda.hpp"
#include "piterm/semantics.hpp"

using namespace piterm;

TEST_CASE("lambda parsing and printing") {
  LambdaTerm m = parse_lambda_term("\\x y. x y (\\z. z)");
  CHECK(to_string(parse_lambda_term(to_string(m))) == to_string(m));
  CHECK(to_string(parse_lambda_type("(s -> t) -> t -> t")) == "(s -> t) -> t -> t");
  CHECK_THROWS(parse_lambda_term("\\x. "));
}

TEST_CASE("simple types of lambda terms") {
  LambdaProgram typable = parse_lambda(sample("lambda_typable.lam"));
  CHECK(to_string(check_stlc(typable.context, typable.term)) == "t -> t");
  CHECK_THROWS_AS(check_stlc({}, parse_lambda_term("\\x. x x")), IllTypedLambda);
  CHECK_THROWS_AS(check_stlc({}, parse_lambda_term("y")), IllTypedLambda);
}

TEST_CASE("encoding of a variable and an abstraction") {
  Name p = Name::free("p");
  CHECK(congruent(encode(parse_lambda_term("x"), p), parse_process("p<x>")));
  Process id = encode(parse_lambda_term("\\x. x"), p);
  CHECK(congruent(id, parse_process("new y. (!y(x, q).q<x> | p<y>)")));
}

TEST_CASE("one encoding is typable, the other is not") {
  Name p = Name::free("p");
  LambdaProgram typable = parse_lambda(sample("lambda_typable.lam"));
  LambdaProgram cyclic = parse_lambda(sample("lambda_cyclic.lam"));
  Process e1 = encode(typable.term, p), e2 = encode(cyclic.term, p);
  Inference inf = infer(e1);
  CHECK(check(inf.env, inf.process) == inf.weight);
  CHECK_THROWS_AS(infer(e2), InferenceError);
  CHECK_THROWS_AS(infer(e1, InferMode::DSEquality), InferenceError);
  CHECK(explore(e1, Bounds{}).verdict == Verdict::Terminated);
  CHECK(explore(e2, Bounds{}).verdict == Verdict::Terminated);
}

TEST_CASE("typed encodings use functional names at level zero") {
  LambdaProgram cyclic = parse_lambda(sample("lambda_cyclic.lam"));
  TypedEncoding t = encode_typed(cyclic.context, cyclic.term, Name::free("p"));
  CHECK(check_impure(t.env, t.process) == 0);
  CHECK(channel_type(parse_lambda_type("s -> t")) == parse_type("o0[o0[Unit], o0[o0[Unit]]]"));
}
