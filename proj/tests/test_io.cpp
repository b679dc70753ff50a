#include <gtest/gtest.h>

#include <sstream>

#include "vlseq/io.hpp"

using namespace vlseq;

namespace {

ExponentSequence parse(const std::string& text) {
  std::istringstream in(text);
  return parse_exponent_sequence(in);
}

}  // namespace

TEST(ParseExponents, Constant) {
  const auto p = parse("# two\nkind: constant\nvalue: 2\n");
  EXPECT_EQ(p(1).value(), 2.0);
  EXPECT_EQ(p(1000).value(), 2.0);
  EXPECT_EQ(p.inf().value(), 2.0);
  EXPECT_TRUE(parse("kind: constant\nvalue: inf\n")(3).is_infinite());
}

TEST(ParseExponents, Model) {
  const auto p = parse("kind: model\nprefix: 1 1.5 inf\ntail: power 1 0.5\ndeclared_inf: 1\n");
  EXPECT_EQ(p(2).value(), 1.5);
  EXPECT_TRUE(p(3).is_infinite());
  EXPECT_DOUBLE_EQ(p(16).value(), 4.0);

  const auto l = parse("tail: affine_log 4 4   # 4 ln n + 4\ndeclared_inf: 4\n");
  EXPECT_NEAR(l(8).value(), 4 * std::log(8.0) + 4, 1e-14);
  EXPECT_TRUE(parse("prefix: 2\ntail: infinite\ndeclared_inf: 2\n")(2).is_infinite());
}

TEST(ParseExponents, Errors) {
  EXPECT_THROW(parse("kind: model\ntail: power 1 0.5\n"), ParseError);
  EXPECT_THROW(parse("tail: wobbly 1\ndeclared_inf: 1\n"), ParseError);
  EXPECT_THROW(parse("tail: power 1\ndeclared_inf: 1\n"), ParseError);
  EXPECT_THROW(parse("tail: constant two\ndeclared_inf: 1\n"), ParseError);
  EXPECT_THROW(parse("no colon here\n"), ParseError);
  EXPECT_THROW(parse("tail: infinite\ntail: infinite\ndeclared_inf: 1\n"), ParseError);
  EXPECT_THROW(parse("kind: constant\n"), ParseError);
  EXPECT_THROW(parse("kind: constant\nvalue: 0\n"), PreconditionError);
  EXPECT_THROW(parse("tail: constant 2\ndeclared_inf: 0\n"), PreconditionError);
  EXPECT_THROW(parse("prefix: 0.5\ntail: constant 2\ndeclared_inf: 1\n"), PreconditionError);
  EXPECT_THROW(load_exponent_sequence("/nonexistent/exponents.txt"), ParseError);
}

TEST(ParseExponents, RoundTrip) {
  const std::vector<ExponentSequence> models = {
      ExponentSequence::constant(2.5),
      ExponentSequence({Exponent(1.0), Exponent::infinity(), Exponent(0.75)}, PowerTail{1.25, 0.5}, Exponent(0.75)),
      ExponentSequence({}, AffineLogTail{0.1, 3.0}, Exponent(3.0)),
      ExponentSequence({Exponent(2.0)}, infinite_tail(), Exponent(2.0))};
  for (const auto& p : models) {
    std::ostringstream out;
    write_exponent_sequence(out, p);
    const auto back = parse(out.str());
    EXPECT_EQ(back.inf(), p.inf()) << out.str();
    for (Index n = 1; n <= 200; ++n) ASSERT_EQ(back(n), p(n)) << out.str() << " n=" << n;
  }
}

TEST(ParseSequence, ValuesAndErrors) {
  std::istringstream in("# entries\n3\n\n-4.5\n1e-3 # small\n");
  const auto a = parse_sequence(in);
  EXPECT_EQ(std::vector<double>(a.values().begin(), a.values().end()), (std::vector<double>{3, -4.5, 1e-3}));

  std::istringstream empty("# nothing\n");
  EXPECT_THROW(parse_sequence(empty), ParseError);
  std::istringstream bad("1\nx\n");
  EXPECT_THROW(parse_sequence(bad), ParseError);
  std::istringstream infinite("inf\n");
  EXPECT_THROW(parse_sequence(infinite), ParseError);
  std::istringstream nan("nan\n");
  EXPECT_THROW(parse_sequence(nan), ParseError);
}

TEST(RunTable, Format) {
  RunSequence r;
  r.append({1, 16, 0.125});
  r.append({17, 256, 0.0078125});
  std::ostringstream out;
  write_run_table(out, r);
  EXPECT_EQ(out.str(), "first,length,value\n1,16,0.125\n17,256,0.0078125\n");
}
