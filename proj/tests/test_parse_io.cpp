#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "interp_scales/io.hpp"
#include "interp_scales/parse.hpp"

using namespace interp_scales;

TEST(Parse, Reals) {
  EXPECT_EQ(parse_real("2.5", "t"), 2.5);
  EXPECT_TRUE(std::isinf(parse_real(" inf ", "t")));
  EXPECT_THROW(parse_real("2.5x", "t"), SpecError);
}

TEST(Parse, BoydFunctions) {
  EXPECT_DOUBLE_EQ(parse_boyd("power:0.3")(8.0), std::pow(8.0, 0.3));
  const auto q = parse_boyd("quot:(power:0.75)/(power:0.25)");
  EXPECT_DOUBLE_EQ(q(16.0), 4.0);
  EXPECT_EQ(*q.exact_exponent(), 0.5);
  const auto p = parse_boyd("prod:power:0.25*power:0.25");
  EXPECT_DOUBLE_EQ(p(4.0), 2.0);
  const auto pap = parse_boyd("phialphap:a=0.5,p=2");
  EXPECT_DOUBLE_EQ(pap(1.0), 1.0);
  try {
    (void)parse_boyd("pow:0.3");
    FAIL();
  } catch (const SpecError& e) {
    EXPECT_EQ(e.token(), "pow:0.3");
  }
  EXPECT_THROW(parse_boyd("phialphap:a=0.5"), SpecError);
  EXPECT_THROW(parse_boyd("quot:power:0.5"), SpecError);
  EXPECT_THROW(parse_boyd("power"), SpecError);
}

TEST(Parse, Descriptors) {
  const auto x = DecreasingSequence::from_values({4, 3});
  EXPECT_DOUBLE_EQ(parse_descriptor("lp:2").norm(x), 5.0);
  EXPECT_DOUBLE_EQ(parse_descriptor("lp:inf").norm(x), 4.0);
  EXPECT_DOUBLE_EQ(parse_descriptor("lm:1:power:1").norm(x), 7.0);
  EXPECT_DOUBLE_EQ(parse_descriptor("phi:phi1").norm(x), 7.0);
  EXPECT_DOUBLE_EQ(parse_descriptor("phi:phiinf").norm(x), 4.0);
  EXPECT_NEAR(parse_descriptor("phi:eps:a=0.5").norm(x), 4 + 3 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(parse_descriptor("phi:eps:a=0,p=2").norm(x), 5.0, 1e-15);
  EXPECT_THROW(parse_descriptor("lq:2"), SpecError);
  EXPECT_THROW(parse_descriptor("lm:2"), SpecError);
  EXPECT_THROW(parse_descriptor("phi:eps:b=1"), SpecError);
}

TEST(Io, JsonNonFinite) {
  EXPECT_EQ(json_number(INFINITY), "inf");
  EXPECT_EQ(json_number(-INFINITY), "-inf");
  EXPECT_EQ(json_number(NAN), "nan");
  EXPECT_EQ(json_number(1.5), 1.5);
  EquivalenceReport r;
  r.theorem = "thm13";
  r.spread = INFINITY;
  r.params = {{"p0", "1"}};
  const auto j = to_json(r);
  EXPECT_EQ(j["spread"], "inf");
  EXPECT_EQ(j["params"]["p0"], "1");
  EXPECT_EQ(j["pass"], false);
  EXPECT_EQ(Json::parse(j.dump()), j);
}

TEST(Io, KCurveCsv) {
  KCurve c;
  c.t = {1, 2};
  c.k = {0.5, 1};
  c.method = KMethod::Exact;
  const auto csv = to_csv(c);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,K,method");
  EXPECT_NE(csv.find("2,1,exact"), std::string::npos);
}

TEST(Io, SequenceText) {
  EXPECT_EQ(parse_sequence_text("[1, 2.5, 3]"), (std::vector<double>{1, 2.5, 3}));
  EXPECT_EQ(parse_sequence_text("1 2,3\n4;5"), (std::vector<double>{1, 2, 3, 4, 5}));
  EXPECT_TRUE(parse_sequence_text("  \n").empty());
  EXPECT_THROW(parse_sequence_text("1 two"), InvalidInput);
  EXPECT_THROW(parse_sequence_text("[1, \"a\"]"), InvalidInput);
}

TEST(Io, MatrixJson) {
  const auto a = parse_matrix_json(R"({"rows": 2, "cols": 2, "entries": [3, 0, 0, 4]})");
  EXPECT_EQ(a.rows(), 2u);
  EXPECT_EQ(a(1, 1), 4.0);
  const auto b = parse_matrix_json("[[1, 2, 3], [4, 5, 6]]");
  EXPECT_EQ(b.cols(), 3u);
  EXPECT_EQ(b(1, 0), 4.0);
  EXPECT_THROW(parse_matrix_json("[[1, 2], [3]]"), InvalidInput);
  EXPECT_THROW(read_text_file("/nonexistent/file"), InvalidInput);
}
