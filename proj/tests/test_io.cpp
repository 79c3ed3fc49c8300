#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "spectra/io.hpp"

namespace spectra {
namespace {

SdpSystem sdpa(const std::string& text) {
  std::istringstream in(text);
  return import_sdpa(in);
}

TEST(Json, RationalStrings) {
  EXPECT_EQ(rational_to_json(Rational(-3, 4)), "-3/4");
  EXPECT_EQ(rational_to_json(Rational(5)), "5");
  EXPECT_EQ(rational_from_json(json("6/8")), Rational(3, 4));
  EXPECT_EQ(rational_from_json(json(7)), Rational(7));
  EXPECT_THROW(rational_from_json(json(0.5)), ParseError);
  EXPECT_THROW(rational_from_json(json("1/0")), ParseError);
}

TEST(Json, InstanceRoundTrip) {
  Instance inst;
  inst.system = fixtures::six_by_four();
  inst.hints = {{fixtures::six_by_four_rays()[0], Matrix::identity(4)}};
  Instance back = instance_from_json(json::parse(instance_to_json(inst).dump()));
  EXPECT_EQ(back.system, inst.system);
  ASSERT_EQ(back.hints.size(), 1u);
  EXPECT_EQ(back.hints[0].y, inst.hints[0].y);
  EXPECT_EQ(*back.hints[0].rotation, Matrix::identity(4));
}

TEST(Json, UpperTriangleAccepted) {
  json j = json::parse(R"({"schemaVersion": 1, "n": 3, "m": 2,
      "A": [[["1","0","0"],["0","0"],["0"]], [["0","0","1"],["1","0"],["0"]]],
      "b": ["0", "-1"]})");
  EXPECT_EQ(instance_from_json(j).system, fixtures::motivating());
}

TEST(Json, AsymmetricRejected) {
  json j = json::parse(R"({"n": 2, "m": 1, "A": [[["1","2"],["3","1"]]], "b": ["1"]})");
  EXPECT_THROW(instance_from_json(j), ParseError);
}

TEST(Json, CountMismatchRejected) {
  json j = json::parse(R"({"n": 2, "m": 2, "A": [[["1","0"],["0","1"]]], "b": ["1"]})");
  EXPECT_THROW(instance_from_json(j), ParseError);
  j = json::parse(R"({"n": 2, "m": 1, "A": [[["1","0"],["0","1"]]], "b": ["1", "2"]})");
  EXPECT_THROW(instance_from_json(j), ParseError);
  j = json::parse(R"({"schemaVersion": 9, "n": 1, "m": 0, "A": [], "b": []})");
  EXPECT_THROW(instance_from_json(j), ParseError);
}

TEST(Json, ReportRoundTripVerifies) {
  const SdpSystem s = fixtures::six_by_four();
  Certificate c = convert(s);
  ASSERT_EQ(c.verdict, Verdict::Infeasible);
  json report = certificate_to_json(c, verify_certificate(s, c), json::object());
  Certificate back = certificate_from_json(json::parse(report.dump()));
  EXPECT_EQ(back.staircase.system, c.staircase.system);
  EXPECT_EQ(back.transcript.T, c.transcript.T);
  EXPECT_TRUE(verify_certificate(s, back).accepted);

  report["system"]["b"][static_cast<std::size_t>(c.staircase.k)] = "0";
  EXPECT_FALSE(verify_certificate(s, certificate_from_json(report)).accepted);
}

TEST(Json, FeasibleReportCarriesBothWitnesses) {
  const SdpSystem s = fixtures::four_by_four();
  Certificate c = convert(s);
  ASSERT_EQ(c.verdict, Verdict::Feasible);
  json report = certificate_to_json(c, verify_certificate(s, c), json::object());
  EXPECT_EQ(report["p"], 2);
  Certificate back = certificate_from_json(report);
  ASSERT_TRUE(back.X_source);
  EXPECT_TRUE(verify_certificate(s, back).accepted);
  // A witness that no longer matches V X V^T is caught.
  SymMatrix bad = *back.X_source;
  bad.set(0, 0, bad(0, 0) + 1);
  back.X_source = bad;
  EXPECT_FALSE(verify_certificate(s, back).accepted);
}

TEST(Json, FloatModeIsToleranced) {
  ConvertOptions opts;
  opts.mode = Mode::Float;
  const SdpSystem s = fixtures::six_by_four();
  Certificate c = convert(s, opts);
  ASSERT_EQ(c.verdict, Verdict::Infeasible);
  VerificationReport rep = verify_certificate(s, c);
  json v = report_verification(rep);
  EXPECT_EQ(v["status"], "toleranced");
  json report = certificate_to_json(c, rep, json::object());
  EXPECT_EQ(report["transcript"]["certifying"], false);
  EXPECT_TRUE(report.contains("normalized"));
}

TEST(Sdpa, MotivatingSystem) {
  EXPECT_EQ(sdpa("\"comment\n2 =mDIM\n1 =nBLOCK\n3 =bLOCKsTRUCT\n0 -1\n"
                 "1 1 1 1 1\n2 1 1 3 1\n2 1 2 2 1\n"),
            fixtures::motivating());
}

TEST(Sdpa, PunctuationAndDecimals) {
  SdpSystem s = sdpa("1\n1\n{2}\n{0.25}\n0 1 1 1 7.5\n1,1,1,2,-0.1\n1 1 2 2 1e-1\n");
  EXPECT_EQ(s.b[0], Rational(1, 4));
  EXPECT_EQ(s.A[0](0, 1), Rational(-1, 10));
  EXPECT_EQ(s.A[0](1, 0), Rational(-1, 10));
  EXPECT_EQ(s.A[0](1, 1), Rational(1, 10));
  EXPECT_EQ(s.A[0](0, 0), 0);
}

TEST(Sdpa, Rejections) {
  EXPECT_THROW(sdpa(""), ParseError);
  EXPECT_THROW(sdpa("\"only a comment\n"), ParseError);
  EXPECT_THROW(sdpa("1\n2\n2 2\n1\n1 1 1 1 1\n"), ParseError);   // two blocks
  EXPECT_THROW(sdpa("1\n1\n-3\n1\n1 1 1 1 1\n"), ParseError);    // LP block
  EXPECT_THROW(sdpa("1\n1\n2\n1\n1 1 3 1 1\n"), ParseError);     // out of range
  EXPECT_THROW(sdpa("1\n1\n2\n1\n1 1 1\n"), ParseError);         // truncated
}

TEST(GroundTruth, EmbeddedCertificateVerifies) {
  GenSpec spec;
  spec.n = 4;
  spec.m = 3;
  spec.seed = 3;
  GeneratedInstance g = generate(spec);
  json gt = ground_truth_to_json(g);
  EXPECT_EQ(gt["generator"]["prng"], kPrngId);
  EXPECT_EQ(gt["spec"]["seed"], 3);
  Certificate c = certificate_from_json(gt["certificate"]);
  EXPECT_TRUE(verify_certificate(g.system, c).accepted);
}

}  // namespace
}  // namespace spectra
