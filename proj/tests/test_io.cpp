#include <gtest/gtest.h>

#include "segrelab/io.hpp"

using namespace segrelab;

TEST(Io, RoundTripKeepsCanonicalForm) {
  const auto fano = projective_space(3, 2);
  const std::string text = dump(to_json(fano));
  const auto back = parse_incidence(text);
  EXPECT_EQ(back.structure, fano);
  EXPECT_FALSE(back.parallel.has_value());
  EXPECT_EQ(dump(to_json(back)), text);

  const auto ag = affine_space(3, 3);
  const std::string atext = dump(to_json(ag.base(), &ag));
  const auto aback = parse_incidence(atext);
  ASSERT_TRUE(aback.parallel.has_value());
  EXPECT_EQ(aback.parallel->classes(), ag.classes());
  EXPECT_EQ(dump(to_json(aback)), atext);
}

TEST(Io, UnsortedInputIsCanonicalised) {
  const auto f = parse_incidence(R"({"points": 4, "lines": [[3, 2], [1, 0]], "parallel_classes": [[1, 0]]})");
  const auto j = to_json(f);
  EXPECT_EQ(j["lines"], Json::parse("[[0,1],[2,3]]"));
  EXPECT_EQ(j["parallel_classes"], Json::parse("[[0,1]]"));
  EXPECT_TRUE(j["labels"].is_null());
}

TEST(Io, ParseErrorsCarryPosition) {
  try {
    parse_incidence("{\n  \"points\": 3,\n  \"lines\": [[0,1,]\n}");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_incidence(R"({"lines": []})"), Error);
  EXPECT_THROW(parse_incidence(R"({"points": 3, "lines": [[0, 1], [0, 1, 2]]})"), Error);
  EXPECT_THROW(parse_incidence(R"({"points": 3, "lines": [[0, 1, 2]], "parallel_classes": [[4]]})"), Error);
}

TEST(Io, BuildConfigs) {
  const auto pg = build_from_config_text(R"({"kind": "projective", "n": 3, "p": 2})");
  EXPECT_EQ(pg.structure.num_points(), 7);
  EXPECT_EQ(pg.structure.num_lines(), 7);
  const auto grid = build_from_config_text(
      R"({"kind": "product", "factors": [{"kind": "projective", "n": 2, "p": 2}, {"kind": "projective", "n": 2, "p": 2}]})");
  EXPECT_EQ(grid.structure.num_points(), 9);
  EXPECT_EQ(grid.structure.num_lines(), 6);
  const auto ag = build_from_config_text(R"({"kind": "affine", "n": 3, "p": 3})");
  ASSERT_TRUE(ag.parallel.has_value());
  EXPECT_EQ(ag.parallel->classes().size(), 4u);
  const auto w = build_from_config_text(R"({"kind": "polar", "n": 4, "p": 2, "form": [[0,1,0,0],[1,0,0,0],[0,0,0,1],[0,0,1,0]]})");
  EXPECT_EQ(w.structure.num_points(), 15);

  const auto deg = build_from_config_text(R"({"kind": "product",
      "factors": [{"kind": "projective", "n": 3, "p": 2}, {"kind": "projective", "n": 3, "p": 2}],
      "remove": {"factor_hyperplanes": [[0, 1, 6], [0, 2, 4]]}})");
  EXPECT_EQ(deg.structure.num_points(), 16);
  ASSERT_TRUE(deg.parallel.has_value());
  const auto form = build_from_config_text(R"({"kind": "product",
      "factors": [{"kind": "projective", "n": 3, "p": 3}, {"kind": "projective", "n": 3, "p": 3}],
      "remove": {"form": [[1,2,0],[0,1,1],[2,0,1]]}})");
  EXPECT_EQ(form.structure.num_points(), 117);

  try {
    build_from_config_text(R"({"kind": "grassmann", "n": 4, "k": 5, "p": 2})");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidDimension);
  }
  EXPECT_THROW(build_from_config_text(R"({"kind": "torus", "n": 3, "p": 2})"), Error);
  EXPECT_THROW(build_from_config_text("{\"kind\": "), Error);
}
