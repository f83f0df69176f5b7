#include <doctest.h>

#include <fstream>
#include <sstream>

#include "aerials/catalog.hpp"
#include "aerials/jumpcode.hpp"

using namespace aerials;

namespace {
DegreeOfDifficulty dd(const char* text) { return DegreeOfDifficulty(static_cast<int>(parse_fixed(text, 4))); }
}  // namespace

TEST_CASE("default catalog loads every printed row") {
  const auto cat = DifficultyCatalog::load_default();
  CHECK(cat.size() == 40);
  CHECK(cat.version() == "dd_catalog_v1");
  CHECK(lookup_dd(cat, "bT", Gender::Men) == dd("2.0000"));
  CHECK(lookup_dd(cat, "bFF", Gender::Men) == dd("3.1500"));
  CHECK(lookup_dd(cat, "bdFFdF", Gender::Men) == dd("5.0000"));
  CHECK(lookup_dd(cat, "bdFFdF", Gender::Women) == dd("5.3000"));
  CHECK(lookup_dd(cat, "bFtFdF", Gender::Women) == dd("6.1215"));
  CHECK(cat.max_dd() == dd("6.1215"));
}

TEST_CASE("lookup errors") {
  const auto cat = DifficultyCatalog::load_default();
  CHECK_THROWS_AS(lookup_dd(cat, "bQQ", Gender::Men), UnknownCodeError);
  CHECK_THROWS_AS(lookup_dd(cat, "bPPP", Gender::Men), UnknownCodeError);  // valid code, not in the table
  CHECK_THROWS_AS(lookup_dd(cat, "FF", Gender::Men), JumpCodeError);
  CHECK_THROWS_AS(lookup_dd(cat, "bFFFF", Gender::Men), JumpCodeError);
}

TEST_CASE("women's ratio holds within the printed rounding slack") {
  for (const auto& e : DifficultyCatalog::load_default().entries()) {
    CAPTURE(e.code);
    if (parse_jump_code(e.code).flip_count() == 3)
      CHECK(std::abs(e.dd_women.value - women_dd_from_ratio(e.dd_men).value) <= kWomenRatioTolerance);
    else
      CHECK(e.dd_women == e.dd_men);
  }
  CHECK(women_dd_from_ratio(dd("5.0000")) == dd("5.3000"));
  CHECK(women_dd_from_ratio(dd("5.6750")) == dd("6.0155"));
}

TEST_CASE("csv parsing rejects malformed tables") {
  const std::string header = "code,description,dd_men,dd_women\n";
  CHECK(DifficultyCatalog::parse_csv(header + "bT,Back Tuck,2.0000,2.0000\n").size() == 1);
  CHECK_THROWS_AS(DifficultyCatalog::parse_csv("code,dd\nbT,2.0000\n"), CatalogError);
  CHECK_THROWS_AS(DifficultyCatalog::parse_csv(header + "bT,Back Tuck,2.00,2.0000\n"), CatalogError);
  CHECK_THROWS_AS(DifficultyCatalog::parse_csv(header + "bT,Back Tuck,2.0000,2.1000\n"), CatalogError);
  CHECK_THROWS_AS(DifficultyCatalog::parse_csv(header + "bT,A,2.0000,2.0000\nbT,B,2.0000,2.0000\n"), CatalogError);
  CHECK_THROWS_AS(DifficultyCatalog::parse_csv(header + "bQ,Bad,2.0000,2.0000\n"), CatalogError);
  try {
    DifficultyCatalog::parse_csv(header + "bT,Back Tuck,2.0000,2.0000\nbP,Back Pike,2.000,2.0000\n");
    FAIL("no throw");
  } catch (const CatalogError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("to_csv reproduces the shipped file") {
  std::ifstream in(DifficultyCatalog::default_path());
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(DifficultyCatalog::load_default().to_csv() == ss.str());
}
