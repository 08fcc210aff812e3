#include <doctest.h>

#include <charconv>
#include <cmath>
#include <string>

#include "pdsr/rng.hpp"
#include "pdsr/tomlmini.hpp"

namespace toml = pdsr::toml;

TEST_SUITE("toml") {

TEST_CASE("scalars, arrays and comments parse") {
  const auto t = toml::parse(R"(# header comment
count = 3
ratio = 0.25
big = 1e6
flag = true
name = "uwb radar"   # trailing comment
cells = [[0, 1], [2, 3]]
multi = [
  1.5,
  2.5,
]
)");
  CHECK(toml::find(t, "count")->as_integer() == 3);
  CHECK(toml::find(t, "ratio")->as_float() == 0.25);
  CHECK(toml::find(t, "big")->as_float() == 1e6);
  CHECK(toml::find(t, "flag")->as_boolean() == true);
  CHECK(toml::find(t, "name")->as_string() == "uwb radar");
  const auto& cells = toml::find(t, "cells")->as_array();
  REQUIRE(cells.size() == 2);
  CHECK(cells[1].as_array()[0].as_integer() == 2);
  CHECK(toml::find(t, "multi")->as_array().size() == 2);
  // Integer literals satisfy float reads.
  CHECK(toml::find(t, "count")->as_float() == 3.0);
}

TEST_CASE("tables and arrays of tables nest") {
  const auto t = toml::parse(R"([grid]
width = 4
[grid.inner]
depth = 2
[[victims]]
id = 0
[[victims]]
id = 1
["odd key"]
x = 1
)");
  const auto& grid = toml::find(t, "grid")->as_table();
  CHECK(toml::find(grid, "width")->as_integer() == 4);
  CHECK(toml::find(toml::find(grid, "inner")->as_table(), "depth")
            ->as_integer() == 2);
  const auto& victims = toml::find(t, "victims")->as_array();
  REQUIRE(victims.size() == 2);
  CHECK(toml::find(victims[1].as_table(), "id")->as_integer() == 1);
  CHECK(toml::find(toml::find(t, "odd key")->as_table(), "x")->as_integer() ==
        1);
}

TEST_CASE("string escapes round-trip") {
  const auto t = toml::parse("s = \"a\\\"b\\\\c\\nd\\te\"\n");
  CHECK(toml::find(t, "s")->as_string() == "a\"b\\c\nd\te");
  const std::string quoted = toml::quote("a\"b\\c\nd");
  const auto back = toml::parse("s = " + quoted + "\n");
  CHECK(toml::find(back, "s")->as_string() == "a\"b\\c\nd");
}

TEST_CASE("errors carry line numbers") {
  CHECK_THROWS_AS(toml::parse("a = 1\na = 2\n"), toml::ParseError);
  CHECK_THROWS_AS(toml::parse("a 1\n"), toml::ParseError);
  CHECK_THROWS_AS(toml::parse("a = [1, 2\n"), toml::ParseError);
  try {
    toml::parse("ok = 1\nbad =\n");
    FAIL("expected a parse error");
  } catch (const toml::ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("format_double is shortest and exact") {
  CHECK(toml::format_double(1.0) == "1.0");
  CHECK(toml::format_double(-2.0) == "-2.0");
  CHECK(toml::format_double(0.1) == "0.1");
  CHECK(toml::format_double(1.5) == "1.5");
  CHECK(toml::format_double(1e300) == "1e+300");

  pdsr::Rng rng(4);
  for (int i = 0; i < 1000; ++i) {
    const double x = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform_int(-20, 20));
    const std::string s = toml::format_double(x);
    double back = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), back);
    REQUIRE(res.ec == std::errc());
    CHECK(back == x);
  }
}

}  // TEST_SUITE
