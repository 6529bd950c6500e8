#include "doctest.h"

#include "lopt/errors.hpp"
#include "lopt/table.hpp"

#include <clocale>
#include <cmath>
#include <limits>
#include <sstream>

using namespace lopt;

TEST_SUITE("io") {

TEST_CASE("numbers round trip exactly") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.9534016089123456, 5e-324,
                   std::numeric_limits<double>::max()}) {
    CHECK(parse_number(format_number(x)) == x);
  }
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(-INFINITY) == "-inf");
  CHECK(format_number(1e21) == "1e+21");
  CHECK(parse_number(" +2.5 ") == 2.5);
  CHECK_THROWS_AS(parse_number("2,5"), InvalidArgument);
  CHECK_THROWS_AS(parse_number("1.0x"), InvalidArgument);
  CHECK_THROWS_AS(parse_number(""), InvalidArgument);
}

TEST_CASE("formatting ignores the process locale") {
  const char* prev = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = prev ? prev : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8") || std::setlocale(LC_NUMERIC, "fr_FR.UTF-8")) {
    CHECK(format_number(1.25) == "1.25");
    CHECK(parse_number("1.25") == 1.25);
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST_CASE("csv layout") {
  Table t;
  t.columns = {"k", "name", "x"};
  t.metadata = {{"L", "51"}, {"convention", "a: b"}};
  t.add_row({std::int64_t(1), std::string("I"), 0.25});
  t.add_row({std::int64_t(-2), std::string("II"), -1e-5});
  CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "# L: 51\n# convention: a: b\nk,name,x\n1,I,0.25\n-2,II,-1e-05\n");
  CHECK(to_string(Cell{std::int64_t(7)}) == "7");
}

}
