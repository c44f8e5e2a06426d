#include "doctest.h"
#include "stdgm/error.hpp"
#include "stdgm/ingest.hpp"

using namespace stdgm;

TEST_CASE("timestamps parse to epoch seconds") {
  CHECK(parse_timestamp("1970-01-01") == 0);
  CHECK(parse_timestamp("1970-02") == 31 * 86400);
  CHECK(parse_timestamp("2020-02-29T12:00:00Z") == 1582977600);
  CHECK(parse_timestamp("2020-02-29 12:00") == 1582977600);
  CHECK(parse_timestamp("2000-03-01T00:00:01.5") == 951868801);
  CHECK_FALSE(parse_timestamp("2021-13-01"));
  CHECK_FALSE(parse_timestamp("yesterday"));
  CHECK_FALSE(parse_timestamp(""));
}

TEST_CASE("bin widths") {
  const auto m = BinWidth::parse("1mo");
  CHECK(m.unit == BinWidth::Unit::months);
  CHECK(m.count == 1);
  const auto q = BinWidth::parse("15min");
  CHECK(q.unit == BinWidth::Unit::seconds);
  CHECK(q.count == 900);
  CHECK(BinWidth::parse("2w").count == 14 * 86400);
  CHECK_THROWS_AS(BinWidth::parse("3 parsecs"), Error);
  CHECK_THROWS_AS(BinWidth::parse("0d"), Error);
}

TEST_CASE("monthly binning follows calendar months") {
  const std::vector<Timestamp> ts{*parse_timestamp("2020-01-31T23:59"), *parse_timestamp("2020-02-01"),
                                  *parse_timestamp("2020-02-29T23:00"), *parse_timestamp("2020-04-15")};
  const auto b = bin_times(ts, BinWidth::parse("1mo"));
  CHECK(b.steps == std::vector<int>{1, 2, 2, 4});
  CHECK(b.total_steps == 4);
}

TEST_CASE("fixed-width binning uses floor from the origin") {
  const std::vector<Timestamp> ts{100, 100 + 86399, 100 + 86400, 100 + 3 * 86400};
  const auto b = bin_times(ts, BinWidth::parse("1d"));
  CHECK(b.steps == std::vector<int>{1, 1, 2, 4});
}

TEST_CASE("loader reads, skips comments, and removes exact duplicates") {
  const std::string csv =
      "# exported by some tool\n"
      "x,y,time,type\n"
      "0,0,1,a\n"
      "# a comment in the body\n"
      "10,5,2,b\n"
      "10,5,2,b\n"
      "4,2,2,a\n";
  LoadOptions o;
  o.time_is_index = true;
  const auto r = load_events_from_string(csv, o);
  CHECK(r.duplicates_removed == 1);
  CHECK(r.rows_read == 4);
  CHECK(r.pattern.size() == 3);
  CHECK(r.pattern.labels == std::vector<std::string>{"a", "b"});
  CHECK(r.pattern.steps() == 2);
  CHECK(r.pattern.window.x_max == 10.0);
  CHECK(r.pattern.window.y_max == 5.0);
  CHECK_FALSE(r.pattern.has_marks);
}

TEST_CASE("column remapping and marks") {
  const std::string csv = "lon,lat,when,kind,dbh\n1,2,2021-03-04,oak,3.5\n2,3,2021-04-01,elm,1.25\n";
  LoadOptions o;
  o.columns.apply("x=lon,y=lat,time=when,type=kind,mark=dbh");
  const auto r = load_events_from_string(csv, o);
  REQUIRE(r.pattern.size() == 2);
  CHECK(r.pattern.has_marks);
  CHECK(r.pattern.events[1].mark == 1.25);
  CHECK(r.pattern.events[1].step == 2);
  CHECK_THROWS_AS(o.columns.apply("z=depth"), Error);
}

TEST_CASE("loader errors carry kinds and line numbers") {
  LoadOptions o;
  o.time_is_index = true;
  try {
    (void)load_events_from_string("x,y,type\n1,2,a\n", o);
    FAIL("expected a schema error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::schema);
  }
  try {
    (void)load_events_from_string("x,y,time,type\n1,2,1,a\n1,oops,1,b\n", o);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    (void)load_events_from_string("x,y,time,type\n", o);
    FAIL("expected empty input");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::empty_input);
  }
  CHECK_THROWS_AS((void)load_events_from_string("x,y,time,type\n1,2,0,a\n", o), ParseError);
  CHECK_THROWS_AS(load_events("/nonexistent/events.csv"), Error);
}

TEST_CASE("rescaling maps the window onto the unit square and is idempotent") {
  LoadOptions o;
  o.time_is_index = true;
  const auto r = load_events_from_string("x,y,time,type\n-2,10,1,a\n2,30,1,b\n0,20,1,a\n", o);
  const auto u = rescale_to_unit_square(r.pattern);
  CHECK(u.unit_square);
  CHECK(u.events[0].x == 0.0);
  CHECK(u.events[1].y == 1.0);
  CHECK(u.events[2].x == doctest::Approx(0.5));
  CHECK(rescale_to_unit_square(u) == u);

  auto flat = r.pattern;
  flat.window.y_max = flat.window.y_min;
  CHECK_THROWS_AS(rescale_to_unit_square(flat), Error);
}

TEST_CASE("export then load with time indices reproduces the pattern") {
  LoadOptions o;
  o.time_is_index = true;
  o.window = Window{0, 1, 0, 1, 1};
  const std::string csv = "x,y,time,type,mark\n0.125,0.3,1,a,2.5\n0.7,0.9,3,\"b, c\",-1\n0.2,0.1,2,a,0.1\n";
  const auto first = load_events_from_string(csv, o).pattern;
  const auto again = load_events_from_string(export_events_to_string(first), o).pattern;
  CHECK(again == first);
  CHECK(first.labels[1] == "b, c");
}

TEST_CASE("pattern validation and helpers") {
  LoadOptions o;
  o.time_is_index = true;
  auto p = load_events_from_string("x,y,time,type\n0,0,1,a\n1,1,2,b\n0.5,0.5,2,c\n", o).pattern;
  CHECK_NOTHROW(p.validate());
  CHECK(p.counts() == std::vector<std::size_t>{1, 1, 1});
  CHECK(p.counts_by_step()[1] == std::vector<std::size_t>{0, 1});
  const auto s = p.slice(2);
  CHECK(s.steps() == 1);
  CHECK(s.size() == 2);
  const auto sel = p.select({2, 0});
  CHECK(sel.labels == std::vector<std::string>{"c", "a"});
  p.labels.push_back("d");
  CHECK_THROWS_AS(p.validate(), Error);
}
