#include <filesystem>

#include "doctest.h"
#include "stdgm/csv.hpp"
#include "stdgm/error.hpp"
#include "stdgm/pipeline.hpp"

using namespace stdgm;
namespace fs = std::filesystem;

TEST_CASE("FNV-1a test vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("provenance hash follows the config") {
  RunConfig a;
  RunConfig b;
  CHECK(a.provenance().hash() == b.provenance().hash());
  b.seed = 2;
  CHECK(a.provenance().entries.at("config_hash") != b.provenance().entries.at("config_hash"));
  const auto block = a.provenance().comment_block();
  CHECK(block.rfind("# ", 0) == 0);
  CHECK(block.find("# rng=splitmix64\n") != std::string::npos);
}

TEST_CASE("csv helpers") {
  CHECK(csv::split_record("a,\"b,c\",\"d\"\"e\",") == std::vector<std::string>{"a", "b,c", "d\"e", ""});
  CHECK(csv::quote("plain") == "plain");
  CHECK(csv::quote("x,y") == "\"x,y\"");
  CHECK(csv::fmt(0.1) == "0.10000000000000001");
  CHECK(csv::fmt(2.0) == "2");
}

TEST_CASE("flag parsers") {
  const auto links = parse_links("1-2:200:0.002;2-3:50:0.01");
  REQUIRE(links.size() == 2);
  CHECK(links[1].i == 1);
  CHECK(links[1].j == 2);
  CHECK(links[1].dispersion == 0.01);
  CHECK_THROWS_AS(parse_links("1-2:200"), Error);
  CHECK(parse_mark_dist("normal:10,2.5").sd == 2.5);
  CHECK_THROWS_AS(parse_mark_dist("gamma:1,1"), Error);
  CHECK(parse_widths("3,3,0") == SmoothingWidths{3, 3, 0});
  CHECK_THROWS_AS(parse_widths("3,3"), Error);
}

TEST_CASE("subcommands write their artifacts and reject d < 3") {
  const fs::path dir = fs::temp_directory_path() / "stdgm_unit_pipeline";
  fs::remove_all(dir);
  RunConfig c;
  c.out_dir = dir;
  c.rates = {60.0};
  c.links = "1-2:40:0.002";
  c.widths = SmoothingWidths{2, 2, 0};
  c.xi = "0.9";
  CHECK(run("simulate", c) == Artifacts{"events.csv", "truth.json"});
  const auto events = csv::read_file(dir / "events.csv");
  CHECK(events.find("# config_hash=") != std::string::npos);

  RunConfig reload = c;
  reload.input = (dir / "events.csv").string();
  reload.time_is_index = true;
  reload.window = "0,1,0,1";
  reload.out_dir = dir / "reload";
  CHECK(run("ingest", reload) == Artifacts{"events.csv", "summary.json"});

  CHECK(run("spectra", c).size() == 4);
  CHECK(run("graph", c) == Artifacts{"graph.dot"});
  CHECK(run("invert", c) == Artifacts{"lag.csv", "lag_atoms.csv"});

  RunConfig two = c;
  two.components = 2;
  try {
    (void)run("partial", two);
    FAIL("d = 2 must be rejected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::contract);
  }
  CHECK_THROWS_AS(run("frobnicate", c), Error);
  RunConfig noxi = c;
  noxi.xi.clear();
  CHECK_THROWS_AS(run("graph", noxi), Error);
  fs::remove_all(dir);
}
