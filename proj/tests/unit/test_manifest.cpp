#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <set>

#include "qa/errors.hpp"
#include "qa/manifest.hpp"
#include "support/fixtures.hpp"

using namespace qa;
namespace fs = std::filesystem;

namespace {

  std::set<WordPair> pairs_of(Transducer const& t, std::size_t len) {
    auto v = enumerate_pairs(t, len);
    return {v.begin(), v.end()};
  }

  fs::path scratch(std::string const& name) {
    auto p = fs::temp_directory_path() / ("qa_manifest_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }

}  // namespace

TEST_CASE("manifest round trip") {
  for (auto name : {"z", "z2", "c3", "bicyclic"}) {
    INFO(name);
    auto const& m   = fixtures::load(name);
    auto const& s   = *m.structure;
    auto        dir = scratch(name);
    auto        p   = save_manifest(s, dir, name, m.oracle_spec.contains("params") &&
                                                     m.oracle_spec["params"].contains("file")
                                                 ? nlohmann::json(nullptr)
                                                 : m.oracle_spec);
    auto back = load_manifest(p);
    REQUIRE(back.structure);
    auto const& t = *back.structure;
    CHECK(t.alphabet() == s.alphabet());
    CHECK(t.mode() == s.mode());
    CHECK(t.letter_reps() == s.letter_reps());
    CHECK(t.neutral_rep() == s.neutral_rep());
    CHECK(enumerate(t.language(), 5) == enumerate(s.language(), 5));
    CHECK(pairs_of(t.equality(), 4) == pairs_of(s.equality(), 4));
    for (Symbol a = 0; a < static_cast<Symbol>(s.alphabet().size()); ++a) {
      CHECK(pairs_of(t.right_mult(a), 4) == pairs_of(s.right_mult(a), 4));
    }
    fs::remove_all(dir);
  }
}

TEST_CASE("manifest errors") {
  auto const data = fixtures::data_dir();
  CHECK_THROWS_AS(parse_manifest("{", data), ParseError);
  CHECK_THROWS_AS(parse_manifest("[]", data), ParseError);
  CHECK_THROWS_AS(parse_manifest(R"({"alphabet": ["p", "m"], "L": "z/L.fa"})", data), ParseError);
  CHECK_THROWS_AS(parse_manifest(R"({"alphabet": ["p"], "L": "z/L.fa", "R": "z/R.ftd",
                                     "R_a": {"p": "z/Rp.ftd"}, "letter_reps": {"p": "p"}})",
                                 data),
                  ParseError);
  CHECK_THROWS_AS(parse_manifest(R"({"alphabet": ["a"], "oracle": {"name": "nope"}})", data),
                  ParseError);
  CHECK_THROWS_AS(parse_manifest(R"({"autogen": true})", data), ParseError);
  try {
    parse_manifest(R"({"alphabet": ["p", "m"], "L": "missing.fa", "R": "z/R.ftd",
                       "R_a": {"p": "z/Rp.ftd", "m": "z/Rm.ftd"}, "letter_reps": {"p": "p", "m": "m"}})",
                   data);
    FAIL("expected a parse error");
  } catch (ParseError const& e) {
    CHECK(std::string(e.what()).find("missing.fa") != std::string::npos);
  }
}

TEST_CASE("oracle specs") {
  auto const data = fixtures::data_dir();
  Alphabet   dm{"d", "m"};
  auto       o = make_oracle(nlohmann::json::parse(R"({"name": "recoded", "params": {
        "base": {"name": "zk", "alphabet": ["p", "m"], "params": {"letters": {"p": [1], "m": [-1]}}},
        "lift": {"d": "pp", "m": "m"}}})"),
                       dm, data);
  CHECK(o->eval(dm.parse_word("dm")) == o->eval(dm.parse_word("mdmmd")));
  CHECK(o->eval(dm.parse_word("d")) != o->eval(dm.parse_word("mmd")));

  Alphabet pmc{"p", "m", "c"};
  auto     w = make_oracle(nlohmann::json::parse(R"({"name": "with_identity", "params": {
        "letter": "c", "base": {"name": "zk", "params": {"letters": {"p": [1], "m": [-1]}}}}})"),
                       pmc, data);
  CHECK(w->eval(pmc.parse_word("c")) == w->identity());
}
