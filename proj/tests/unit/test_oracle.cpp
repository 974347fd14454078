#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qa/errors.hpp"
#include "qa/oracle.hpp"
#include "support/fixtures.hpp"

using namespace qa;

namespace {

  Word random_word(std::mt19937& rng, std::size_t k, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<Symbol>      letter(0, static_cast<Symbol>(k - 1));
    Word                                       w(len(rng));
    for (auto& x : w) {
      x = letter(rng);
    }
    return w;
  }

  std::vector<OraclePtr> all_builtins() {
    Alphabet xy{"x", "x^", "y", "y^"};
    Alphabet ab{"a", "b"};
    return {
        fixtures::load("z").oracle,
        fixtures::load("c3").oracle,
        fixtures::load("s3").oracle,
        fixtures::load("lz2").oracle,
        fixtures::load("bicyclic").oracle,
        fixtures::load("n2").oracle,
        fixtures::load("z2").oracle,
        free_monoid_oracle(ab),
        free_group_oracle(xy),
        with_identity_letter(fixtures::load("z").oracle, "c"),
        recoded_oracle(fixtures::load("z").oracle, Alphabet{"d", "e"}, {Word{0, 0}, Word{1, 1, 1}}),
    };
  }

}  // namespace

TEST_CASE("oracles are homomorphisms") {
  std::mt19937 rng(7);
  for (auto const& o : all_builtins()) {
    INFO(o->name());
    auto const k = o->alphabet().size();
    for (int i = 0; i < 200; ++i) {
      auto u = random_word(rng, k, 5);
      auto v = random_word(rng, k, 5);
      REQUIRE(o->eval(concat(u, v)) == o->multiply(o->eval(u), o->eval(v)));
    }
    CHECK(o->eval(Word{}) == o->identity());
  }
}

TEST_CASE("builtin values") {
  auto const& z = fixtures::oracle("z");
  CHECK(z.kind() == OracleKind::group);
  CHECK(z.eval(Word{0, 0, 1}) == z.eval(Word{0}));
  CHECK(z.certifies_infinite());
  CHECK_FALSE(z.size());

  auto const& n2 = fixtures::oracle("n2");
  CHECK(n2.kind() == OracleKind::monoid);
  CHECK(n2.eval(Word{0, 1}) == n2.eval(Word{1, 0}));

  auto const& b = fixtures::oracle("bicyclic");
  CHECK(b.kind() == OracleKind::monoid);
  CHECK(b.eval(Word{0, 1}) == b.identity());     // bc = 1
  CHECK(b.eval(Word{1, 0}) != b.identity());     // cb != 1
  CHECK(b.eval(Word{1, 0, 1}) == b.eval(Word{1}));

  auto const& c3 = fixtures::oracle("c3");
  CHECK(c3.kind() == OracleKind::group);
  CHECK(c3.size() == std::optional<std::size_t>(3));
  CHECK(c3.eval(Word{0, 0, 0}) == c3.identity());
  CHECK(c3.eval(Word{0, 0}) == c3.eval(Word{1}));

  auto const& lz = fixtures::oracle("lz2");
  CHECK(lz.kind() == OracleKind::semigroup);
  CHECK(lz.eval(Word{0, 1, 1}) == lz.eval(Word{0}));

  auto f = free_group_oracle(Alphabet{"a", "a^", "b", "b^"});
  CHECK(f->kind() == OracleKind::group);
  CHECK(f->eval(Word{0, 2, 3, 1}) == f->identity());
  CHECK(f->eval(Word{0, 2}) != f->eval(Word{2, 0}));
  CHECK_THROWS_AS(free_group_oracle(Alphabet{"a", "b"}), Error);

  auto w = with_identity_letter(fixtures::load("c3").oracle, "e");
  CHECK(w->alphabet().tokens() == std::vector<std::string>{"a", "b", "e"});
  CHECK(w->eval(Word{2}) == w->identity());
  CHECK(w->eval(Word{0, 2, 0}) == w->eval(Word{1}));
}

TEST_CASE("multiplication tables") {
  auto t = parse_table("elements 2\ngenerators a=1\n0 1\n1 0\n");
  CHECK(t.elements == 2);
  auto o = table_oracle(t);
  CHECK(o->kind() == OracleKind::group);
  CHECK(o->size() == std::optional<std::size_t>(2));

  CHECK_THROWS_AS(parse_table("elements 2\ngenerators a=1\n0 1\n"), ParseError);
  CHECK_THROWS_AS(parse_table("elements 2\ngenerators a=5\n0 1\n1 0\n"), ParseError);
  // 0·(1·1) = 0·0 = 1 but (0·1)·1 = 1·1 = 0
  CHECK_THROWS_AS(parse_table("elements 2\ngenerators a=0\n1 1\n1 0\n"), ParseError);

  // only the generated part counts: a = 0 in a two-element monoid with zero 0
  auto sub = table_oracle(parse_table("elements 2\ngenerators a=0\n0 0\n0 1\n"));
  CHECK(sub->size() == std::optional<std::size_t>(1));
}

TEST_CASE("cayley distance and balls") {
  auto const& z = fixtures::oracle("z");
  auto const  e = z.identity();
  CHECK(cayley_distance(z, e, e, 0) == std::optional<std::size_t>(0));
  CHECK(cayley_distance(z, e, z.eval(Word{0, 0, 0}), 5) == std::optional<std::size_t>(3));
  CHECK_FALSE(cayley_distance(z, e, z.eval(Word{0, 0, 0}), 2));
  CHECK(ball(z, 0).size() == 1);
  CHECK(ball(z, 2).size() == 5);
  CHECK_THROWS_AS(ball(z, 10, 5), ResourceLimit);

  auto const& c3 = fixtures::oracle("c3");
  CHECK(ball(c3, 1).size() == 3);
  for (auto const& x : ball(c3, 2)) {
    for (auto const& y : ball(c3, 2)) {
      CHECK(cayley_distance(c3, x, y, 3).value() <= 1);
    }
  }

  // bicyclic: undirected distances although c has no left inverse
  auto const& b = fixtures::oracle("bicyclic");
  CHECK(cayley_distance(b, b.identity(), b.eval(Word{1, 0}), 4) == std::optional<std::size_t>(2));

  // metric on sampled triples
  std::mt19937 rng(3);
  for (auto name : {"z", "s3", "bicyclic", "n2", "lz2"}) {
    INFO(name);
    auto const& o = fixtures::oracle(name);
    for (int i = 0; i < 40; ++i) {
      auto x   = o.eval(random_word(rng, o.alphabet().size(), 3));
      auto y   = o.eval(random_word(rng, o.alphabet().size(), 3));
      auto w   = o.eval(random_word(rng, o.alphabet().size(), 3));
      auto dxy = cayley_distance(o, x, y, 12);
      auto dyx = cayley_distance(o, y, x, 12);
      auto dxw = cayley_distance(o, x, w, 12);
      auto dwy = cayley_distance(o, w, y, 12);
      REQUIRE(dxy == dyx);
      if (dxy && dxw && dwy) {
        REQUIRE(*dxy <= *dxw + *dwy);
      }
    }
  }
}

TEST_CASE("connecting words") {
  auto const& z = fixtures::oracle("z");
  auto        g = connecting_word(z, z.identity(), z.eval(Word{1, 1}), 4);
  CHECK(g == std::optional<Word>(Word{1, 1}));
  CHECK_FALSE(connecting_word(z, z.identity(), z.eval(Word{1, 1, 1}), 2));

  auto const& b = fixtures::oracle("bicyclic");
  // directed: c is reachable from 1, but right multiplication never removes a c
  CHECK(connecting_word(b, b.identity(), b.eval(Word{1}), 3) == std::optional<Word>(Word{1}));
  CHECK_FALSE(connecting_word(b, b.eval(Word{1}), b.identity(), 3));
}
