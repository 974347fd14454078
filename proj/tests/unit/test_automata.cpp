#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qa/automata.hpp"
#include "qa/errors.hpp"
#include "support/brute.hpp"

using namespace qa;

namespace {

  Alphabet const ab{"a", "b"};

  Nfa a_star_b() {
    return parse_automaton(
        "alphabet a b\nstates 2\ninitial 0\nfinal 1\ntrans 0 a 0\ntrans 0 b 1\n");
  }

  Nfa ends_in_a() {
    Nfa n(ab, 2);
    n.add_initial(0);
    n.add_final(1);
    n.add_transition(0, 0, 0);
    n.add_transition(0, 1, 0);
    n.add_transition(0, 0, 1);
    return n;
  }

  Nfa power_of(Alphabet const& a, Symbol x, std::size_t period) {
    Nfa n(a, period);
    n.add_initial(0);
    n.add_final(0);
    for (std::size_t s = 0; s < period; ++s) {
      n.add_transition(static_cast<State>(s), x, static_cast<State>((s + 1) % period));
    }
    return n;
  }

  bool same_language(Nfa const& x, Nfa const& y, std::size_t len) {
    return enumerate(x, len) == enumerate(y, len);
  }

}  // namespace

TEST_CASE("parse single transition machine") {
  auto n = parse_automaton("alphabet a\nstates 2\ninitial 0\nfinal 1\ntrans 0 a 1\n");
  CHECK(enumerate(n, 4) == std::vector<Word>{{0}});
}

TEST_CASE("parse rejects undeclared references") {
  CHECK_THROWS_WITH(parse_automaton("alphabet a\nstates 2\ninitial 0\ntrans 0 a 7\n"),
                    Catch::Matchers::ContainsSubstring("undeclared state"));
  CHECK_THROWS_WITH(parse_automaton("alphabet a\nstates 2\ntrans 0 z 1\n"),
                    Catch::Matchers::ContainsSubstring("undeclared symbol"));
  try {
    parse_automaton("alphabet a\nstates 2\n\nbogus 1\n");
    FAIL("no exception");
  } catch (ParseError const& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("print then parse is the identity") {
  auto n = a_star_b();
  CHECK(parse_automaton(print_automaton(n)) == n);
  auto text = print_automaton(n);
  CHECK(print_automaton(parse_automaton(text)) == text);

  std::mt19937 rng(7);
  for (int i = 0; i < 20; ++i) {
    auto r = brute::random_nfa(rng, ab, 4, 0.3, true);
    CHECK(parse_automaton(print_automaton(r)) == r);
  }
}

TEST_CASE("determinize small cases") {
  auto d = determinize(ends_in_a());
  CHECK(d.num_states() == 2);
  CHECK(d.is_complete());
  CHECK(same_language(d.to_nfa(), ends_in_a(), 6));

  auto already = determinize(a_star_b()).to_nfa();
  CHECK(same_language(determinize(already).to_nfa(), a_star_b(), 6));

  Nfa eps(Alphabet{"a"}, 2);
  eps.add_initial(0);
  eps.add_final(1);
  eps.add_transition(0, kEpsilon, 1);
  eps.add_transition(1, kEpsilon, 0);
  eps.add_transition(1, 0, 1);
  CHECK(enumerate(determinize(eps).to_nfa(), 3) == all_words(1, 3));
}

TEST_CASE("determinize respects the state cap") {
  // (a|b)* a (a|b)^6: the subset construction needs 2^7 states.
  Nfa n(ab, 8);
  n.add_initial(0);
  n.add_final(7);
  n.add_transition(0, 0, 0);
  n.add_transition(0, 1, 0);
  n.add_transition(0, 0, 1);
  for (State s = 1; s < 7; ++s) {
    n.add_transition(s, 0, s + 1);
    n.add_transition(s, 1, s + 1);
  }
  CHECK_THROWS_AS(determinize(n, 50), ResourceLimit);
  CHECK(determinize(n).num_states() == 128);
}

TEST_CASE("boolean operations") {
  Alphabet a{"a"};
  CHECK(same_language(intersection(universal_language(a), power_of(a, 0, 2)), power_of(a, 0, 2), 8));
  CHECK(same_language(complement(empty_language(ab)), universal_language(ab), 5));
  auto plus = difference(universal_language(a), single_word(a, {}));
  CHECK(same_language(plus, nonempty_words(a), 8));
  CHECK_THROWS_AS(union_of(universal_language(a), universal_language(ab)), AlphabetMismatch);
  auto plus_a = nonempty_words(a);
  CHECK(same_language(boolean(BooleanOp::union_, power_of(a, 0, 2), &plus_a), universal_language(a), 8));
}

TEST_CASE("emptiness, membership and enumeration") {
  Nfa dead(ab, 2);
  dead.add_initial(0);
  dead.add_transition(0, 0, 1);
  CHECK(is_empty(trim(dead)));
  CHECK(is_empty(dead));
  CHECK(accepts(a_star_b(), Word{0, 0, 1}));
  CHECK_FALSE(accepts(a_star_b(), Word{0, 1, 0}));

  Alphabet am{"a", "m"};
  auto     lang = union_of(power_of(am, 0, 1), power_of(am, 1, 1));
  CHECK(enumerate(lang, 2) == std::vector<Word>{{}, {0}, {1}, {0, 0}, {1, 1}});
  CHECK(enumerate(lang, 2) == brute::language(lang, 2));
}

TEST_CASE("completion words") {
  auto n   = a_star_b();
  auto d   = determinize(n);
  auto s   = d.run(d.initial(), Word{0, 0});
  CHECK(completion_word(d.to_nfa(), s) == Word{1});
  CHECK(completion_word(n, 1).empty());
  Nfa stuck = n;
  stuck.add_state();
  CHECK_THROWS_AS(completion_word(stuck, 2), PreconditionError);

  std::mt19937 rng(11);
  for (int i = 0; i < 40; ++i) {
    auto m = trim(brute::random_nfa(rng, ab, 5, 0.25));
    for (State q = 0; q < static_cast<State>(m.num_states()); ++q) {
      auto w = completion_word(m, q);
      CHECK(w.size() <= m.num_states());
      // BFS oracle: shortlex-least word accepted from q
      Nfa shifted(m.alphabet(), m.num_states());
      for (auto const& t : m.transitions()) {
        shifted.add_transition(t.from, t.label, t.to);
      }
      for (State f : m.final_states()) {
        shifted.add_final(f);
      }
      shifted.add_initial(q);
      auto lang = brute::language(shifted, m.num_states());
      REQUIRE_FALSE(lang.empty());
      CHECK(w == lang.front());
    }
  }
}

TEST_CASE("determinization and minimization preserve the language") {
  std::mt19937 rng(3);
  for (int i = 0; i < 60; ++i) {
    auto n = brute::random_nfa(rng, ab, 1 + i % 5, 0.3, true);
    auto d = determinize(n);
    auto m = minimize(d);
    CHECK(m.num_states() <= d.num_states());
    CHECK(minimize(m).num_states() == m.num_states());
    for (auto const& w : all_words(2, 8)) {
      bool expect = brute::accepts(n, w);
      REQUIRE(d.accepts(w) == expect);
      REQUIRE(m.accepts(w) == expect);
      REQUIRE(accepts(n, w) == expect);
    }
    auto cc = complement(complement(d.to_nfa()));
    CHECK(same_language(cc, n, 6));
  }
}

TEST_CASE("enumerate is strictly shortlex increasing") {
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    auto n = brute::random_nfa(rng, ab, 4, 0.35, true);
    auto e = enumerate(n, 6);
    for (std::size_t k = 1; k < e.size(); ++k) {
      CHECK(shortlex_less(e[k - 1], e[k]));
    }
    CHECK(e == brute::language(n, 6));
    if (auto least = shortlex_least(n)) {
      CHECK(!e.empty());
      if (!e.empty()) {
        CHECK(*least == e.front());
      }
    } else {
      CHECK(e.empty());
    }
  }
}

TEST_CASE("finiteness, inclusion, concatenation, morphisms") {
  CHECK(is_finite_language(finite_language(ab, {{0}, {0, 1}, {}})));
  CHECK_FALSE(is_finite_language(a_star_b()));
  CHECK(is_subset(single_word(ab, {0, 0, 1}), a_star_b()));
  CHECK_FALSE(is_subset(a_star_b(), single_word(ab, {0, 0, 1})));

  auto cat = concatenation(a_star_b(), a_star_b());
  for (auto const& w : all_words(2, 6)) {
    bool expect = false;
    for (std::size_t k = 0; k <= w.size(); ++k) {
      Word x(w.begin(), w.begin() + static_cast<long>(k)), y(w.begin() + static_cast<long>(k), w.end());
      expect = expect || (brute::accepts(a_star_b(), x) && brute::accepts(a_star_b(), y));
    }
    CHECK(accepts(cat, w) == expect);
  }

  Alphabet xyz{"x", "y", "z"};
  auto     img = apply_morphism(a_star_b(), {{0, 1}, {}}, xyz);
  CHECK(enumerate(img, 4) == std::vector<Word>{{}, {0, 1}, {0, 1, 0, 1}});

  auto big = embed(a_star_b(), Alphabet{"a", "b", "c"});
  CHECK(accepts(big, Word{0, 1}));
  CHECK_FALSE(accepts(big, Word{2}));
}
