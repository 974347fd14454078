#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "qa/errors.hpp"
#include "qa/group.hpp"
#include "support/fixtures.hpp"

using namespace qa;

namespace {

  InvAlphabet const f2 = InvAlphabet::from_base({"a", "b"});

  Word random_word(std::mt19937& rng, std::size_t k, std::size_t min_len, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(min_len, max_len);
    std::uniform_int_distribution<Symbol>      letter(0, static_cast<Symbol>(k - 1));
    Word                                       w(len(rng));
    for (auto& x : w) {
      x = letter(rng);
    }
    return w;
  }

  // Reference reduction: repeatedly delete the leftmost cancelling pair.
  Word naive_reduce(InvAlphabet const& b, Word w) {
    for (bool again = true; again;) {
      again = false;
      for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (w[i + 1] == b.inverse(w[i])) {
          w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
          again = true;
          break;
        }
      }
    }
    return w;
  }

  std::set<WordPair> pairs_of(Transducer const& t, std::size_t len) {
    auto v = enumerate_pairs(t, len);
    return {v.begin(), v.end()};
  }

}  // namespace

TEST_CASE("inverse alphabets") {
  CHECK(f2.alphabet().tokens() == std::vector<std::string>{"a", "a^", "b", "b^"});
  CHECK(f2.inverse(0) == 1);
  CHECK(f2.inverse(1) == 0);
  CHECK(f2.inverse(3) == 2);
  CHECK_THROWS_AS(InvAlphabet(Alphabet{"a", "b"}), AlphabetMismatch);
  CHECK(InvAlphabet(Alphabet{"x^", "y", "x", "y^"}).inverse(0) == 2);
}

TEST_CASE("free reduction") {
  CHECK(free_reduce(f2, Word{0, 1}).empty());
  CHECK(free_reduce(f2, Word{0, 2, 1}) == Word({0, 2, 1}));
  CHECK(free_reduce(f2, Word{0, 2, 3, 1, 2}) == Word({2}));

  std::mt19937 rng(1);
  for (int i = 0; i < 300; ++i) {
    auto u = random_word(rng, 4, 0, 10);
    auto v = random_word(rng, 4, 0, 10);
    auto r = free_reduce(f2, u);
    CHECK(r == naive_reduce(f2, u));
    CHECK(free_reduce(f2, r) == r);
    CHECK(r.size() <= u.size());
    CHECK(free_reduce(f2, concat(u, inverse_word(f2, u))).empty());
    CHECK(free_reduce(f2, concat(u, v)) == free_reduce(f2, concat(r, free_reduce(f2, v))));
  }
}

TEST_CASE("telescoping identity") {
  // n = 1: h_1 = 1 and both sides are a_1 g_1 b_1^-1 g_0^-1
  auto one = telescope(f2, {Word{2}, Word{3, 0}}, {Word{0}}, {Word{}});
  CHECK(one.equal);
  CHECK(one.lhs == free_reduce(f2, Word{0, 3, 0, 3}));

  auto trivial = telescope(f2, {Word{}, Word{}, Word{}}, {Word{0}, Word{2}}, {Word{0}, Word{2}});
  CHECK(trivial.equal);
  CHECK(trivial.lhs.empty());

  std::mt19937 rng(2);
  for (int i = 0; i < 200; ++i) {
    std::uniform_int_distribution<std::size_t> len(1, 5);
    auto const                                 n = len(rng);
    std::vector<Word>                          g, a, b;
    for (std::size_t j = 0; j <= n; ++j) {
      g.push_back(random_word(rng, 4, 0, 3));
    }
    for (std::size_t j = 0; j < n; ++j) {
      a.push_back(random_word(rng, 4, 0, 1));
      b.push_back(random_word(rng, 4, 0, 1));
    }
    REQUIRE(telescope(f2, g, a, b).equal);
  }
  CHECK_THROWS_AS(telescope(f2, {Word{}}, {Word{0}}, {Word{0}}), PreconditionError);
}

TEST_CASE("short relators") {
  auto const& z2 = fixtures::structure("z2");
  auto const& o  = fixtures::oracle("z2");
  auto        rs = short_relators(z2, 4);
  auto const  a  = z2.alphabet();
  std::set<Word> set(rs.begin(), rs.end());
  CHECK(set.count(a.parse_word("x y x^ y^")) == 1);
  CHECK(set.count(a.parse_word("x x^")) == 1);
  for (auto const& r : rs) {
    REQUIRE(o.eval(r) == o.identity());
  }
  // exhaustive: every trivial word of length <= 4 is listed
  std::size_t trivial = 0;
  for (auto const& w : all_words(4, 4)) {
    trivial += !w.empty() && o.eval(w) == o.identity();
  }
  CHECK(rs.size() == trivial);
  CHECK(short_relators(z2, 1).empty());

  // free group of rank one: exactly the words reducing to ε
  auto const& f1 = fixtures::structure("f1");
  InvAlphabet b(f1.alphabet());
  std::vector<Word> expect;
  for (auto const& w : all_words(2, 6)) {
    if (!w.empty() && free_reduce(b, w).empty()) {
      expect.push_back(w);
    }
  }
  CHECK(short_relators(f1, 6) == expect);
}

TEST_CASE("relator decomposition") {
  auto const& z2 = fixtures::structure("z2");
  auto const& o  = fixtures::oracle("z2");
  auto const  a  = z2.alphabet();

  auto d = relator_decomposition(z2, o, a.parse_word("x y x^ y^"));
  INFO(d.failure);
  CHECK(d.verified);
  CHECK(!d.factors.empty());
  CHECK(d.factors.size() <= d.count_bound);
  for (auto const& f : d.factors) {
    CHECK(f.relator.size() <= d.length_bound);
    CHECK(o.eval(f.relator) == o.identity());
  }

  auto e = relator_decomposition(z2, o, Word{});
  CHECK(e.verified);
  CHECK(e.factors.empty());

  auto s = relator_decomposition(z2, o, a.parse_word("x x^"));
  CHECK(s.verified);

  CHECK_THROWS_AS(relator_decomposition(z2, o, a.parse_word("x")), PreconditionError);
  CHECK_THROWS_AS(relator_decomposition(fixtures::structure("z"), fixtures::oracle("z"), Word{0, 1}),
                  AlphabetMismatch);

  std::mt19937 rng(5);
  int          done = 0;
  while (done < 20) {
    auto w = random_word(rng, 4, 1, 8);
    if (o.eval(w) != o.identity()) {
      continue;
    }
    ++done;
    auto r = relator_decomposition(z2, o, w);
    INFO(a.format(w) << ": " << r.failure);
    REQUIRE(r.verified);
  }
}

TEST_CASE("transducers from the Cayley ball") {
  auto const& c3   = fixtures::structure("c3");
  auto const& o3   = fixtures::oracle("c3");
  auto const  l3   = determinize(c3.language());
  auto const  p3   = c3.lipschitz_constant();
  for (Symbol a = 0; a < 2; ++a) {
    auto t = build_ta(l3, o3, p3, a);
    CHECK(pairs_of(t, 8) == pairs_of(c3.right_mult(a), 8));
  }
  CHECK(pairs_of(build_ta(l3, o3, p3, std::nullopt), 8) == pairs_of(c3.equality(), 8));

  auto const& z  = fixtures::structure("z");
  auto const& oz = fixtures::oracle("z");
  auto const  lz = determinize(z.language());
  auto        tp = build_ta(lz, oz, z.lipschitz_constant(), Symbol{0});
  CHECK(pairs_of(tp, 6) == pairs_of(z.right_mult(0), 6));

  // accepted pairs end with g = μ(u)^-1 μ(v) = μ(p)
  for (auto const& [u, v] : enumerate_pairs(tp, 6)) {
    CHECK(oz.multiply(oz.eval(u), oz.generator(0)) == oz.eval(v));
  }

  CHECK_THROWS_AS(build_ta(determinize(fixtures::structure("bicyclic").language()),
                           fixtures::oracle("bicyclic"), 3, Symbol{0}),
                  PreconditionError);
}
