#pragma once

// Ground-truth semigroups used to check structures: μ as an evaluator over
// words, plus the undirected Cayley graph for distance queries.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qa/word.hpp"

namespace qa {

  // Elements are encoded by value: two handles are equal iff they denote
  // the same element.
  using Element = std::vector<std::int64_t>;

  struct ElementHash {
    std::size_t operator()(Element const& e) const noexcept {
      std::size_t h = 0x84222325cbf29ce4ULL;
      for (auto x : e) {
        h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return h;
    }
  };

  enum class OracleKind { semigroup, monoid, group };

  char const* to_string(OracleKind k);

  class SemigroupOracle {
   public:
    explicit SemigroupOracle(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
    virtual ~SemigroupOracle() = default;

    Alphabet const& alphabet() const noexcept {
      return alphabet_;
    }

    virtual std::string name() const       = 0;
    virtual OracleKind  kind() const       = 0;
    virtual Element     generator(Symbol a) const = 0;
    virtual Element     multiply(Element const& x, Element const& y) const = 0;

    // The identity of the monoid, or an adjoined one for semigroups: the
    // value of the empty word.
    virtual Element identity() const = 0;

    // Finite cardinality of the semigroup generated by the letters (the
    // adjoined identity not counted).
    virtual std::optional<std::size_t> size() const {
      return std::nullopt;
    }

    // True when the oracle knows the semigroup is infinite.
    virtual bool certifies_infinite() const {
      return false;
    }

    // Group inverse; nullopt for non-groups.
    virtual std::optional<Element> inverse(Element const& x) const;

    // Neighbours in the undirected Cayley graph: x·a for every letter a and
    // every y with y·a = x. The default uses inverse() and so only works
    // for groups.
    virtual std::vector<Element> neighbors(Element const& x) const;

    Element eval(std::span<Symbol const> w) const;

    bool equal(Element const& x, Element const& y) const {
      return x == y;
    }

    // Human readable form of an element, for reports.
    virtual std::string describe(Element const& x) const;

   private:
    Alphabet alphabet_;
  };

  using OraclePtr = std::shared_ptr<SemigroupOracle const>;

  ////////////////////////////////////////////////////////////////////////
  // Builtins
  ////////////////////////////////////////////////////////////////////////

  // Multiplication table: rows[i][j] = i·j, letters mapped to elements.
  struct MultiplicationTable {
    std::size_t                                  elements = 0;
    std::vector<std::pair<std::string, std::size_t>> generators;
    std::vector<std::vector<std::size_t>>       rows;
  };

  // Header `elements N`, then `generators a=3 b=5 ...`, then N rows of N
  // indices. Checks associativity.
  MultiplicationTable parse_table(std::string_view text);

  // The oracle alphabet is the table's generator order unless given.
  OraclePtr table_oracle(MultiplicationTable const& table,
                         std::optional<Alphabet> alphabet = std::nullopt);

  // Letters act as vectors of ℤ^k (group when the letter set is closed
  // under negation, monoid otherwise) or of ℕ^k.
  OraclePtr zk_oracle(Alphabet const& a, std::vector<std::vector<std::int64_t>> const& vectors);
  OraclePtr nk_oracle(Alphabet const& a, std::vector<std::vector<std::int64_t>> const& vectors);

  OraclePtr free_monoid_oracle(Alphabet const& a);

  // Free group on the letters of `a` paired as generator / inverse: the
  // alphabet must be an inverse alphabet (tokens x and x^).
  OraclePtr free_group_oracle(Alphabet const& a);

  // ⟨b, c | bc = 1⟩, elements c^i b^j.
  OraclePtr bicyclic_oracle(Alphabet const& a, Symbol b, Symbol c);

  // Adds a letter evaluating to the identity.
  OraclePtr with_identity_letter(OraclePtr base, std::string const& token);

  // ν over a new alphabet with ν(b) = μ(lift(b)).
  OraclePtr recoded_oracle(OraclePtr base, Alphabet const& b, std::vector<Word> const& lift);

  ////////////////////////////////////////////////////////////////////////
  // Cayley graph
  ////////////////////////////////////////////////////////////////////////

  // BFS distance in the undirected Cayley graph; nullopt past cap.
  std::optional<std::size_t> cayley_distance(SemigroupOracle const& o, Element const& s,
                                             Element const& t, std::size_t cap);

  // Elements within distance radius of the identity, in BFS order. Throws
  // ResourceLimit when more than cap elements are found.
  std::vector<Element> ball(SemigroupOracle const& o, std::size_t radius,
                            std::size_t cap = 1'000'000);

  // Shortlex-least word g with |g| <= max_len and x·μ(g) = y (directed).
  std::optional<Word> connecting_word(SemigroupOracle const& o, Element const& x,
                                      Element const& y, std::size_t max_len,
                                      std::size_t cap = 1'000'000);

}  // namespace qa
