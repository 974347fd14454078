#pragma once

// Constructions specific to groups: free reduction over an alphabet closed
// under inversion, the telescoping identity, decomposition of trivial words
// into conjugates of short relators, and transducers T_a rebuilt from a
// regular language and a Cayley ball.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qa/automata.hpp"
#include "qa/oracle.hpp"
#include "qa/relation.hpp"
#include "qa/structure.hpp"

namespace qa {

  // An alphabet whose tokens come in pairs x, x^ (formal inverses).
  class InvAlphabet {
   public:
    // Throws AlphabetMismatch when some token has no partner.
    explicit InvAlphabet(Alphabet a);

    // x, x^, y, y^, ...
    static InvAlphabet from_base(std::vector<std::string> const& base);

    Alphabet const& alphabet() const noexcept {
      return alphabet_;
    }
    Symbol inverse(Symbol s) const {
      return inverse_[static_cast<std::size_t>(s)];
    }

   private:
    Alphabet            alphabet_;
    std::vector<Symbol> inverse_;
  };

  // Cancels every factor x x^ and x^ x.
  Word free_reduce(InvAlphabet const& b, std::span<Symbol const> w);

  // w^-1 = reversed word with every letter inverted.
  Word inverse_word(InvAlphabet const& b, std::span<Symbol const> w);

  // Reduced product of words.
  Word free_product(InvAlphabet const& b, std::vector<Word> const& factors);

  struct TelescopeSides {
    Word lhs;  // ∏ h_i (a_i g_i b_i^-1 g_{i-1}^-1) h_i^-1, reduced
    Word rhs;  // a_1..a_n g_n b_n^-1..b_1^-1 g_0^-1, reduced
    bool equal = false;
  };

  // h_i = g_0 b_1 .. b_{i-1} g_{i-1}^-1. Needs |g| = |a| + 1 = |b| + 1.
  TelescopeSides telescope(InvAlphabet const& b, std::vector<Word> const& g,
                           std::vector<Word> const& a, std::vector<Word> const& bs);

  // Nonempty words of length <= bound equal to l₁ in s, in shortlex order.
  // bound 0 means 2P + 2. Throws ResourceLimit past max_words candidates.
  std::vector<Word> short_relators(QaStructure const& s, std::size_t bound = 0,
                                   std::size_t max_words = 2'000'000);

  struct RelatorFactor {
    Word conjugator;
    Word relator;
  };

  struct RelatorDecomposition {
    Word                       input;
    Word                       target;  // free_reduce(input)
    std::vector<RelatorFactor> factors;
    std::size_t                growth    = 0;  // N
    std::size_t                lipschitz = 0;  // P
    std::size_t                count_bound  = 0;  // 2 + 2k N^k (saturated)
    std::size_t                length_bound = 0;  // 2P + 2
    bool                       verified = false;
    std::string                failure;
  };

  // w with μ(w) = 1 as a product of conjugates h g h^-1 of relators g,
  // built from the prefix representatives of w and Lipschitz connectors.
  // The structure alphabet must be an inverse alphabet and the oracle a
  // group; the result is checked by free reduction and with the oracle.
  RelatorDecomposition relator_decomposition(QaStructure const& s, SemigroupOracle const& oracle,
                                             std::span<Symbol const> w,
                                             RepresentativeOptions const& opts = {});

  // States Q² × G₀ with G₀ the ball of radius p. The transition (x, ε) maps
  // g to μ(x)^-1 g and (ε, y) maps g to g μ(y); final states are (p, q, μ(a))
  // with p, q final (a = nullopt: the identity). The result is trimmed.
  Transducer build_ta(Dfa const& language, SemigroupOracle const& oracle, std::size_t p,
                      std::optional<Symbol> a, std::size_t ball_cap = 1'000'000);

}  // namespace qa
