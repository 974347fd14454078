#pragma once

// Quasi-automatic structures (A, L, R, (R_a)) and the constructions built
// on them.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qa/automata.hpp"
#include "qa/errors.hpp"
#include "qa/oracle.hpp"
#include "qa/relation.hpp"
#include "qa/uniformizer.hpp"
#include "qa/word.hpp"

namespace qa {

  enum class Mode { semigroup, monoid };

  char const* to_string(Mode m);

  // Relations are stored normalized. Copies share the lazily filled caches
  // (uniformizers, constants), which are guarded by a mutex.
  class QaStructure {
   public:
    QaStructure(Alphabet alphabet, Mode mode, Nfa language, Transducer equality,
                std::vector<Transducer> right_mult, std::vector<Word> letter_reps,
                std::optional<Word> neutral_rep = std::nullopt);

    Alphabet const& alphabet() const noexcept {
      return alphabet_;
    }
    Mode mode() const noexcept {
      return mode_;
    }
    Nfa const& language() const noexcept {
      return language_;
    }
    Transducer const& equality() const noexcept {
      return equality_;
    }
    Transducer const& right_mult(Symbol a) const;
    std::vector<Transducer> const& right_mults() const noexcept {
      return right_mult_;
    }
    Word const& letter_rep(Symbol a) const;
    std::vector<Word> const& letter_reps() const noexcept {
      return letter_reps_;
    }
    std::optional<Word> const& neutral_rep() const noexcept {
      return neutral_rep_;
    }

    Uniformizer const& uniformizer(Symbol a) const;

    // N with |representative(u)| <= N^|u| (see representative()).
    std::size_t growth_constant() const;

    // P = N_H + 1, N_H the largest state count among the normalized R,
    // R_a and their inverses.
    std::size_t lipschitz_constant() const;

    // Cheap structural invariants (domains, images, A+ in semigroup mode,
    // letter representatives in L). Returns human readable violations.
    std::vector<std::string> check_invariants() const;

   private:
    struct Cache;

    Alphabet                alphabet_;
    Mode                    mode_;
    Nfa                     language_;
    Transducer              equality_;
    std::vector<Transducer> right_mult_;
    std::vector<Word>       letter_reps_;
    std::optional<Word>     neutral_rep_;
    std::shared_ptr<Cache>  cache_;
  };

  ////////////////////////////////////////////////////////////////////////
  // Validation against an oracle
  ////////////////////////////////////////////////////////////////////////

  struct ValidationIssue {
    std::string           check;  // "invariant", "R", "R_a", "surjectivity"
    std::string           detail;
    Word                  u, v;
    std::optional<Symbol> letter;
  };

  struct ValidationReport {
    bool                         passed = true;
    std::size_t                  depth  = 0;
    std::size_t                  words_checked    = 0;
    std::size_t                  pairs_checked    = 0;
    std::size_t                  elements_reached = 0;
    bool                         surjectivity_sampled = true;
    std::vector<ValidationIssue> issues;  // at most max_issues
    std::size_t                  issue_count = 0;
  };

  ValidationReport validate(QaStructure const& s, SemigroupOracle const& oracle, std::size_t depth,
                            std::size_t max_issues = 20);

  ////////////////////////////////////////////////////////////////////////
  // Monoid / semigroup conversion
  ////////////////////////////////////////////////////////////////////////

  // Reads the structure as one for the monoid (μ(ε) = 1); data unchanged.
  QaStructure semigroup_to_monoid(QaStructure const& s);

  enum class ConversionBranch { automatic, intersect, fresh_letter };

  struct SemigroupConversion {
    QaStructure         structure;
    bool                fresh_letter = false;
    std::optional<Word> identity_witness;  // nonempty word of L with value 1
    OraclePtr           oracle;            // oracle for the new alphabet
  };

  // Either intersects with A+ (when some nonempty word of L up to `depth`
  // evaluates to the identity) or adds a fresh letter standing for 1.
  SemigroupConversion monoid_to_semigroup(QaStructure const& s, OraclePtr const& oracle,
                                          std::size_t depth, ConversionBranch branch = ConversionBranch::automatic,
                                          std::string const& fresh_token = "c");

  // f(T) over alphabet + {token}: pairs with an empty component get the
  // fresh letter instead, (ε, ε) becomes (c, c).
  Transducer replace_empty_by_letter(Transducer const& t, std::string const& token);

  ////////////////////////////////////////////////////////////////////////
  // Relations, representatives, word problem
  ////////////////////////////////////////////////////////////////////////

  // R_w = {(u, v) in L×L | μ(uw) = μ(v)}; R_ε = R.
  Transducer rw_relation(QaStructure const& s, std::span<Symbol const> w);

  struct RepresentativeOptions {
    std::size_t max_steps = 0;  // bound on total representative length, 0 = none
  };

  // l(u), computed by l(ua) = τ_a(l(u)) from l(first letter); l(ε) = l₁ in
  // monoid mode.
  Word representative(QaStructure const& s, std::span<Symbol const> u,
                      RepresentativeOptions const& opts = {});

  // All prefix representatives l(u[0..i)) for i = 1..|u| (index 0 holds
  // l(ε) when defined, else an empty word).
  std::vector<Word> prefix_representatives(QaStructure const& s, std::span<Symbol const> u,
                                           RepresentativeOptions const& opts = {});

  bool word_problem(QaStructure const& s, std::span<Symbol const> u, std::span<Symbol const> v,
                    RepresentativeOptions const& opts = {});

  ////////////////////////////////////////////////////////////////////////
  // Changes of representatives and generators
  ////////////////////////////////////////////////////////////////////////

  QaStructure change_generators(QaStructure const& s, Alphabet const& b,
                                std::vector<Word> const& alpha, std::vector<Word> const& lift);

  QaStructure restrict_representatives(QaStructure const& s, Nfa const& sublanguage);

  ////////////////////////////////////////////////////////////////////////
  // Presentations and derivations
  ////////////////////////////////////////////////////////////////////////

  struct Presentation {
    Alphabet   alphabet;
    Transducer relation;
  };

  Presentation presentation(QaStructure const& s);

  struct Rewrite {
    Word        prefix;       // x, replaced in w_i
    Word        replacement;  // y
    bool        forward;      // (x, y) in T when true, (y, x) otherwise
    std::string rule;         // "letter", "right-mult", "equality"
  };

  struct Derivation {
    std::vector<Word>    steps;     // w_0 .. w_n
    std::vector<Rewrite> rewrites;  // n entries
  };

  // w_0 = u, ..., w_n = v with n = |u| + |v| + 1. Every step is checked
  // against the presentation.
  Derivation derivation(QaStructure const& s, std::span<Symbol const> u, std::span<Symbol const> v,
                        RepresentativeOptions const& opts = {});

  // Checks a derivation against T (contains_pair on each rewrite).
  bool check_derivation(Presentation const& p, Derivation const& d);

  ////////////////////////////////////////////////////////////////////////
  // Weak Lipschitz property
  ////////////////////////////////////////////////////////////////////////

  struct CertificateStep {
    Symbol              in  = kEpsilon;  // a_i
    Symbol              out = kEpsilon;  // b_i
    Word                alpha, beta;     // completion of the path after step i
    std::optional<Word> connector;       // g_i with μ(a_1..a_i) μ(g_i) = μ(b_1..b_i)
    std::size_t         distance = 0;    // undirected Cayley distance
  };

  struct LipschitzCertificate {
    Word                         u, v;
    std::optional<Symbol>        letter;
    std::size_t                  bound = 0;  // P
    CertificateStep              start;      // prefix 0
    std::vector<CertificateStep> steps;      // one per letter of u and v
    bool                         verified = false;
    std::string                  failure;
  };

  // Needs (u, v) in R (no letter) or R_a. Connectors are computed for
  // group oracles only.
  LipschitzCertificate lipschitz_certificate(QaStructure const& s, SemigroupOracle const& oracle,
                                             std::span<Symbol const> u, std::span<Symbol const> v,
                                             std::optional<Symbol> letter);

  // Recomputes every claim of the certificate with the oracle.
  bool verify_certificate(QaStructure const& s, SemigroupOracle const& oracle,
                          LipschitzCertificate const& c, std::string* why = nullptr);

  ////////////////////////////////////////////////////////////////////////
  // Decision and semi-decision procedures
  ////////////////////////////////////////////////////////////////////////

  // False when l₁ is not a two-sided identity; otherwise true iff every
  // letter has a left inverse in L.
  bool is_group(QaStructure const& s, std::span<Symbol const> l1);

  // E = ∩_a π((A* × {l(a)}) ∩ R_a)
  Nfa left_neutral_set(QaStructure const& s);

  struct NeutralSearch {
    std::optional<Word> neutral;
    std::size_t         candidates = 0;
    bool                exhausted_language = false;  // E finite and fully checked
  };

  NeutralSearch find_neutral(QaStructure const& s, std::size_t budget);

  enum class Finiteness { finite, infinite_evidence, unknown };

  char const* to_string(Finiteness f);

  struct FinitenessResult {
    Finiteness  verdict = Finiteness::unknown;
    std::size_t n       = 0;        // for finite: every word of length n+1 is a shorter one
    std::size_t classes = 0;        // distinct elements met among words of length <= n
  };

  FinitenessResult is_finite(QaStructure const& s, std::size_t budget,
                             SemigroupOracle const* oracle = nullptr,
                             RepresentativeOptions const& opts = {});

  ////////////////////////////////////////////////////////////////////////
  // Graded structures
  ////////////////////////////////////////////////////////////////////////

  struct AutomaticStructure {
    Nfa              equality;    // over A × A
    std::vector<Nfa> right_mult;  // over (A ∪ {$}) × (A ∪ {$})
  };

  class NotGraded : public PreconditionError {
   public:
    NotGraded(std::string const& what, std::optional<Symbol> letter, std::optional<WordPair> witness)
        : PreconditionError(what), letter_(letter), witness_(std::move(witness)) {}

    std::optional<Symbol> letter() const noexcept {
      return letter_;
    }
    std::optional<WordPair> const& witness() const noexcept {
      return witness_;
    }

   private:
    std::optional<Symbol>   letter_;
    std::optional<WordPair> witness_;
  };

  AutomaticStructure graded_to_automatic(QaStructure const& s, std::string const& pad_symbol = "$");

}  // namespace qa
