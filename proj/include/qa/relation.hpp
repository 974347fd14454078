#pragma once

// Rational relations over A* x B*, represented by finite transducers.
//
// A transducer is normalized (Nivat form) when every transition reads
// exactly one letter on exactly one tape. Then every accepting path of
// length k is labelled by a pair (u, v) with |u| + |v| = k, which is what
// the product constructions and the quadratic membership test rely on.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qa/automata.hpp"
#include "qa/word.hpp"

namespace qa {

  struct TTransition {
    State  from;
    Symbol in;   // kEpsilon when the input tape does not move
    Symbol out;  // kEpsilon when the output tape does not move
    State  to;

    friend auto operator<=>(TTransition const&, TTransition const&) = default;
  };

  class Transducer {
   public:
    Transducer() = default;
    Transducer(Alphabet input, Alphabet output, std::size_t num_states);

    Alphabet const& input_alphabet() const noexcept {
      return input_;
    }
    Alphabet const& output_alphabet() const noexcept {
      return output_;
    }
    std::size_t num_states() const noexcept {
      return initial_flags_.size();
    }
    std::vector<State> initial() const;
    std::vector<State> final_states() const;
    std::vector<TTransition> const& transitions() const noexcept {
      return transitions_;
    }

    State add_state();
    void  add_initial(State s);
    void  add_final(State s);
    void  add_transition(State from, Symbol in, Symbol out, State to);

    bool is_initial(State s) const {
      return initial_flags_[static_cast<std::size_t>(s)] != 0;
    }
    bool is_final(State s) const {
      return final_flags_[static_cast<std::size_t>(s)] != 0;
    }

    // Every transition moves exactly one tape.
    bool nivat_normal() const;

    void canonicalize();

    friend bool operator==(Transducer const& x, Transducer const& y);

   private:
    void check_state(State s) const;

    Alphabet                  input_;
    Alphabet                  output_;
    std::vector<std::uint8_t> initial_flags_;
    std::vector<std::uint8_t> final_flags_;
    std::vector<TTransition>  transitions_;
  };

  ////////////////////////////////////////////////////////////////////////
  // Text format
  ////////////////////////////////////////////////////////////////////////

  Transducer  parse_transducer(std::string_view text);
  std::string print_transducer(Transducer const& t);

  ////////////////////////////////////////////////////////////////////////
  // Constructions
  ////////////////////////////////////////////////////////////////////////

  // {(u, u) | u in L}
  Transducer diagonal(Nfa const& language);

  // A finite relation given by its pairs.
  Transducer from_pairs(Alphabet const& input, Alphabet const& output,
                        std::vector<WordPair> const& pairs);

  // L(k1) x L(k2)
  Transducer cartesian_product(Nfa const& k1, Nfa const& k2);

  Transducer union_of(Transducer const& x, Transducer const& y);

  // Accessible and co-accessible part.
  Transducer trim(Transducer const& t);

  // Same relation; (ε,ε)-moves removed by closure, two-letter moves split
  // through a fresh state, result trimmed.
  Transducer nivat_normalize(Transducer const& t);

  Transducer inverse(Transducer const& t);

  // {(u, v) | exists m, (u, m) in inner and (m, v) in outer}
  Transducer compose(Transducer const& outer, Transducer const& inner);

  // t ∩ (L(k1) x L(k2))
  Transducer restrict_recognizable(Transducer const& t, Nfa const& k1, Nfa const& k2);

  // {(phi(u), psi(v)) | (u, v) in t}; images are words over the target
  // alphabets, indexed by the source letters.
  Transducer apply_morphism_pair(Transducer const& t, std::vector<Word> const& phi,
                                 Alphabet const& phi_target, std::vector<Word> const& psi,
                                 Alphabet const& psi_target);

  Nfa domain(Transducer const& t);
  Nfa image(Transducer const& t);

  // The Nivat language H: the underlying one-tape automaton over the merged
  // alphabet of labels "a|-" and "-|b". Requires a normalized transducer;
  // states are shared with t.
  Nfa label_automaton(Transducer const& t);

  ////////////////////////////////////////////////////////////////////////
  // Queries
  ////////////////////////////////////////////////////////////////////////

  // Dynamic program over (position in x, position in y, state):
  // O(|x| |y| |transitions|).
  bool contains_pair(Transducer const& t, std::span<Symbol const> x, std::span<Symbol const> y);

  struct RelationPath {
    std::vector<State>                   states;  // length labels.size() + 1
    std::vector<std::pair<Symbol, Symbol>> labels;
  };

  // An accepting path for (x, y) in a normalized transducer (its states are
  // those of t). Deterministic: the first path in a fixed search order.
  std::optional<RelationPath> accepting_path(Transducer const& t, std::span<Symbol const> x,
                                             std::span<Symbol const> y);

  // Pairs with |u|, |v| <= max_len, sorted and duplicate free.
  std::vector<WordPair> enumerate_pairs(Transducer const& t, std::size_t max_len);

  // |v| - |u| when it is the same for every pair of the relation.
  std::optional<long> length_offset(Transducer const& t);
  bool                is_length_preserving(Transducer const& t);

  // Paired alphabet with tokens "x|y", x major.
  Alphabet pair_alphabet(Alphabet const& a, Alphabet const& b);

  // For a length-preserving relation, the automaton over A x B accepting
  // (u1,v1)...(un,vn). Throws PreconditionError otherwise.
  Nfa to_letter_pair_automaton(Transducer const& t);

  // Automaton over (A ∪ {pad}) x (B ∪ {pad}) accepting the minimal right
  // paddings of the pairs of t. Exact for relations whose accepting paths
  // keep the two tapes within max_lag letters of each other while both
  // still have letters to read (0 = number of states of the normalized
  // machine); throws ResourceLimit when a path needs a larger lag.
  Nfa pad(Transducer const& t, std::string const& pad_symbol = "$", std::size_t max_lag = 0);

}  // namespace qa
