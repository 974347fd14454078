#pragma once

// Classical finite automata over a finite alphabet.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <string>
#include <string_view>
#include <vector>

#include "qa/word.hpp"

namespace qa {

  using State = std::int32_t;

  struct Transition {
    State  from;
    Symbol label;  // kEpsilon for an ε-move
    State  to;

    friend auto operator<=>(Transition const&, Transition const&) = default;
  };

  // Nondeterministic automaton with ε-moves. States are 0..num_states-1.
  // Transitions are stored in insertion order; equality and printing use
  // the sorted, duplicate-free transition set.
  class Nfa {
   public:
    Nfa() = default;
    Nfa(Alphabet alphabet, std::size_t num_states);

    Alphabet const& alphabet() const noexcept {
      return alphabet_;
    }
    std::size_t num_states() const noexcept {
      return initial_flags_.size();
    }
    std::vector<State> initial() const;
    std::vector<State> final_states() const;
    std::vector<Transition> const& transitions() const noexcept {
      return transitions_;
    }

    State add_state();
    void  add_initial(State s);
    void  add_final(State s);
    void  set_final(State s, bool f);
    void  add_transition(State from, Symbol label, State to);

    bool is_initial(State s) const {
      return initial_flags_[static_cast<std::size_t>(s)] != 0;
    }
    bool is_final(State s) const {
      return final_flags_[static_cast<std::size_t>(s)] != 0;
    }
    bool has_epsilon() const;

    // Sorts and deduplicates the transition list.
    void canonicalize();

    friend bool operator==(Nfa const& x, Nfa const& y);

   private:
    void check_state(State s) const;

    Alphabet                  alphabet_;
    std::vector<std::uint8_t> initial_flags_;
    std::vector<std::uint8_t> final_flags_;
    std::vector<Transition>   transitions_;
  };

  // Outgoing adjacency of an Nfa: for each state, (label, target) pairs.
  std::vector<std::vector<std::pair<Symbol, State>>> out_edges(Nfa const& n);

  // Deterministic automaton with a single initial state and a (possibly
  // partial) transition table; kNoState marks a missing transition.
  class Dfa {
   public:
    static constexpr State kNoState = -1;

    Dfa() = default;
    Dfa(Alphabet alphabet, std::size_t num_states, State initial);

    Alphabet const& alphabet() const noexcept {
      return alphabet_;
    }
    std::size_t num_states() const noexcept {
      return finals_.size();
    }
    State initial() const noexcept {
      return initial_;
    }
    bool is_final(State s) const {
      return finals_[static_cast<std::size_t>(s)] != 0;
    }
    void set_final(State s, bool f = true) {
      finals_[static_cast<std::size_t>(s)] = f ? 1 : 0;
    }
    State next(State s, Symbol a) const {
      return table_[static_cast<std::size_t>(s) * alphabet_.size() + static_cast<std::size_t>(a)];
    }
    void set_next(State s, Symbol a, State t) {
      table_[static_cast<std::size_t>(s) * alphabet_.size() + static_cast<std::size_t>(a)] = t;
    }
    State add_state();

    // Follows w from s; kNoState if a transition is missing.
    State run(State s, std::span<Symbol const> w) const;
    bool  accepts(std::span<Symbol const> w) const;
    bool  is_complete() const;

    Nfa to_nfa() const;

    friend bool operator==(Dfa const&, Dfa const&) = default;

   private:
    Alphabet                  alphabet_;
    State                     initial_ = 0;
    std::vector<std::uint8_t> finals_;
    std::vector<State>        table_;
  };

  inline constexpr std::size_t kDefaultStateCap = 1'000'000;

  ////////////////////////////////////////////////////////////////////////
  // Text format
  ////////////////////////////////////////////////////////////////////////

  Nfa         parse_automaton(std::string_view text);
  std::string print_automaton(Nfa const& n);

  ////////////////////////////////////////////////////////////////////////
  // Constructions
  ////////////////////////////////////////////////////////////////////////

  Nfa empty_language(Alphabet const& a);
  Nfa universal_language(Alphabet const& a);  // A*
  Nfa nonempty_words(Alphabet const& a);      // A+
  Nfa single_word(Alphabet const& a, Word const& w);
  Nfa finite_language(Alphabet const& a, std::vector<Word> const& words);

  // Same language over a larger alphabet whose tokens include ours.
  Nfa embed(Nfa const& n, Alphabet const& target);

  // The ε-closure of a set of states (sorted result).
  std::vector<State> epsilon_closure(Nfa const& n, std::vector<State> states);

  Nfa remove_epsilon(Nfa const& n);

  // Keeps accessible and co-accessible states only, renumbered in order.
  Nfa  trim(Nfa const& n);
  bool is_trim(Nfa const& n);

  // Subset construction. The result is accessible and complete (a sink
  // state is added when needed). Throws ResourceLimit past state_cap.
  Dfa determinize(Nfa const& n, std::size_t state_cap = kDefaultStateCap);

  // Minimal complete DFA (Moore partition refinement).
  Dfa minimize(Dfa const& d);

  enum class BooleanOp { union_, intersection, complement, difference };

  Nfa boolean(BooleanOp op, Nfa const& x, Nfa const* y = nullptr);
  Nfa union_of(Nfa const& x, Nfa const& y);
  Nfa intersection(Nfa const& x, Nfa const& y);
  Nfa complement(Nfa const& x);
  Nfa difference(Nfa const& x, Nfa const& y);
  Nfa concatenation(Nfa const& x, Nfa const& y);

  // Image of the language under a letter-to-word morphism into `target`.
  Nfa apply_morphism(Nfa const& n, std::vector<Word> const& images, Alphabet const& target);

  bool is_empty(Nfa const& n);
  bool accepts(Nfa const& n, std::span<Symbol const> w);
  bool is_subset(Nfa const& x, Nfa const& y);
  bool is_finite_language(Nfa const& n);

  // Accepted words of length <= max_len, strictly shortlex increasing.
  std::vector<Word> enumerate(Nfa const& n, std::size_t max_len);

  // Shortlex-least accepted word, if any.
  std::optional<Word> shortlex_least(Nfa const& n);

  // Shortlex-least m such that reading m from `state` can reach a final
  // state; |m| < num_states. Throws PreconditionError when `state` is not
  // co-accessible.
  Word completion_word(Nfa const& n, State state);

}  // namespace qa
