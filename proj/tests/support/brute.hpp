#pragma once

// Reference implementations used to check the library. They follow the
// definitions directly and favour obviousness over speed.

#include <map>
#include <random>
#include <set>
#include <vector>

#include "qa/automata.hpp"
#include "qa/relation.hpp"

namespace brute {

  using qa::Nfa;
  using qa::State;
  using qa::Symbol;
  using qa::Transducer;
  using qa::Word;
  using qa::WordPair;

  // Simulates n on w, states tracked as a set with ε-moves followed until
  // nothing changes.
  inline bool accepts(Nfa const& n, Word const& w) {
    auto const      init = n.initial();
    std::set<State> cur(init.begin(), init.end());
    auto            close = [&](std::set<State>& s) {
      bool grew = true;
      while (grew) {
        grew = false;
        for (auto const& t : n.transitions()) {
          if (t.label == qa::kEpsilon && s.count(t.from) && !s.count(t.to)) {
            s.insert(t.to);
            grew = true;
          }
        }
      }
    };
    close(cur);
    for (Symbol a : w) {
      std::set<State> next;
      for (auto const& t : n.transitions()) {
        if (t.label == a && cur.count(t.from)) {
          next.insert(t.to);
        }
      }
      cur = std::move(next);
      close(cur);
    }
    for (State s : cur) {
      if (n.is_final(s)) {
        return true;
      }
    }
    return false;
  }

  inline std::vector<Word> language(Nfa const& n, std::size_t max_len) {
    std::vector<Word> out;
    for (auto const& w : qa::all_words(n.alphabet().size(), max_len)) {
      if (accepts(n, w)) {
        out.push_back(w);
      }
    }
    return out;
  }

  // All pairs (u, v) with |u|, |v| <= max_len labelling an accepting path,
  // found by exploring configurations (state, u, v) directly on the raw
  // transducer.
  inline std::set<WordPair> pairs(Transducer const& t, std::size_t max_u, std::size_t max_v) {
    struct Conf {
      State s;
      Word  u, v;
      bool  operator<(Conf const& o) const {
        return std::tie(s, u, v) < std::tie(o.s, o.u, o.v);
      }
    };
    std::set<Conf>     seen;
    std::vector<Conf>  stack;
    std::set<WordPair> out;
    for (State s : t.initial()) {
      Conf c{s, {}, {}};
      seen.insert(c);
      stack.push_back(c);
    }
    while (!stack.empty()) {
      Conf c = stack.back();
      stack.pop_back();
      if (t.is_final(c.s)) {
        out.emplace(c.u, c.v);
      }
      for (auto const& tr : t.transitions()) {
        if (tr.from != c.s) {
          continue;
        }
        Conf d{tr.to, c.u, c.v};
        if (tr.in != qa::kEpsilon) {
          d.u.push_back(tr.in);
        }
        if (tr.out != qa::kEpsilon) {
          d.v.push_back(tr.out);
        }
        if (d.u.size() <= max_u && d.v.size() <= max_v && seen.insert(d).second) {
          stack.push_back(d);
        }
      }
    }
    return out;
  }

  inline std::set<WordPair> pairs(Transducer const& t, std::size_t max_len) {
    return pairs(t, max_len, max_len);
  }

  inline std::set<WordPair> compose(std::set<WordPair> const& outer,
                                    std::set<WordPair> const& inner, std::size_t max_len) {
    std::map<Word, std::vector<Word>> by_middle;
    for (auto const& [m, v] : outer) {
      if (v.size() <= max_len) {
        by_middle[m].push_back(v);
      }
    }
    std::set<WordPair> out;
    for (auto const& [u, m] : inner) {
      auto it = by_middle.find(m);
      if (it == by_middle.end() || u.size() > max_len) {
        continue;
      }
      for (auto const& v : it->second) {
        out.emplace(u, v);
      }
    }
    return out;
  }

  inline Nfa random_nfa(std::mt19937& rng, qa::Alphabet const& a, std::size_t states,
                        double density, bool epsilon = false) {
    Nfa                                    n(a, states);
    std::uniform_real_distribution<double> coin(0, 1);
    for (std::size_t s = 0; s < states; ++s) {
      if (s == 0 || coin(rng) < 0.2) {
        n.add_initial(static_cast<State>(s));
      }
      if (coin(rng) < 0.4) {
        n.add_final(static_cast<State>(s));
      }
      for (std::size_t t = 0; t < states; ++t) {
        for (Symbol x = epsilon ? -1 : 0; x < static_cast<Symbol>(a.size()); ++x) {
          if (coin(rng) < (x < 0 ? density / 3 : density)) {
            n.add_transition(static_cast<State>(s), x, static_cast<State>(t));
          }
        }
      }
    }
    return n;
  }

  inline Transducer random_transducer(std::mt19937& rng, qa::Alphabet const& a,
                                      qa::Alphabet const& b, std::size_t states, double density) {
    Transducer                             t(a, b, states);
    std::uniform_real_distribution<double> coin(0, 1);
    for (std::size_t s = 0; s < states; ++s) {
      if (s == 0) {
        t.add_initial(0);
      }
      if (coin(rng) < 0.4) {
        t.add_final(static_cast<State>(s));
      }
      for (std::size_t r = 0; r < states; ++r) {
        for (Symbol x = -1; x < static_cast<Symbol>(a.size()); ++x) {
          for (Symbol y = -1; y < static_cast<Symbol>(b.size()); ++y) {
            if (coin(rng) < (x < 0 && y < 0 ? density / 4 : density / 2)) {
              t.add_transition(static_cast<State>(s), x, y, static_cast<State>(r));
            }
          }
        }
      }
    }
    return t;
  }

  // Erases the pad symbol from both tapes of the words of length <= len of
  // an automaton over pair_alphabet(A+$, B+$). *minimal is cleared when a
  // pad is followed by a letter or both tapes are padded at once.
  inline std::set<WordPair> unpad(Nfa const& m, std::size_t in_size, std::size_t out_size,
                                  std::size_t len, bool* minimal = nullptr) {
    std::set<WordPair> out;
    auto const         kb = static_cast<Symbol>(out_size + 1);
    for (auto const& x : enumerate(m, len)) {
      Word u, v;
      bool u_done = false, v_done = false;
      for (Symbol s : x) {
        Symbol a = s / kb, b = s % kb;
        if (a == static_cast<Symbol>(in_size)) {
          u_done = true;
        } else {
          if (u_done && minimal) *minimal = false;
          u.push_back(a);
        }
        if (b == static_cast<Symbol>(out_size)) {
          v_done = true;
        } else {
          if (v_done && minimal) *minimal = false;
          v.push_back(b);
        }
        if (a == static_cast<Symbol>(in_size) && b == static_cast<Symbol>(out_size) && minimal) {
          *minimal = false;
        }
      }
      out.insert({u, v});
    }
    return out;
  }

}  // namespace brute
