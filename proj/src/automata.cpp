#include "qa/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "qa/errors.hpp"
#include "text_format.hpp"

namespace qa {

  ////////////////////////////////////////////////////////////////////////
  // Nfa
  ////////////////////////////////////////////////////////////////////////

  Nfa::Nfa(Alphabet alphabet, std::size_t num_states)
      : alphabet_(std::move(alphabet)),
        initial_flags_(num_states, 0),
        final_flags_(num_states, 0) {}

  std::vector<State> Nfa::initial() const {
    std::vector<State> out;
    for (std::size_t s = 0; s < initial_flags_.size(); ++s) {
      if (initial_flags_[s] != 0) {
        out.push_back(static_cast<State>(s));
      }
    }
    return out;
  }

  std::vector<State> Nfa::final_states() const {
    std::vector<State> out;
    for (std::size_t s = 0; s < final_flags_.size(); ++s) {
      if (final_flags_[s] != 0) {
        out.push_back(static_cast<State>(s));
      }
    }
    return out;
  }

  State Nfa::add_state() {
    initial_flags_.push_back(0);
    final_flags_.push_back(0);
    return static_cast<State>(initial_flags_.size() - 1);
  }

  void Nfa::check_state(State s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= num_states()) {
      throw Error("undeclared state " + std::to_string(s));
    }
  }

  void Nfa::add_initial(State s) {
    check_state(s);
    initial_flags_[static_cast<std::size_t>(s)] = 1;
  }

  void Nfa::add_final(State s) {
    set_final(s, true);
  }

  void Nfa::set_final(State s, bool f) {
    check_state(s);
    final_flags_[static_cast<std::size_t>(s)] = f ? 1 : 0;
  }

  void Nfa::add_transition(State from, Symbol label, State to) {
    check_state(from);
    check_state(to);
    if (label != kEpsilon && (label < 0 || static_cast<std::size_t>(label) >= alphabet_.size())) {
      throw Error("symbol " + std::to_string(label) + " out of range");
    }
    transitions_.push_back({from, label, to});
  }

  bool Nfa::has_epsilon() const {
    return std::any_of(transitions_.begin(), transitions_.end(), [](Transition const& t) {
      return t.label == kEpsilon;
    });
  }

  void Nfa::canonicalize() {
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  }

  bool operator==(Nfa const& x, Nfa const& y) {
    if (!(x.alphabet_ == y.alphabet_) || x.initial_flags_ != y.initial_flags_
        || x.final_flags_ != y.final_flags_) {
      return false;
    }
    auto tx = x.transitions_;
    auto ty = y.transitions_;
    std::sort(tx.begin(), tx.end());
    std::sort(ty.begin(), ty.end());
    tx.erase(std::unique(tx.begin(), tx.end()), tx.end());
    ty.erase(std::unique(ty.begin(), ty.end()), ty.end());
    return tx == ty;
  }

  std::vector<std::vector<std::pair<Symbol, State>>> out_edges(Nfa const& n) {
    std::vector<std::vector<std::pair<Symbol, State>>> adj(n.num_states());
    for (auto const& t : n.transitions()) {
      adj[static_cast<std::size_t>(t.from)].emplace_back(t.label, t.to);
    }
    for (auto& v : adj) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    return adj;
  }

  ////////////////////////////////////////////////////////////////////////
  // Dfa
  ////////////////////////////////////////////////////////////////////////

  Dfa::Dfa(Alphabet alphabet, std::size_t num_states, State initial)
      : alphabet_(std::move(alphabet)),
        initial_(initial),
        finals_(num_states, 0),
        table_(num_states * alphabet_.size(), kNoState) {}

  State Dfa::add_state() {
    finals_.push_back(0);
    table_.resize(table_.size() + alphabet_.size(), kNoState);
    return static_cast<State>(finals_.size() - 1);
  }

  State Dfa::run(State s, std::span<Symbol const> w) const {
    for (Symbol a : w) {
      if (s == kNoState) {
        return kNoState;
      }
      s = next(s, a);
    }
    return s;
  }

  bool Dfa::accepts(std::span<Symbol const> w) const {
    if (num_states() == 0) {
      return false;
    }
    State s = run(initial_, w);
    return s != kNoState && is_final(s);
  }

  bool Dfa::is_complete() const {
    return std::find(table_.begin(), table_.end(), kNoState) == table_.end();
  }

  Nfa Dfa::to_nfa() const {
    Nfa n(alphabet_, num_states());
    if (num_states() == 0) {
      return n;
    }
    n.add_initial(initial_);
    for (std::size_t s = 0; s < num_states(); ++s) {
      if (finals_[s] != 0) {
        n.add_final(static_cast<State>(s));
      }
      for (std::size_t a = 0; a < alphabet_.size(); ++a) {
        State t = next(static_cast<State>(s), static_cast<Symbol>(a));
        if (t != kNoState) {
          n.add_transition(static_cast<State>(s), static_cast<Symbol>(a), t);
        }
      }
    }
    return n;
  }

  ////////////////////////////////////////////////////////////////////////
  // Text format
  ////////////////////////////////////////////////////////////////////////

  Nfa parse_automaton(std::string_view text) {
    std::optional<Alphabet>    alphabet;
    std::optional<std::size_t> num_states;
    std::optional<Nfa>         n;

    auto state_of = [&](std::string const& field, std::size_t line) {
      if (!num_states) {
        throw ParseError("\"states\" must precede state references", line);
      }
      auto s = detail::parse_index(field, line);
      if (s >= *num_states) {
        throw ParseError("undeclared state " + field, line);
      }
      return static_cast<State>(s);
    };
    auto ensure = [&](std::size_t line) -> Nfa& {
      if (!alphabet) {
        throw ParseError("\"alphabet\" must come first", line);
      }
      if (!num_states) {
        throw ParseError("\"states\" must precede this line", line);
      }
      if (!n) {
        n.emplace(*alphabet, *num_states);
      }
      return *n;
    };

    for (auto const& line : detail::tokenize_lines(text)) {
      auto const& key = line.fields[0];
      if (key == "alphabet") {
        if (alphabet) {
          throw ParseError("duplicate \"alphabet\" line", line.number);
        }
        try {
          alphabet.emplace(std::vector<std::string>(line.fields.begin() + 1, line.fields.end()));
        } catch (Error const& e) {
          throw ParseError(e.what(), line.number);
        }
      } else if (key == "states") {
        if (num_states) {
          throw ParseError("duplicate \"states\" line", line.number);
        }
        if (line.fields.size() != 2) {
          throw ParseError("expected \"states N\"", line.number);
        }
        num_states = detail::parse_index(line.fields[1], line.number);
      } else if (key == "initial" || key == "final") {
        auto& m = ensure(line.number);
        for (std::size_t i = 1; i < line.fields.size(); ++i) {
          auto s = state_of(line.fields[i], line.number);
          key == "initial" ? m.add_initial(s) : m.add_final(s);
        }
      } else if (key == "trans") {
        auto& m = ensure(line.number);
        if (line.fields.size() != 4) {
          throw ParseError("expected \"trans p SYM q\"", line.number);
        }
        auto   p = state_of(line.fields[1], line.number);
        auto   q = state_of(line.fields[3], line.number);
        Symbol a = kEpsilon;
        if (line.fields[2] != "-") {
          auto s = alphabet->find(line.fields[2]);
          if (!s) {
            throw ParseError("undeclared symbol \"" + line.fields[2] + "\"", line.number);
          }
          a = *s;
        }
        m.add_transition(p, a, q);
      } else {
        throw ParseError("unknown directive \"" + key + "\"", line.number);
      }
    }
    if (!alphabet) {
      throw ParseError("missing \"alphabet\" line", 0);
    }
    if (!num_states) {
      throw ParseError("missing \"states\" line", 0);
    }
    return ensure(0);
  }

  std::string print_automaton(Nfa const& n) {
    std::ostringstream out;
    out << "alphabet";
    for (auto const& t : n.alphabet().tokens()) {
      out << ' ' << t;
    }
    out << "\nstates " << n.num_states() << "\ninitial";
    for (State s : n.initial()) {
      out << ' ' << s;
    }
    out << "\nfinal";
    for (State s : n.final_states()) {
      out << ' ' << s;
    }
    out << '\n';
    auto ts = n.transitions();
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (auto const& t : ts) {
      out << "trans " << t.from << ' '
          << (t.label == kEpsilon ? std::string("-") : n.alphabet().token(t.label)) << ' ' << t.to
          << '\n';
    }
    return out.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Constructions
  ////////////////////////////////////////////////////////////////////////

  Nfa empty_language(Alphabet const& a) {
    return Nfa(a, 0);
  }

  Nfa universal_language(Alphabet const& a) {
    Nfa n(a, 1);
    n.add_initial(0);
    n.add_final(0);
    for (std::size_t s = 0; s < a.size(); ++s) {
      n.add_transition(0, static_cast<Symbol>(s), 0);
    }
    return n;
  }

  Nfa nonempty_words(Alphabet const& a) {
    Nfa n(a, 2);
    n.add_initial(0);
    n.add_final(1);
    for (std::size_t s = 0; s < a.size(); ++s) {
      n.add_transition(0, static_cast<Symbol>(s), 1);
      n.add_transition(1, static_cast<Symbol>(s), 1);
    }
    return n;
  }

  Nfa single_word(Alphabet const& a, Word const& w) {
    return finite_language(a, {w});
  }

  Nfa finite_language(Alphabet const& a, std::vector<Word> const& words) {
    // A trie: one state per distinct prefix.
    Nfa                                 n(a, 1);
    std::map<std::pair<State, Symbol>, State> child;
    n.add_initial(0);
    for (auto const& w : words) {
      State s = 0;
      for (Symbol x : w) {
        if (x < 0 || static_cast<std::size_t>(x) >= a.size()) {
          throw Error("symbol out of range in finite_language");
        }
        auto [it, fresh] = child.try_emplace({s, x}, State{0});
        if (fresh) {
          it->second = n.add_state();
          n.add_transition(s, x, it->second);
        }
        s = it->second;
      }
      n.add_final(s);
    }
    return n;
  }

  Nfa embed(Nfa const& n, Alphabet const& target) {
    Nfa out(target, n.num_states());
    for (State s : n.initial()) {
      out.add_initial(s);
    }
    for (State s : n.final_states()) {
      out.add_final(s);
    }
    for (auto const& t : n.transitions()) {
      out.add_transition(t.from,
                         t.label == kEpsilon ? kEpsilon : target.symbol(n.alphabet().token(t.label)),
                         t.to);
    }
    return out;
  }

  namespace {
    std::vector<std::vector<State>> epsilon_edges(Nfa const& n) {
      std::vector<std::vector<State>> eps(n.num_states());
      for (auto const& t : n.transitions()) {
        if (t.label == kEpsilon) {
          eps[static_cast<std::size_t>(t.from)].push_back(t.to);
        }
      }
      return eps;
    }

    std::vector<State> closure_with(std::vector<std::vector<State>> const& eps,
                                    std::vector<State>                     states) {
      std::vector<std::uint8_t> seen(eps.size(), 0);
      std::vector<State>        stack;
      for (State s : states) {
        if (seen[static_cast<std::size_t>(s)] == 0) {
          seen[static_cast<std::size_t>(s)] = 1;
          stack.push_back(s);
        }
      }
      std::vector<State> out;
      while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        out.push_back(s);
        for (State t : eps[static_cast<std::size_t>(s)]) {
          if (seen[static_cast<std::size_t>(t)] == 0) {
            seen[static_cast<std::size_t>(t)] = 1;
            stack.push_back(t);
          }
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    }

    void require_same_alphabet(Nfa const& x, Nfa const& y) {
      if (!(x.alphabet() == y.alphabet())) {
        throw AlphabetMismatch("automata over different alphabets");
      }
    }

    std::vector<std::uint8_t> reachable_from(std::size_t                                n,
                                             std::vector<std::vector<State>> const&    adj,
                                             std::vector<State> const&                 seeds) {
      std::vector<std::uint8_t> seen(n, 0);
      std::vector<State>        stack;
      for (State s : seeds) {
        if (seen[static_cast<std::size_t>(s)] == 0) {
          seen[static_cast<std::size_t>(s)] = 1;
          stack.push_back(s);
        }
      }
      while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (State t : adj[static_cast<std::size_t>(s)]) {
          if (seen[static_cast<std::size_t>(t)] == 0) {
            seen[static_cast<std::size_t>(t)] = 1;
            stack.push_back(t);
          }
        }
      }
      return seen;
    }

    // Words explored in shortlex order over subsets of states, keeping the
    // first word that reaches each subset. Returns the first word whose
    // subset contains a final state.
    std::optional<Word> least_accepted_from(Nfa const& n, std::vector<State> start) {
      auto eps = epsilon_edges(n);
      auto adj = out_edges(n);
      auto k   = n.alphabet().size();

      using Subset = std::vector<State>;
      std::set<Subset>                    visited;
      std::deque<std::pair<Subset, Word>> queue;
      Subset                              first = closure_with(eps, std::move(start));
      if (first.empty()) {
        return std::nullopt;
      }
      visited.insert(first);
      queue.emplace_back(first, Word{});
      while (!queue.empty()) {
        auto [set, word] = std::move(queue.front());
        queue.pop_front();
        if (std::any_of(set.begin(), set.end(), [&](State s) { return n.is_final(s); })) {
          return word;
        }
        for (std::size_t a = 0; a < k; ++a) {
          Subset next;
          for (State s : set) {
            for (auto const& [label, t] : adj[static_cast<std::size_t>(s)]) {
              if (label == static_cast<Symbol>(a)) {
                next.push_back(t);
              }
            }
          }
          if (next.empty()) {
            continue;
          }
          next = closure_with(eps, std::move(next));
          if (visited.insert(next).second) {
            Word w = word;
            w.push_back(static_cast<Symbol>(a));
            queue.emplace_back(std::move(next), std::move(w));
          }
        }
      }
      return std::nullopt;
    }
  }  // namespace

  std::vector<State> epsilon_closure(Nfa const& n, std::vector<State> states) {
    return closure_with(epsilon_edges(n), std::move(states));
  }

  Nfa remove_epsilon(Nfa const& n) {
    if (!n.has_epsilon()) {
      return n;
    }
    auto eps = epsilon_edges(n);
    auto adj = out_edges(n);
    Nfa  out(n.alphabet(), n.num_states());
    for (State s : n.initial()) {
      out.add_initial(s);
    }
    for (std::size_t p = 0; p < n.num_states(); ++p) {
      auto cl = closure_with(eps, {static_cast<State>(p)});
      for (State q : cl) {
        if (n.is_final(q)) {
          out.add_final(static_cast<State>(p));
        }
        for (auto const& [label, r] : adj[static_cast<std::size_t>(q)]) {
          if (label != kEpsilon) {
            out.add_transition(static_cast<State>(p), label, r);
          }
        }
      }
    }
    out.canonicalize();
    return out;
  }

  Nfa trim(Nfa const& n) {
    std::size_t                     count = n.num_states();
    std::vector<std::vector<State>> fwd(count), bwd(count);
    for (auto const& t : n.transitions()) {
      fwd[static_cast<std::size_t>(t.from)].push_back(t.to);
      bwd[static_cast<std::size_t>(t.to)].push_back(t.from);
    }
    auto acc  = reachable_from(count, fwd, n.initial());
    auto coac = reachable_from(count, bwd, n.final_states());

    std::vector<State> renumber(count, -1);
    State              next = 0;
    for (std::size_t s = 0; s < count; ++s) {
      if (acc[s] != 0 && coac[s] != 0) {
        renumber[s] = next++;
      }
    }
    Nfa out(n.alphabet(), static_cast<std::size_t>(next));
    for (std::size_t s = 0; s < count; ++s) {
      if (renumber[s] < 0) {
        continue;
      }
      if (n.is_initial(static_cast<State>(s))) {
        out.add_initial(renumber[s]);
      }
      if (n.is_final(static_cast<State>(s))) {
        out.add_final(renumber[s]);
      }
    }
    for (auto const& t : n.transitions()) {
      auto f = renumber[static_cast<std::size_t>(t.from)];
      auto g = renumber[static_cast<std::size_t>(t.to)];
      if (f >= 0 && g >= 0) {
        out.add_transition(f, t.label, g);
      }
    }
    out.canonicalize();
    return out;
  }

  bool is_trim(Nfa const& n) {
    return trim(n).num_states() == n.num_states();
  }

  Dfa determinize(Nfa const& n, std::size_t state_cap) {
    auto eps = epsilon_edges(n);
    auto adj = out_edges(n);
    auto k   = n.alphabet().size();

    using Subset = std::vector<State>;
    std::map<Subset, State> index;
    std::vector<Subset>     subsets;

    Dfa  d(n.alphabet(), 0, 0);
    auto intern = [&](Subset s) {
      auto it = index.find(s);
      if (it != index.end()) {
        return it->second;
      }
      if (subsets.size() >= state_cap) {
        throw ResourceLimit("determinization exceeded the state cap of "
                            + std::to_string(state_cap));
      }
      State id = d.add_state();
      d.set_final(id, std::any_of(s.begin(), s.end(), [&](State q) { return n.is_final(q); }));
      index.emplace(s, id);
      subsets.push_back(std::move(s));
      return id;
    };

    intern(closure_with(eps, n.initial()));
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      for (std::size_t a = 0; a < k; ++a) {
        Subset next;
        for (State s : subsets[i]) {
          for (auto const& [label, t] : adj[static_cast<std::size_t>(s)]) {
            if (label == static_cast<Symbol>(a)) {
              next.push_back(t);
            }
          }
        }
        State target = intern(closure_with(eps, std::move(next)));
        d.set_next(static_cast<State>(i), static_cast<Symbol>(a), target);
      }
    }
    return d;
  }

  Dfa minimize(Dfa const& input) {
    auto const& alphabet = input.alphabet();
    auto        k        = alphabet.size();
    if (input.num_states() == 0) {
      Dfa d(alphabet, 1, 0);
      for (std::size_t a = 0; a < k; ++a) {
        d.set_next(0, static_cast<Symbol>(a), 0);
      }
      return d;
    }
    // Accessible part, completed with a sink.
    std::vector<State> order{input.initial()};
    std::vector<State> renumber(input.num_states(), -1);
    renumber[static_cast<std::size_t>(input.initial())] = 0;
    bool needs_sink                                     = false;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t a = 0; a < k; ++a) {
        State t = input.next(order[i], static_cast<Symbol>(a));
        if (t == Dfa::kNoState) {
          needs_sink = true;
        } else if (renumber[static_cast<std::size_t>(t)] < 0) {
          renumber[static_cast<std::size_t>(t)] = static_cast<State>(order.size());
          order.push_back(t);
        }
      }
    }
    std::size_t const m    = order.size() + (needs_sink ? 1 : 0);
    State const       sink = static_cast<State>(order.size());
    std::vector<State> delta(m * k);
    std::vector<int>   cls(m);
    for (std::size_t i = 0; i < m; ++i) {
      bool is_sink = needs_sink && i == order.size();
      cls[i]       = (!is_sink && input.is_final(order[i])) ? 1 : 0;
      for (std::size_t a = 0; a < k; ++a) {
        State t = is_sink ? Dfa::kNoState : input.next(order[i], static_cast<Symbol>(a));
        delta[i * k + a] = t == Dfa::kNoState ? sink : renumber[static_cast<std::size_t>(t)];
      }
    }
    // Moore refinement until the number of classes is stable.
    std::size_t num_classes = 0;
    while (true) {
      std::map<std::vector<int>, int> signatures;
      std::vector<int>                next(m);
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<int> sig{cls[i]};
        for (std::size_t a = 0; a < k; ++a) {
          sig.push_back(cls[static_cast<std::size_t>(delta[i * k + a])]);
        }
        auto [it, fresh] = signatures.try_emplace(std::move(sig), static_cast<int>(signatures.size()));
        next[i]          = it->second;
      }
      cls.swap(next);
      if (signatures.size() == num_classes) {
        break;
      }
      num_classes = signatures.size();
    }
    // Number classes by first occurrence in BFS order so the result is canonical.
    std::vector<int> class_id(num_classes, -1);
    int              next_id = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (class_id[static_cast<std::size_t>(cls[i])] < 0) {
        class_id[static_cast<std::size_t>(cls[i])] = next_id++;
      }
    }
    Dfa d(alphabet, num_classes, 0);
    for (std::size_t i = 0; i < m; ++i) {
      State c = class_id[static_cast<std::size_t>(cls[i])];
      bool  is_sink = needs_sink && i == order.size();
      d.set_final(c, !is_sink && input.is_final(order[i]));
      for (std::size_t a = 0; a < k; ++a) {
        d.set_next(c, static_cast<Symbol>(a),
                   class_id[static_cast<std::size_t>(cls[static_cast<std::size_t>(delta[i * k + a])])]);
      }
    }
    return d;
  }

  Nfa union_of(Nfa const& x, Nfa const& y) {
    require_same_alphabet(x, y);
    Nfa  out(x.alphabet(), x.num_states() + y.num_states());
    auto shift = static_cast<State>(x.num_states());
    for (State s : x.initial()) {
      out.add_initial(s);
    }
    for (State s : y.initial()) {
      out.add_initial(s + shift);
    }
    for (State s : x.final_states()) {
      out.add_final(s);
    }
    for (State s : y.final_states()) {
      out.add_final(s + shift);
    }
    for (auto const& t : x.transitions()) {
      out.add_transition(t.from, t.label, t.to);
    }
    for (auto const& t : y.transitions()) {
      out.add_transition(t.from + shift, t.label, t.to + shift);
    }
    return out;
  }

  Nfa intersection(Nfa const& x, Nfa const& y) {
    require_same_alphabet(x, y);
    auto ex   = remove_epsilon(x);
    auto ey   = remove_epsilon(y);
    auto adjx = out_edges(ex);
    auto adjy = out_edges(ey);

    std::map<std::pair<State, State>, State> index;
    std::vector<std::pair<State, State>>     pairs;
    Nfa                                      out(x.alphabet(), 0);
    auto                                     intern = [&](State p, State q) {
      auto [it, fresh] = index.try_emplace({p, q}, State{0});
      if (fresh) {
        it->second = out.add_state();
        pairs.emplace_back(p, q);
        if (ex.is_final(p) && ey.is_final(q)) {
          out.add_final(it->second);
        }
      }
      return it->second;
    };
    for (State p : ex.initial()) {
      for (State q : ey.initial()) {
        out.add_initial(intern(p, q));
      }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto [p, q] = pairs[i];
      for (auto const& [a, p2] : adjx[static_cast<std::size_t>(p)]) {
        for (auto const& [b, q2] : adjy[static_cast<std::size_t>(q)]) {
          if (a == b) {
            out.add_transition(static_cast<State>(i), a, intern(p2, q2));
          }
        }
      }
    }
    return out;
  }

  Nfa complement(Nfa const& x) {
    auto d = determinize(x);
    for (std::size_t s = 0; s < d.num_states(); ++s) {
      d.set_final(static_cast<State>(s), !d.is_final(static_cast<State>(s)));
    }
    return d.to_nfa();
  }

  Nfa difference(Nfa const& x, Nfa const& y) {
    require_same_alphabet(x, y);
    return intersection(x, complement(y));
  }

  Nfa boolean(BooleanOp op, Nfa const& x, Nfa const* y) {
    if (op != BooleanOp::complement && y == nullptr) {
      throw PreconditionError("binary boolean operation needs two operands");
    }
    switch (op) {
      case BooleanOp::union_:
        return union_of(x, *y);
      case BooleanOp::intersection:
        return intersection(x, *y);
      case BooleanOp::complement:
        return complement(x);
      case BooleanOp::difference:
        return difference(x, *y);
    }
    throw PreconditionError("unknown boolean operation");
  }

  Nfa concatenation(Nfa const& x, Nfa const& y) {
    require_same_alphabet(x, y);
    Nfa  out(x.alphabet(), x.num_states() + y.num_states());
    auto shift = static_cast<State>(x.num_states());
    for (State s : x.initial()) {
      out.add_initial(s);
    }
    for (State s : y.final_states()) {
      out.add_final(s + shift);
    }
    for (auto const& t : x.transitions()) {
      out.add_transition(t.from, t.label, t.to);
    }
    for (auto const& t : y.transitions()) {
      out.add_transition(t.from + shift, t.label, t.to + shift);
    }
    for (State f : x.final_states()) {
      for (State i : y.initial()) {
        out.add_transition(f, kEpsilon, i + shift);
      }
    }
    return out;
  }

  Nfa apply_morphism(Nfa const& n, std::vector<Word> const& images, Alphabet const& target) {
    if (images.size() != n.alphabet().size()) {
      throw PreconditionError("morphism must be defined on every letter");
    }
    Nfa out(target, n.num_states());
    for (State s : n.initial()) {
      out.add_initial(s);
    }
    for (State s : n.final_states()) {
      out.add_final(s);
    }
    for (auto const& t : n.transitions()) {
      if (t.label == kEpsilon || images[static_cast<std::size_t>(t.label)].empty()) {
        out.add_transition(t.from, kEpsilon, t.to);
        continue;
      }
      auto const& img = images[static_cast<std::size_t>(t.label)];
      State       cur = t.from;
      for (std::size_t i = 0; i < img.size(); ++i) {
        State next = i + 1 == img.size() ? t.to : out.add_state();
        out.add_transition(cur, img[i], next);
        cur = next;
      }
    }
    return out;
  }

  bool is_empty(Nfa const& n) {
    std::vector<std::vector<State>> fwd(n.num_states());
    for (auto const& t : n.transitions()) {
      fwd[static_cast<std::size_t>(t.from)].push_back(t.to);
    }
    auto seen = reachable_from(n.num_states(), fwd, n.initial());
    for (std::size_t s = 0; s < n.num_states(); ++s) {
      if (seen[s] != 0 && n.is_final(static_cast<State>(s))) {
        return false;
      }
    }
    return true;
  }

  bool accepts(Nfa const& n, std::span<Symbol const> w) {
    auto eps     = epsilon_edges(n);
    auto adj     = out_edges(n);
    auto current = closure_with(eps, n.initial());
    for (Symbol a : w) {
      std::vector<State> next;
      for (State s : current) {
        for (auto const& [label, t] : adj[static_cast<std::size_t>(s)]) {
          if (label == a) {
            next.push_back(t);
          }
        }
      }
      if (next.empty()) {
        return false;
      }
      current = closure_with(eps, std::move(next));
    }
    return std::any_of(current.begin(), current.end(), [&](State s) { return n.is_final(s); });
  }

  bool is_subset(Nfa const& x, Nfa const& y) {
    return is_empty(difference(x, y));
  }

  bool is_finite_language(Nfa const& n) {
    auto t   = trim(remove_epsilon(n));
    auto adj = out_edges(t);
    // Iterative DFS cycle detection: 0 = new, 1 = on stack, 2 = done.
    std::vector<std::uint8_t> colour(t.num_states(), 0);
    for (std::size_t root = 0; root < t.num_states(); ++root) {
      if (colour[root] != 0) {
        continue;
      }
      std::vector<std::pair<State, std::size_t>> stack{{static_cast<State>(root), 0}};
      colour[root] = 1;
      while (!stack.empty()) {
        auto& [s, i] = stack.back();
        auto const& edges = adj[static_cast<std::size_t>(s)];
        if (i == edges.size()) {
          colour[static_cast<std::size_t>(s)] = 2;
          stack.pop_back();
          continue;
        }
        State t2 = edges[i++].second;
        if (colour[static_cast<std::size_t>(t2)] == 1) {
          return false;
        }
        if (colour[static_cast<std::size_t>(t2)] == 0) {
          colour[static_cast<std::size_t>(t2)] = 1;
          stack.emplace_back(t2, 0);
        }
      }
    }
    return true;
  }

  std::vector<Word> enumerate(Nfa const& n, std::size_t max_len) {
    auto t   = trim(remove_epsilon(n));
    auto adj = out_edges(t);
    auto k   = t.alphabet().size();

    std::vector<Word>                                    out;
    std::vector<std::pair<Word, std::vector<State>>>     level;
    if (!t.initial().empty()) {
      level.emplace_back(Word{}, t.initial());
    }
    for (std::size_t len = 0; len <= max_len && !level.empty(); ++len) {
      std::vector<std::pair<Word, std::vector<State>>> next_level;
      for (auto const& [word, states] : level) {
        if (std::any_of(states.begin(), states.end(), [&](State s) { return t.is_final(s); })) {
          out.push_back(word);
        }
        if (len == max_len) {
          continue;
        }
        for (std::size_t a = 0; a < k; ++a) {
          std::vector<State> next;
          for (State s : states) {
            for (auto const& [label, q] : adj[static_cast<std::size_t>(s)]) {
              if (label == static_cast<Symbol>(a)) {
                next.push_back(q);
              }
            }
          }
          if (next.empty()) {
            continue;
          }
          std::sort(next.begin(), next.end());
          next.erase(std::unique(next.begin(), next.end()), next.end());
          Word w = word;
          w.push_back(static_cast<Symbol>(a));
          next_level.emplace_back(std::move(w), std::move(next));
        }
      }
      level.swap(next_level);
    }
    return out;
  }

  std::optional<Word> shortlex_least(Nfa const& n) {
    return least_accepted_from(n, n.initial());
  }

  Word completion_word(Nfa const& n, State state) {
    if (state < 0 || static_cast<std::size_t>(state) >= n.num_states()) {
      throw PreconditionError("state " + std::to_string(state) + " out of range");
    }
    auto w = least_accepted_from(n, {state});
    if (!w) {
      throw PreconditionError("state " + std::to_string(state) + " is not co-accessible");
    }
    return *w;
  }

}  // namespace qa
