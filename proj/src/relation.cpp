#include "qa/relation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "qa/errors.hpp"
#include "text_format.hpp"

namespace qa {

  ////////////////////////////////////////////////////////////////////////
  // Transducer
  ////////////////////////////////////////////////////////////////////////

  Transducer::Transducer(Alphabet input, Alphabet output, std::size_t num_states)
      : input_(std::move(input)),
        output_(std::move(output)),
        initial_flags_(num_states, 0),
        final_flags_(num_states, 0) {}

  std::vector<State> Transducer::initial() const {
    std::vector<State> out;
    for (std::size_t s = 0; s < initial_flags_.size(); ++s) {
      if (initial_flags_[s] != 0) {
        out.push_back(static_cast<State>(s));
      }
    }
    return out;
  }

  std::vector<State> Transducer::final_states() const {
    std::vector<State> out;
    for (std::size_t s = 0; s < final_flags_.size(); ++s) {
      if (final_flags_[s] != 0) {
        out.push_back(static_cast<State>(s));
      }
    }
    return out;
  }

  State Transducer::add_state() {
    initial_flags_.push_back(0);
    final_flags_.push_back(0);
    return static_cast<State>(initial_flags_.size() - 1);
  }

  void Transducer::check_state(State s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= num_states()) {
      throw Error("undeclared state " + std::to_string(s));
    }
  }

  void Transducer::add_initial(State s) {
    check_state(s);
    initial_flags_[static_cast<std::size_t>(s)] = 1;
  }

  void Transducer::add_final(State s) {
    check_state(s);
    final_flags_[static_cast<std::size_t>(s)] = 1;
  }

  void Transducer::add_transition(State from, Symbol in, Symbol out, State to) {
    check_state(from);
    check_state(to);
    if (in != kEpsilon && (in < 0 || static_cast<std::size_t>(in) >= input_.size())) {
      throw Error("input symbol " + std::to_string(in) + " out of range");
    }
    if (out != kEpsilon && (out < 0 || static_cast<std::size_t>(out) >= output_.size())) {
      throw Error("output symbol " + std::to_string(out) + " out of range");
    }
    transitions_.push_back({from, in, out, to});
  }

  bool Transducer::nivat_normal() const {
    return std::all_of(transitions_.begin(), transitions_.end(), [](TTransition const& t) {
      return (t.in == kEpsilon) != (t.out == kEpsilon);
    });
  }

  void Transducer::canonicalize() {
    std::sort(transitions_.begin(), transitions_.end());
    transitions_.erase(std::unique(transitions_.begin(), transitions_.end()), transitions_.end());
  }

  bool operator==(Transducer const& x, Transducer const& y) {
    if (!(x.input_ == y.input_) || !(x.output_ == y.output_)
        || x.initial_flags_ != y.initial_flags_ || x.final_flags_ != y.final_flags_) {
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

  ////////////////////////////////////////////////////////////////////////
  // Text format
  ////////////////////////////////////////////////////////////////////////

  Transducer parse_transducer(std::string_view text) {
    std::optional<Alphabet>    input, output;
    std::optional<std::size_t> num_states;
    std::optional<Transducer>  t;

    auto make_alphabet = [](detail::Line const& line) {
      try {
        return Alphabet(std::vector<std::string>(line.fields.begin() + 1, line.fields.end()));
      } catch (Error const& e) {
        throw ParseError(e.what(), line.number);
      }
    };
    auto ensure = [&](std::size_t line) -> Transducer& {
      if (!input || !output) {
        throw ParseError("alphabet lines must come first", line);
      }
      if (!num_states) {
        throw ParseError("\"states\" must precede this line", line);
      }
      if (!t) {
        t.emplace(*input, *output, *num_states);
      }
      return *t;
    };
    auto state_of = [&](std::string const& field, std::size_t line) {
      auto s = detail::parse_index(field, line);
      if (s >= *num_states) {
        throw ParseError("undeclared state " + field, line);
      }
      return static_cast<State>(s);
    };
    auto symbol_of = [](Alphabet const& a, std::string const& field, std::size_t line) {
      if (field == "-") {
        return kEpsilon;
      }
      auto s = a.find(field);
      if (!s) {
        throw ParseError("undeclared symbol \"" + field + "\"", line);
      }
      return *s;
    };

    for (auto const& line : detail::tokenize_lines(text)) {
      auto const& key = line.fields[0];
      if (key == "alphabet" || key == "input_alphabet" || key == "output_alphabet") {
        if (t) {
          throw ParseError("alphabet lines must come first", line.number);
        }
        auto a = make_alphabet(line);
        if (key != "output_alphabet") {
          if (input && key == "input_alphabet") {
            throw ParseError("duplicate input alphabet", line.number);
          }
          input = a;
        }
        if (key != "input_alphabet") {
          if (output && key == "output_alphabet") {
            throw ParseError("duplicate output alphabet", line.number);
          }
          output = a;
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
        if (line.fields.size() != 5) {
          throw ParseError("expected \"trans p INSYM OUTSYM q\"", line.number);
        }
        m.add_transition(state_of(line.fields[1], line.number),
                         symbol_of(*input, line.fields[2], line.number),
                         symbol_of(*output, line.fields[3], line.number),
                         state_of(line.fields[4], line.number));
      } else {
        throw ParseError("unknown directive \"" + key + "\"", line.number);
      }
    }
    if (!input || !output) {
      throw ParseError("missing alphabet line", 0);
    }
    if (!num_states) {
      throw ParseError("missing \"states\" line", 0);
    }
    return ensure(0);
  }

  std::string print_transducer(Transducer const& t) {
    std::ostringstream out;
    auto               alphabet_line = [&](char const* key, Alphabet const& a) {
      out << key;
      for (auto const& tok : a.tokens()) {
        out << ' ' << tok;
      }
      out << '\n';
    };
    if (t.input_alphabet() == t.output_alphabet()) {
      alphabet_line("alphabet", t.input_alphabet());
    } else {
      alphabet_line("input_alphabet", t.input_alphabet());
      alphabet_line("output_alphabet", t.output_alphabet());
    }
    out << "states " << t.num_states() << "\ninitial";
    for (State s : t.initial()) {
      out << ' ' << s;
    }
    out << "\nfinal";
    for (State s : t.final_states()) {
      out << ' ' << s;
    }
    out << '\n';
    auto ts = t.transitions();
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (auto const& tr : ts) {
      out << "trans " << tr.from << ' '
          << (tr.in == kEpsilon ? std::string("-") : t.input_alphabet().token(tr.in)) << ' '
          << (tr.out == kEpsilon ? std::string("-") : t.output_alphabet().token(tr.out)) << ' '
          << tr.to << '\n';
    }
    return out.str();
  }

  ////////////////////////////////////////////////////////////////////////
  // Constructions
  ////////////////////////////////////////////////////////////////////////

  Transducer diagonal(Nfa const& language) {
    auto       n = remove_epsilon(language);
    Transducer t(n.alphabet(), n.alphabet(), n.num_states());
    for (State s : n.initial()) {
      t.add_initial(s);
    }
    for (State s : n.final_states()) {
      t.add_final(s);
    }
    for (auto const& tr : n.transitions()) {
      t.add_transition(tr.from, tr.label, tr.label, tr.to);
    }
    return t;
  }

  Transducer from_pairs(Alphabet const& input, Alphabet const& output,
                        std::vector<WordPair> const& pairs) {
    Transducer t(input, output, 1);
    t.add_initial(0);
    for (auto const& [u, v] : pairs) {
      State cur = 0;
      for (Symbol a : u) {
        State next = t.add_state();
        t.add_transition(cur, a, kEpsilon, next);
        cur = next;
      }
      for (Symbol b : v) {
        State next = t.add_state();
        t.add_transition(cur, kEpsilon, b, next);
        cur = next;
      }
      t.add_final(cur);
    }
    return t;
  }

  Transducer cartesian_product(Nfa const& k1, Nfa const& k2) {
    auto       shift = static_cast<State>(k1.num_states());
    Transducer t(k1.alphabet(), k2.alphabet(), k1.num_states() + k2.num_states());
    for (State s : k1.initial()) {
      t.add_initial(s);
    }
    for (State s : k2.final_states()) {
      t.add_final(s + shift);
    }
    for (auto const& tr : k1.transitions()) {
      t.add_transition(tr.from, tr.label, kEpsilon, tr.to);
    }
    for (auto const& tr : k2.transitions()) {
      t.add_transition(tr.from + shift, kEpsilon, tr.label, tr.to + shift);
    }
    for (State f : k1.final_states()) {
      for (State i : k2.initial()) {
        t.add_transition(f, kEpsilon, kEpsilon, i + shift);
      }
    }
    return t;
  }

  Transducer union_of(Transducer const& x, Transducer const& y) {
    if (!(x.input_alphabet() == y.input_alphabet())
        || !(x.output_alphabet() == y.output_alphabet())) {
      throw AlphabetMismatch("union of transducers over different alphabets");
    }
    auto       shift = static_cast<State>(x.num_states());
    Transducer t(x.input_alphabet(), x.output_alphabet(), x.num_states() + y.num_states());
    for (State s : x.initial()) {
      t.add_initial(s);
    }
    for (State s : y.initial()) {
      t.add_initial(s + shift);
    }
    for (State s : x.final_states()) {
      t.add_final(s);
    }
    for (State s : y.final_states()) {
      t.add_final(s + shift);
    }
    for (auto const& tr : x.transitions()) {
      t.add_transition(tr.from, tr.in, tr.out, tr.to);
    }
    for (auto const& tr : y.transitions()) {
      t.add_transition(tr.from + shift, tr.in, tr.out, tr.to + shift);
    }
    return t;
  }

  Transducer trim(Transducer const& t) {
    std::size_t                     n = t.num_states();
    std::vector<std::vector<State>> fwd(n), bwd(n);
    for (auto const& tr : t.transitions()) {
      fwd[static_cast<std::size_t>(tr.from)].push_back(tr.to);
      bwd[static_cast<std::size_t>(tr.to)].push_back(tr.from);
    }
    auto reach = [n](std::vector<std::vector<State>> const& adj, std::vector<State> seeds) {
      std::vector<std::uint8_t> seen(n, 0);
      for (State s : seeds) {
        seen[static_cast<std::size_t>(s)] = 1;
      }
      while (!seeds.empty()) {
        State s = seeds.back();
        seeds.pop_back();
        for (State q : adj[static_cast<std::size_t>(s)]) {
          if (seen[static_cast<std::size_t>(q)] == 0) {
            seen[static_cast<std::size_t>(q)] = 1;
            seeds.push_back(q);
          }
        }
      }
      return seen;
    };
    auto acc  = reach(fwd, t.initial());
    auto coac = reach(bwd, t.final_states());

    std::vector<State> renumber(n, -1);
    State              next = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (acc[s] != 0 && coac[s] != 0) {
        renumber[s] = next++;
      }
    }
    Transducer out(t.input_alphabet(), t.output_alphabet(), static_cast<std::size_t>(next));
    for (std::size_t s = 0; s < n; ++s) {
      if (renumber[s] < 0) {
        continue;
      }
      if (t.is_initial(static_cast<State>(s))) {
        out.add_initial(renumber[s]);
      }
      if (t.is_final(static_cast<State>(s))) {
        out.add_final(renumber[s]);
      }
    }
    for (auto const& tr : t.transitions()) {
      auto f = renumber[static_cast<std::size_t>(tr.from)];
      auto g = renumber[static_cast<std::size_t>(tr.to)];
      if (f >= 0 && g >= 0) {
        out.add_transition(f, tr.in, tr.out, g);
      }
    }
    out.canonicalize();
    return out;
  }

  Transducer nivat_normalize(Transducer const& t) {
    std::size_t                     n = t.num_states();
    std::vector<std::vector<State>> eps(n);
    std::vector<std::vector<TTransition>> moves(n);
    for (auto const& tr : t.transitions()) {
      if (tr.in == kEpsilon && tr.out == kEpsilon) {
        eps[static_cast<std::size_t>(tr.from)].push_back(tr.to);
      } else {
        moves[static_cast<std::size_t>(tr.from)].push_back(tr);
      }
    }
    Transducer out(t.input_alphabet(), t.output_alphabet(), n);
    for (State s : t.initial()) {
      out.add_initial(s);
    }
    std::vector<std::uint8_t> seen(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
      // (ε,ε)-closure of p
      std::fill(seen.begin(), seen.end(), 0);
      std::vector<State> stack{static_cast<State>(p)}, closure;
      seen[p] = 1;
      while (!stack.empty()) {
        State q = stack.back();
        stack.pop_back();
        closure.push_back(q);
        for (State r : eps[static_cast<std::size_t>(q)]) {
          if (seen[static_cast<std::size_t>(r)] == 0) {
            seen[static_cast<std::size_t>(r)] = 1;
            stack.push_back(r);
          }
        }
      }
      for (State q : closure) {
        if (t.is_final(q)) {
          out.add_final(static_cast<State>(p));
        }
        for (auto const& tr : moves[static_cast<std::size_t>(q)]) {
          if (tr.in != kEpsilon && tr.out != kEpsilon) {
            State mid = out.add_state();
            out.add_transition(static_cast<State>(p), tr.in, kEpsilon, mid);
            out.add_transition(mid, kEpsilon, tr.out, tr.to);
          } else {
            out.add_transition(static_cast<State>(p), tr.in, tr.out, tr.to);
          }
        }
      }
    }
    return trim(out);
  }

  Transducer inverse(Transducer const& t) {
    Transducer out(t.output_alphabet(), t.input_alphabet(), t.num_states());
    for (State s : t.initial()) {
      out.add_initial(s);
    }
    for (State s : t.final_states()) {
      out.add_final(s);
    }
    for (auto const& tr : t.transitions()) {
      out.add_transition(tr.from, tr.out, tr.in, tr.to);
    }
    return out;
  }

  namespace {
    Transducer const& normalized(Transducer const& t, std::optional<Transducer>& storage) {
      if (t.nivat_normal()) {
        return t;
      }
      storage = nivat_normalize(t);
      return *storage;
    }

    struct SplitMoves {
      // per state: (letter, target) for input-only and output-only moves
      std::vector<std::vector<std::pair<Symbol, State>>> in, out;
    };

    SplitMoves split_moves(Transducer const& t) {
      SplitMoves m{std::vector<std::vector<std::pair<Symbol, State>>>(t.num_states()),
                   std::vector<std::vector<std::pair<Symbol, State>>>(t.num_states())};
      for (auto const& tr : t.transitions()) {
        if (tr.out == kEpsilon) {
          m.in[static_cast<std::size_t>(tr.from)].emplace_back(tr.in, tr.to);
        } else {
          m.out[static_cast<std::size_t>(tr.from)].emplace_back(tr.out, tr.to);
        }
      }
      for (auto* v : {&m.in, &m.out}) {
        for (auto& e : *v) {
          std::sort(e.begin(), e.end());
          e.erase(std::unique(e.begin(), e.end()), e.end());
        }
      }
      return m;
    }
  }  // namespace

  Transducer compose(Transducer const& outer, Transducer const& inner) {
    if (!(inner.output_alphabet() == outer.input_alphabet())) {
      throw AlphabetMismatch("compose: inner output alphabet differs from outer input alphabet");
    }
    auto const in  = nivat_normalize(inner);
    auto const out = nivat_normalize(outer);
    auto const mi  = split_moves(in);
    auto const mo  = split_moves(out);

    Transducer                               result(in.input_alphabet(), out.output_alphabet(), 0);
    std::map<std::pair<State, State>, State> index;
    std::vector<std::pair<State, State>>     pairs;
    auto                                     intern = [&](State p, State q) {
      auto [it, fresh] = index.try_emplace({p, q}, State{0});
      if (fresh) {
        it->second = result.add_state();
        pairs.emplace_back(p, q);
        if (in.is_final(p) && out.is_final(q)) {
          result.add_final(it->second);
        }
      }
      return it->second;
    };
    for (State p : in.initial()) {
      for (State q : out.initial()) {
        result.add_initial(intern(p, q));
      }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      auto [p, q] = pairs[i];
      auto  src   = static_cast<State>(i);
      // inner reads its input alone
      for (auto const& [a, p2] : mi.in[static_cast<std::size_t>(p)]) {
        result.add_transition(src, a, kEpsilon, intern(p2, q));
      }
      // outer writes its output alone
      for (auto const& [c, q2] : mo.out[static_cast<std::size_t>(q)]) {
        result.add_transition(src, kEpsilon, c, intern(p, q2));
      }
      // inner writes b while outer reads b
      for (auto const& [b, p2] : mi.out[static_cast<std::size_t>(p)]) {
        for (auto const& [b2, q2] : mo.in[static_cast<std::size_t>(q)]) {
          if (b == b2) {
            result.add_transition(src, kEpsilon, kEpsilon, intern(p2, q2));
          }
        }
      }
    }
    return nivat_normalize(result);
  }

  Transducer restrict_recognizable(Transducer const& t, Nfa const& k1, Nfa const& k2) {
    if (!(k1.alphabet() == t.input_alphabet()) || !(k2.alphabet() == t.output_alphabet())) {
      throw AlphabetMismatch("restrict_recognizable: alphabet mismatch");
    }
    auto const n  = nivat_normalize(t);
    auto const d1 = minimize(determinize(k1));
    auto const d2 = minimize(determinize(k2));
    auto const mv = split_moves(n);

    using Key = std::tuple<State, State, State>;
    Transducer         result(t.input_alphabet(), t.output_alphabet(), 0);
    std::map<Key, State> index;
    std::vector<Key>   keys;
    auto               intern = [&](State p, State a, State b) {
      auto [it, fresh] = index.try_emplace({p, a, b}, State{0});
      if (fresh) {
        it->second = result.add_state();
        keys.emplace_back(p, a, b);
        if (n.is_final(p) && d1.is_final(a) && d2.is_final(b)) {
          result.add_final(it->second);
        }
      }
      return it->second;
    };
    for (State p : n.initial()) {
      result.add_initial(intern(p, d1.initial(), d2.initial()));
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
      auto [p, a, b] = keys[i];
      auto src       = static_cast<State>(i);
      for (auto const& [x, p2] : mv.in[static_cast<std::size_t>(p)]) {
        result.add_transition(src, x, kEpsilon, intern(p2, d1.next(a, x), b));
      }
      for (auto const& [y, p2] : mv.out[static_cast<std::size_t>(p)]) {
        result.add_transition(src, kEpsilon, y, intern(p2, a, d2.next(b, y)));
      }
    }
    return trim(result);
  }

  Transducer apply_morphism_pair(Transducer const& t, std::vector<Word> const& phi,
                                 Alphabet const& phi_target, std::vector<Word> const& psi,
                                 Alphabet const& psi_target) {
    if (phi.size() != t.input_alphabet().size() || psi.size() != t.output_alphabet().size()) {
      throw PreconditionError("morphisms must be defined on every letter");
    }
    auto check = [](std::vector<Word> const& images, Alphabet const& target) {
      for (auto const& w : images) {
        for (Symbol s : w) {
          if (s < 0 || static_cast<std::size_t>(s) >= target.size()) {
            throw AlphabetMismatch("morphism image letter not in target alphabet");
          }
        }
      }
    };
    check(phi, phi_target);
    check(psi, psi_target);

    auto const n = nivat_normalize(t);
    Transducer out(phi_target, psi_target, n.num_states());
    for (State s : n.initial()) {
      out.add_initial(s);
    }
    for (State s : n.final_states()) {
      out.add_final(s);
    }
    for (auto const& tr : n.transitions()) {
      bool const  input_move = tr.out == kEpsilon;
      auto const& img        = input_move ? phi[static_cast<std::size_t>(tr.in)]
                                          : psi[static_cast<std::size_t>(tr.out)];
      if (img.empty()) {
        out.add_transition(tr.from, kEpsilon, kEpsilon, tr.to);
        continue;
      }
      State cur = tr.from;
      for (std::size_t i = 0; i < img.size(); ++i) {
        State next = i + 1 == img.size() ? tr.to : out.add_state();
        if (input_move) {
          out.add_transition(cur, img[i], kEpsilon, next);
        } else {
          out.add_transition(cur, kEpsilon, img[i], next);
        }
        cur = next;
      }
    }
    return nivat_normalize(out);
  }

  namespace {
    Nfa project(Transducer const& t, bool input_side) {
      Nfa n(input_side ? t.input_alphabet() : t.output_alphabet(), t.num_states());
      for (State s : t.initial()) {
        n.add_initial(s);
      }
      for (State s : t.final_states()) {
        n.add_final(s);
      }
      for (auto const& tr : t.transitions()) {
        n.add_transition(tr.from, input_side ? tr.in : tr.out, tr.to);
      }
      return n;
    }
  }  // namespace

  Nfa domain(Transducer const& t) {
    return project(t, true);
  }

  Nfa image(Transducer const& t) {
    return project(t, false);
  }

  Nfa label_automaton(Transducer const& t) {
    if (!t.nivat_normal()) {
      throw PreconditionError("label_automaton needs a normalized transducer");
    }
    std::vector<std::string> tokens;
    for (auto const& a : t.input_alphabet().tokens()) {
      tokens.push_back(a + "|-");
    }
    for (auto const& b : t.output_alphabet().tokens()) {
      tokens.push_back("-|" + b);
    }
    auto const k = static_cast<Symbol>(t.input_alphabet().size());
    Nfa        n(Alphabet(std::move(tokens)), t.num_states());
    for (State s : t.initial()) {
      n.add_initial(s);
    }
    for (State s : t.final_states()) {
      n.add_final(s);
    }
    for (auto const& tr : t.transitions()) {
      n.add_transition(tr.from, tr.out == kEpsilon ? tr.in : k + tr.out, tr.to);
    }
    return n;
  }

  ////////////////////////////////////////////////////////////////////////
  // Queries
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // reach[(i * (|y|+1) + j) * Q + q]: state q reachable after reading
    // x[0..i) and y[0..j).
    std::vector<std::uint8_t> membership_table(Transducer const& t, SplitMoves const& mv,
                                               std::span<Symbol const> x,
                                               std::span<Symbol const> y) {
      std::size_t const q    = t.num_states();
      std::size_t const cols = y.size() + 1;
      std::vector<std::uint8_t> reach((x.size() + 1) * cols * q, 0);
      for (State s : t.initial()) {
        reach[static_cast<std::size_t>(s)] = 1;
      }
      for (std::size_t i = 0; i <= x.size(); ++i) {
        for (std::size_t j = 0; j <= y.size(); ++j) {
          std::uint8_t const* cell = &reach[(i * cols + j) * q];
          for (std::size_t s = 0; s < q; ++s) {
            if (cell[s] == 0) {
              continue;
            }
            if (i < x.size()) {
              std::uint8_t* below = &reach[((i + 1) * cols + j) * q];
              for (auto const& [a, r] : mv.in[s]) {
                if (a == x[i]) {
                  below[static_cast<std::size_t>(r)] = 1;
                }
              }
            }
            if (j < y.size()) {
              std::uint8_t* right = &reach[(i * cols + j + 1) * q];
              for (auto const& [b, r] : mv.out[s]) {
                if (b == y[j]) {
                  right[static_cast<std::size_t>(r)] = 1;
                }
              }
            }
          }
        }
      }
      return reach;
    }
  }  // namespace

  bool contains_pair(Transducer const& t, std::span<Symbol const> x, std::span<Symbol const> y) {
    std::optional<Transducer> storage;
    auto const&               n  = normalized(t, storage);
    auto const                mv = split_moves(n);
    auto const                reach = membership_table(n, mv, x, y);
    std::size_t const         q     = n.num_states();
    std::uint8_t const* last = &reach[(x.size() * (y.size() + 1) + y.size()) * q];
    for (std::size_t s = 0; s < q; ++s) {
      if (last[s] != 0 && n.is_final(static_cast<State>(s))) {
        return true;
      }
    }
    return false;
  }

  std::optional<RelationPath> accepting_path(Transducer const& t, std::span<Symbol const> x,
                                             std::span<Symbol const> y) {
    if (!t.nivat_normal()) {
      throw PreconditionError("accepting_path needs a normalized transducer");
    }
    auto const        mv    = split_moves(t);
    auto const        reach = membership_table(t, mv, x, y);
    std::size_t const q     = t.num_states();
    std::size_t const cols  = y.size() + 1;
    auto at = [&](std::size_t i, std::size_t j, State s) {
      return reach[(i * cols + j) * q + static_cast<std::size_t>(s)] != 0;
    };

    std::optional<State> end;
    for (std::size_t s = 0; s < q; ++s) {
      if (t.is_final(static_cast<State>(s)) && at(x.size(), y.size(), static_cast<State>(s))) {
        end = static_cast<State>(s);
        break;
      }
    }
    if (!end) {
      return std::nullopt;
    }
    // Walk backwards choosing, in a fixed order, a predecessor that is
    // itself reachable.
    std::vector<std::vector<std::tuple<Symbol, Symbol, State>>> preds(q);
    for (auto const& tr : t.transitions()) {
      preds[static_cast<std::size_t>(tr.to)].emplace_back(tr.in, tr.out, tr.from);
    }
    for (auto& v : preds) {
      std::sort(v.begin(), v.end());
    }
    RelationPath path;
    std::size_t  i = x.size(), j = y.size();
    State        s = *end;
    path.states.push_back(s);
    while (i + j > 0 || !t.is_initial(s)) {
      bool moved = false;
      for (auto const& [a, b, p] : preds[static_cast<std::size_t>(s)]) {
        if (a != kEpsilon && i > 0 && x[i - 1] == a && at(i - 1, j, p)) {
          --i;
        } else if (b != kEpsilon && j > 0 && y[j - 1] == b && at(i, j - 1, p)) {
          --j;
        } else {
          continue;
        }
        path.labels.emplace_back(a, b);
        path.states.push_back(p);
        s     = p;
        moved = true;
        break;
      }
      if (!moved) {
        // i + j == 0 and s reachable means s is initial.
        throw Error("accepting_path: inconsistent membership table");
      }
    }
    std::reverse(path.states.begin(), path.states.end());
    std::reverse(path.labels.begin(), path.labels.end());
    return path;
  }

  namespace {
    struct Config {
      State state;
      Word  u, v;

      bool operator==(Config const&) const = default;
    };

    struct ConfigHash {
      std::size_t operator()(Config const& c) const noexcept {
        WordHash h;
        return (h(c.u) * 1000003u) ^ (h(c.v) * 31u) ^ static_cast<std::size_t>(c.state);
      }
    };
  }  // namespace

  std::vector<WordPair> enumerate_pairs(Transducer const& t, std::size_t max_len) {
    auto const n  = nivat_normalize(t);
    auto const mv = split_moves(n);

    std::unordered_set<Config, ConfigHash> seen;
    std::vector<Config>                    stack;
    std::set<WordPair, PairShortlexLess>   pairs;
    for (State s : n.initial()) {
      Config c{s, {}, {}};
      if (seen.insert(c).second) {
        stack.push_back(c);
      }
    }
    while (!stack.empty()) {
      Config c = std::move(stack.back());
      stack.pop_back();
      if (n.is_final(c.state)) {
        pairs.emplace(c.u, c.v);
      }
      if (c.u.size() < max_len) {
        for (auto const& [a, r] : mv.in[static_cast<std::size_t>(c.state)]) {
          Config d{r, c.u, c.v};
          d.u.push_back(a);
          if (seen.insert(d).second) {
            stack.push_back(std::move(d));
          }
        }
      }
      if (c.v.size() < max_len) {
        for (auto const& [b, r] : mv.out[static_cast<std::size_t>(c.state)]) {
          Config d{r, c.u, c.v};
          d.v.push_back(b);
          if (seen.insert(d).second) {
            stack.push_back(std::move(d));
          }
        }
      }
    }
    return {pairs.begin(), pairs.end()};
  }

  namespace {
    // Potential |v| - |u| of each state of a normalized trim machine, when
    // it is path independent.
    std::optional<std::vector<long>> potentials(Transducer const& n) {
      std::vector<std::optional<long>> d(n.num_states());
      std::vector<std::vector<std::pair<long, State>>> adj(n.num_states());
      for (auto const& tr : n.transitions()) {
        adj[static_cast<std::size_t>(tr.from)].emplace_back(tr.out == kEpsilon ? -1 : 1, tr.to);
      }
      std::vector<State> stack;
      for (State s : n.initial()) {
        d[static_cast<std::size_t>(s)] = 0;
        stack.push_back(s);
      }
      while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        for (auto const& [w, r] : adj[static_cast<std::size_t>(s)]) {
          long v = *d[static_cast<std::size_t>(s)] + w;
          auto& dr = d[static_cast<std::size_t>(r)];
          if (!dr) {
            dr = v;
            stack.push_back(r);
          } else if (*dr != v) {
            return std::nullopt;
          }
        }
      }
      std::vector<long> out;
      out.reserve(d.size());
      for (auto const& v : d) {
        out.push_back(v.value_or(0));
      }
      return out;
    }
  }  // namespace

  std::optional<long> length_offset(Transducer const& t) {
    auto const n = nivat_normalize(t);
    auto       d = potentials(n);
    if (!d) {
      return std::nullopt;
    }
    std::optional<long> offset;
    for (State f : n.final_states()) {
      long v = (*d)[static_cast<std::size_t>(f)];
      if (offset && *offset != v) {
        return std::nullopt;
      }
      offset = v;
    }
    return offset.value_or(0);
  }

  bool is_length_preserving(Transducer const& t) {
    auto off = length_offset(t);
    return off && *off == 0;
  }

  Alphabet pair_alphabet(Alphabet const& a, Alphabet const& b) {
    std::vector<std::string> tokens;
    for (auto const& x : a.tokens()) {
      for (auto const& y : b.tokens()) {
        tokens.push_back(x + "|" + y);
      }
    }
    return Alphabet(std::move(tokens));
  }

  namespace {
    // Configuration of the synchronizing constructions: a state of the
    // normalized machine, the letters read on the leading tape that still
    // wait for a partner, which tape leads, and a mode (see pad()).
    struct SyncKey {
      State state;
      Word  pending;
      bool  input_ahead;
      int   mode;

      auto operator<=>(SyncKey const&) const = default;
    };
  }  // namespace

  Nfa to_letter_pair_automaton(Transducer const& t) {
    if (!is_length_preserving(t)) {
      throw PreconditionError("to_letter_pair_automaton: relation is not length-preserving");
    }
    auto const n  = nivat_normalize(t);
    auto const mv = split_moves(n);
    auto const kb = static_cast<Symbol>(n.output_alphabet().size());

    Nfa                    out(pair_alphabet(n.input_alphabet(), n.output_alphabet()), 0);
    std::map<SyncKey, State> index;
    std::vector<SyncKey>   keys;
    auto                   intern = [&](SyncKey k) {
      auto [it, fresh] = index.try_emplace(k, State{0});
      if (fresh) {
        it->second = out.add_state();
        if (n.is_final(k.state) && k.pending.empty()) {
          out.add_final(it->second);
        }
        keys.push_back(std::move(k));
      }
      return it->second;
    };
    for (State s : n.initial()) {
      out.add_initial(intern({s, {}, true, 0}));
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
      auto const k   = keys[i];
      auto const src = static_cast<State>(i);
      for (auto const& [a, r] : mv.in[static_cast<std::size_t>(k.state)]) {
        if (k.pending.empty() || k.input_ahead) {
          Word p = k.pending;
          p.push_back(a);
          out.add_transition(src, kEpsilon, intern({r, p, true, 0}));
        } else {
          Word p(k.pending.begin() + 1, k.pending.end());
          out.add_transition(src, a * kb + k.pending.front(), intern({r, p, p.empty(), 0}));
        }
      }
      for (auto const& [b, r] : mv.out[static_cast<std::size_t>(k.state)]) {
        if (k.pending.empty() || !k.input_ahead) {
          Word p = k.pending;
          p.push_back(b);
          out.add_transition(src, kEpsilon, intern({r, p, false, 0}));
        } else {
          Word p(k.pending.begin() + 1, k.pending.end());
          out.add_transition(src, k.pending.front() * kb + b, intern({r, p, true, 0}));
        }
      }
    }
    return trim(out);
  }

  Nfa pad(Transducer const& t, std::string const& pad_symbol, std::size_t max_lag) {
    if (t.input_alphabet().contains(pad_symbol) || t.output_alphabet().contains(pad_symbol)) {
      throw PreconditionError("pad symbol \"" + pad_symbol + "\" occurs in the alphabet");
    }
    auto const n  = nivat_normalize(t);
    auto const mv = split_moves(n);
    if (max_lag == 0) {
      max_lag = std::max<std::size_t>(n.num_states(), 1);
    }
    auto const in_pad  = t.input_alphabet().extended({pad_symbol});
    auto const out_pad = t.output_alphabet().extended({pad_symbol});
    auto const kb      = static_cast<Symbol>(out_pad.size());
    auto const pad_in  = static_cast<Symbol>(t.input_alphabet().size());
    auto const pad_out = static_cast<Symbol>(t.output_alphabet().size());
    auto       letter  = [&](Symbol a, Symbol b) { return a * kb + b; };

    // can_in[q] / can_out[q]: some path from q to a final state still
    // moves the input / output tape.
    std::size_t const       q_count = n.num_states();
    std::vector<std::uint8_t> can_in(q_count, 0), can_out(q_count, 0);
    {
      std::vector<std::vector<State>> bwd(q_count);
      for (auto const& tr : n.transitions()) {
        bwd[static_cast<std::size_t>(tr.to)].push_back(tr.from);
      }
      auto mark = [&](std::vector<std::uint8_t>& flag, bool input_side) {
        std::vector<State> stack;
        for (auto const& tr : n.transitions()) {
          if ((tr.out == kEpsilon) == input_side && flag[static_cast<std::size_t>(tr.from)] == 0) {
            flag[static_cast<std::size_t>(tr.from)] = 1;
            stack.push_back(tr.from);
          }
        }
        while (!stack.empty()) {
          State s = stack.back();
          stack.pop_back();
          for (State p : bwd[static_cast<std::size_t>(s)]) {
            if (flag[static_cast<std::size_t>(p)] == 0) {
              flag[static_cast<std::size_t>(p)] = 1;
              stack.push_back(p);
            }
          }
        }
      };
      mark(can_in, true);
      mark(can_out, false);
    }

    // Modes: 0 both tapes may still move; 1 the output tape is finished;
    // 2 the input tape is finished; 11 and 12 pair the letters of the
    // leading tape with pad symbols before entering mode 1 or 2; 3 does the
    // same after acceptance (state field unused).
    Nfa                      out(pair_alphabet(in_pad, out_pad), 0);
    std::map<SyncKey, State> index;
    std::vector<SyncKey>     keys;
    auto                     intern = [&](SyncKey k) {
      if (k.pending.empty()) {
        k.input_ahead = true;
      }
      auto [it, fresh] = index.try_emplace(k, State{0});
      if (fresh) {
        it->second = out.add_state();
        if (k.mode == 3 && k.pending.empty()) {
          out.add_final(it->second);
        }
        keys.push_back(std::move(k));
      }
      return it->second;
    };
    auto pad_letter = [&](SyncKey const& k) {
      return k.input_ahead ? letter(k.pending.front(), pad_out) : letter(pad_in, k.pending.front());
    };
    for (State s : n.initial()) {
      out.add_initial(intern({s, {}, true, 0}));
    }
    for (std::size_t i = 0; i < keys.size(); ++i) {
      auto const k   = keys[i];
      auto const src = static_cast<State>(i);
      auto const s   = static_cast<std::size_t>(k.state);
      if (k.mode == 3 || k.mode >= 10) {
        if (!k.pending.empty()) {
          Word rest(k.pending.begin() + 1, k.pending.end());
          out.add_transition(src, pad_letter(k), intern({k.state, rest, k.input_ahead, k.mode}));
        } else if (k.mode >= 10) {
          out.add_transition(src, kEpsilon, intern({k.state, {}, true, k.mode - 10}));
        }
        continue;
      }
      if (n.is_final(k.state)) {
        out.add_transition(src, kEpsilon, intern({-1, k.pending, k.input_ahead, 3}));
      }
      if (k.mode == 0) {
        // Letters waiting on the tape that keeps moving are paired with
        // pad symbols before the other tape is declared finished.
        bool const flush_for_1 = !k.pending.empty() && k.input_ahead;
        bool const flush_for_2 = !k.pending.empty() && !k.input_ahead;
        out.add_transition(src, kEpsilon,
                           intern({k.state, k.pending, k.input_ahead, flush_for_1 ? 11 : 1}));
        out.add_transition(src, kEpsilon,
                           intern({k.state, k.pending, k.input_ahead, flush_for_2 ? 12 : 2}));
      }
      if (k.mode == 0 || k.mode == 1) {
        for (auto const& [a, r] : mv.in[s]) {
          if (k.mode == 1) {
            if (!k.pending.empty()) {
              Word rest(k.pending.begin() + 1, k.pending.end());
              out.add_transition(src, letter(a, k.pending.front()), intern({r, rest, false, 1}));
            } else {
              out.add_transition(src, letter(a, pad_out), intern({r, {}, true, 1}));
            }
          } else if (k.pending.empty() || k.input_ahead) {
            if (can_out[static_cast<std::size_t>(r)] == 0) {
              continue;  // mode 1 covers this branch
            }
            Word p = k.pending;
            p.push_back(a);
            if (p.size() > max_lag) {
              throw ResourceLimit("pad: tape lag exceeds " + std::to_string(max_lag));
            }
            out.add_transition(src, kEpsilon, intern({r, p, true, 0}));
          } else {
            Word rest(k.pending.begin() + 1, k.pending.end());
            out.add_transition(src, letter(a, k.pending.front()), intern({r, rest, false, 0}));
          }
        }
      }
      if (k.mode == 0 || k.mode == 2) {
        for (auto const& [b, r] : mv.out[s]) {
          if (k.mode == 2) {
            if (!k.pending.empty()) {
              Word rest(k.pending.begin() + 1, k.pending.end());
              out.add_transition(src, letter(k.pending.front(), b), intern({r, rest, true, 2}));
            } else {
              out.add_transition(src, letter(pad_in, b), intern({r, {}, true, 2}));
            }
          } else if (k.pending.empty() || !k.input_ahead) {
            if (can_in[static_cast<std::size_t>(r)] == 0) {
              continue;  // mode 2 covers this branch
            }
            Word p = k.pending;
            p.push_back(b);
            if (p.size() > max_lag) {
              throw ResourceLimit("pad: tape lag exceeds " + std::to_string(max_lag));
            }
            out.add_transition(src, kEpsilon, intern({r, p, false, 0}));
          } else {
            Word rest(k.pending.begin() + 1, k.pending.end());
            out.add_transition(src, letter(k.pending.front(), b), intern({r, rest, true, 0}));
          }
        }
      }
    }
    return trim(out);
  }

}  // namespace qa
