#include "qa/group.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <unordered_map>

#include "qa/errors.hpp"

namespace qa {

  InvAlphabet::InvAlphabet(Alphabet a) : alphabet_(std::move(a)) {
    for (auto const& t : alphabet_.tokens()) {
      bool const inv     = t.size() > 1 && t.back() == '^';
      auto const partner = inv ? t.substr(0, t.size() - 1) : t + "^";
      auto const s       = alphabet_.find(partner);
      if (!s) {
        throw AlphabetMismatch("token \"" + t + "\" has no inverse \"" + partner + "\"");
      }
      inverse_.push_back(*s);
    }
  }

  InvAlphabet InvAlphabet::from_base(std::vector<std::string> const& base) {
    std::vector<std::string> tokens;
    for (auto const& t : base) {
      tokens.push_back(t);
      tokens.push_back(t + "^");
    }
    return InvAlphabet(Alphabet(tokens));
  }

  Word free_reduce(InvAlphabet const& b, std::span<Symbol const> w) {
    Word out;
    for (Symbol x : w) {
      if (!out.empty() && out.back() == b.inverse(x)) {
        out.pop_back();
      } else {
        out.push_back(x);
      }
    }
    return out;
  }

  Word inverse_word(InvAlphabet const& b, std::span<Symbol const> w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      out.push_back(b.inverse(*it));
    }
    return out;
  }

  Word free_product(InvAlphabet const& b, std::vector<Word> const& factors) {
    Word all;
    for (auto const& f : factors) {
      all.insert(all.end(), f.begin(), f.end());
    }
    return free_reduce(b, all);
  }

  TelescopeSides telescope(InvAlphabet const& b, std::vector<Word> const& g,
                           std::vector<Word> const& a, std::vector<Word> const& bs) {
    auto const n = a.size();
    if (bs.size() != n || g.size() != n + 1) {
      throw PreconditionError("telescope: expected n letters a_i, n letters b_i and n + 1 words g_i");
    }
    auto inv = [&](Word const& w) { return inverse_word(b, w); };
    TelescopeSides out;
    Word           lhs;
    Word           b_prefix;  // b_1 .. b_{i-1}
    for (std::size_t i = 1; i <= n; ++i) {
      auto h = free_product(b, {g[0], b_prefix, inv(g[i - 1])});
      auto r = free_product(b, {a[i - 1], g[i], inv(bs[i - 1]), inv(g[i - 1])});
      lhs    = free_product(b, {lhs, h, r, inv(h)});
      b_prefix.insert(b_prefix.end(), bs[i - 1].begin(), bs[i - 1].end());
    }
    std::vector<Word> rhs(a.begin(), a.end());
    rhs.push_back(g[n]);
    for (std::size_t i = n; i >= 1; --i) {
      rhs.push_back(inv(bs[i - 1]));
    }
    rhs.push_back(inv(g[0]));
    out.lhs   = std::move(lhs);
    out.rhs   = free_product(b, rhs);
    out.equal = out.lhs == out.rhs;
    return out;
  }

  std::vector<Word> short_relators(QaStructure const& s, std::size_t bound, std::size_t max_words) {
    if (!s.neutral_rep()) {
      throw PreconditionError("short_relators needs l(1)");
    }
    if (bound == 0) {
      bound = 2 * s.lipschitz_constant() + 2;
    }
    auto const&       l1 = *s.neutral_rep();
    auto const        k  = static_cast<Symbol>(s.alphabet().size());
    std::vector<Word> out;
    std::size_t       seen = 0;
    // depth-first over words, carrying the representative of the prefix
    struct Frame {
      Word w, rep;
    };
    std::vector<Frame> stack;
    for (Symbol x = k - 1; x >= 0; --x) {
      stack.push_back({Word{x}, s.letter_rep(x)});
    }
    while (!stack.empty()) {
      auto f = std::move(stack.back());
      stack.pop_back();
      if (++seen > max_words) {
        throw ResourceLimit("short_relators: more than " + std::to_string(max_words) + " words");
      }
      if (contains_pair(s.equality(), f.rep, l1)) {
        out.push_back(f.w);
      }
      if (f.w.size() < bound) {
        for (Symbol x = k - 1; x >= 0; --x) {
          Word rep;
          try {
            rep = s.uniformizer(x).select(f.rep);
          } catch (PreconditionError const&) {
            throw InvalidStructure("τ_" + s.alphabet().token(x) + " is undefined on a representative");
          }
          stack.push_back({concat(f.w, Word{x}), std::move(rep)});
        }
      }
    }
    std::sort(out.begin(), out.end(), ShortlexLess{});
    return out;
  }

  namespace {

    std::size_t saturating_bound(std::size_t n, std::size_t k) {
      constexpr auto kMax = std::numeric_limits<std::size_t>::max();
      std::size_t    p    = 1;
      for (std::size_t i = 0; i < k; ++i) {
        if (p > kMax / n) {
          return kMax;
        }
        p *= n;
      }
      if (k != 0 && p > (kMax - 2) / (2 * k)) {
        return kMax;
      }
      return 2 + 2 * k * p;
    }

  }  // namespace

  RelatorDecomposition relator_decomposition(QaStructure const& s, SemigroupOracle const& oracle,
                                             std::span<Symbol const> w,
                                             RepresentativeOptions const& opts) {
    InvAlphabet const b(s.alphabet());
    if (!(oracle.alphabet() == s.alphabet())) {
      throw AlphabetMismatch("oracle alphabet differs from the structure alphabet");
    }
    if (oracle.kind() != OracleKind::group) {
      throw PreconditionError("relator_decomposition needs a group oracle");
    }
    if (!s.neutral_rep()) {
      throw PreconditionError("relator_decomposition needs l(1)");
    }
    auto const& u0 = *s.neutral_rep();
    auto const  k  = w.size();

    RelatorDecomposition d;
    d.input.assign(w.begin(), w.end());
    d.target       = free_reduce(b, w);
    d.growth       = s.growth_constant();
    d.lipschitz    = s.lipschitz_constant();
    d.count_bound  = saturating_bound(d.growth, k);
    d.length_bound = 2 * d.lipschitz + 2;

    std::vector<Word> u;
    if (k > 0) {
      u = prefix_representatives(s, w, opts);
      if (!contains_pair(s.equality(), u.back(), u0)) {
        throw PreconditionError("the word is not trivial in the group");
      }
    }
    u.resize(k + 1);
    u[0] = u0;
    u[k] = u0;

    auto const u0_inv = inverse_word(b, u0);
    auto       inv    = [&](Word const& x) { return inverse_word(b, x); };
    // Step t contributes conjugates whose product is u_t c u_{t+1}^-1; the
    // product over t is u_0 w u_0^-1, so every conjugator is prefixed by
    // u_0^-1.
    for (std::size_t t = 0; t < k; ++t) {
      auto c = lipschitz_certificate(s, oracle, u[t], u[t + 1], w[t]);
      if (!c.verified) {
        throw InvalidStructure("certificate for step " + std::to_string(t) + " fails: " + c.failure);
      }
      auto connector = [&](CertificateStep const& st) {
        if (!st.connector) {
          throw InvalidStructure("no connector word of length <= P at step " + std::to_string(t));
        }
        return *st.connector;
      };
      std::vector<Word> g{connector(c.start)};
      std::vector<Word> as, bs;
      for (auto const& st : c.steps) {
        g.push_back(connector(st));
        as.push_back(st.in == kEpsilon ? Word{} : Word{st.in});
        bs.push_back(st.out == kEpsilon ? Word{} : Word{st.out});
      }
      Word b_prefix;
      for (std::size_t i = 1; i < g.size(); ++i) {
        auto r = free_product(b, {as[i - 1], g[i], inv(bs[i - 1]), inv(g[i - 1])});
        if (!r.empty()) {
          auto h = free_product(b, {u0_inv, g[0], b_prefix, inv(g[i - 1])});
          d.factors.push_back({std::move(h), std::move(r)});
        }
        b_prefix.insert(b_prefix.end(), bs[i - 1].begin(), bs[i - 1].end());
      }
    }

    std::vector<Word> parts;
    for (auto const& f : d.factors) {
      if (f.relator.size() > d.length_bound) {
        d.failure = "relator longer than 2P + 2";
      } else if (oracle.eval(f.relator) != oracle.identity()) {
        d.failure = "relator is not trivial in the group";
      }
      parts.push_back(f.conjugator);
      parts.push_back(f.relator);
      parts.push_back(inv(f.conjugator));
    }
    if (d.failure.empty() && d.factors.size() > d.count_bound) {
      d.failure = "more factors than 2 + 2k N^k";
    }
    if (d.failure.empty() && free_product(b, parts) != d.target) {
      d.failure = "product of the conjugates differs from the word";
    }
    d.verified = d.failure.empty();
    return d;
  }

  Transducer build_ta(Dfa const& language, SemigroupOracle const& oracle, std::size_t p,
                      std::optional<Symbol> a, std::size_t ball_cap) {
    auto const& alpha = language.alphabet();
    if (!(oracle.alphabet() == alpha)) {
      throw AlphabetMismatch("oracle alphabet differs from the language alphabet");
    }
    if (oracle.kind() != OracleKind::group) {
      throw PreconditionError("build_ta needs a group oracle");
    }
    auto const k = static_cast<Symbol>(alpha.size());

    auto const g0 = ball(oracle, p, ball_cap);
    std::unordered_map<Element, std::size_t, ElementHash> index;
    for (std::size_t i = 0; i < g0.size(); ++i) {
      index.emplace(g0[i], i);
    }
    std::vector<Element> gen, gen_inv;
    for (Symbol x = 0; x < k; ++x) {
      gen.push_back(oracle.generator(x));
      gen_inv.push_back(oracle.inverse(gen.back()).value());
    }
    auto const target = a ? oracle.generator(*a) : oracle.identity();
    auto const target_index = index.find(target);

    // DFA states from which a final state is reachable
    auto const         nq = language.num_states();
    std::vector<char>  live(nq, 0);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t q = 0; q < nq; ++q) {
        if (live[q]) {
          continue;
        }
        bool l = language.is_final(static_cast<State>(q));
        for (Symbol x = 0; x < k && !l; ++x) {
          auto n = language.next(static_cast<State>(q), x);
          l      = n != Dfa::kNoState && live[static_cast<std::size_t>(n)];
        }
        if (l) {
          live[q] = 1;
          changed = true;
        }
      }
    }

    using Key = std::tuple<State, State, std::size_t>;
    std::map<Key, State> states;
    std::deque<Key>      queue;
    Transducer           t(alpha, alpha, 0);
    auto                 intern = [&](Key const& key) {
      auto [it, fresh] = states.emplace(key, static_cast<State>(t.num_states()));
      if (fresh) {
        t.add_state();
        queue.push_back(key);
        auto [pp, qq, g] = key;
        if (language.is_final(pp) && language.is_final(qq) && target_index != index.end()
            && g == target_index->second) {
          t.add_final(it->second);
        }
      }
      return it->second;
    };
    auto const i = language.initial();
    if (!live[static_cast<std::size_t>(i)]) {
      return t;
    }
    t.add_initial(intern({i, i, index.at(oracle.identity())}));
    while (!queue.empty()) {
      auto const key = queue.front();
      queue.pop_front();
      auto const [pp, qq, g] = key;
      auto const from        = states.at(key);
      for (Symbol x = 0; x < k; ++x) {
        auto np = language.next(pp, x);
        if (np != Dfa::kNoState && live[static_cast<std::size_t>(np)]) {
          auto it = index.find(oracle.multiply(gen_inv[static_cast<std::size_t>(x)], g0[g]));
          if (it != index.end()) {
            t.add_transition(from, x, kEpsilon, intern({np, qq, it->second}));
          }
        }
        auto nq2 = language.next(qq, x);
        if (nq2 != Dfa::kNoState && live[static_cast<std::size_t>(nq2)]) {
          auto it = index.find(oracle.multiply(g0[g], gen[static_cast<std::size_t>(x)]));
          if (it != index.end()) {
            t.add_transition(from, kEpsilon, x, intern({pp, nq2, it->second}));
          }
        }
      }
    }
    return trim(t);
  }

}  // namespace qa
