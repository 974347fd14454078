#include "qa/structure.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

#include "qa/errors.hpp"

namespace qa {

  char const* to_string(Mode m) {
    return m == Mode::semigroup ? "semigroup" : "monoid";
  }

  char const* to_string(Finiteness f) {
    switch (f) {
      case Finiteness::finite:
        return "finite";
      case Finiteness::infinite_evidence:
        return "infinite-evidence";
      case Finiteness::unknown:
        return "unknown";
    }
    return "?";
  }

  struct QaStructure::Cache {
    std::mutex                                mutex;
    std::vector<std::unique_ptr<Uniformizer>> tau;
    std::optional<std::size_t>                growth;
    std::optional<std::size_t>                lipschitz;
  };

  namespace {

    void check_word(Alphabet const& a, std::span<Symbol const> w, char const* what) {
      for (Symbol s : w) {
        if (s < 0 || static_cast<std::size_t>(s) >= a.size()) {
          throw AlphabetMismatch(std::string(what) + ": letter out of range");
        }
      }
    }

    void check_relation_alphabets(Alphabet const& a, Transducer const& t, std::string const& name) {
      if (!(t.input_alphabet() == a) || !(t.output_alphabet() == a)) {
        throw AlphabetMismatch(name + " is not over the structure alphabet");
      }
    }

  }  // namespace

  QaStructure::QaStructure(Alphabet alphabet, Mode mode, Nfa language, Transducer equality,
                           std::vector<Transducer> right_mult, std::vector<Word> letter_reps,
                           std::optional<Word> neutral_rep)
      : alphabet_(std::move(alphabet)),
        mode_(mode),
        language_(trim(language)),
        equality_(nivat_normalize(equality)),
        letter_reps_(std::move(letter_reps)),
        neutral_rep_(std::move(neutral_rep)),
        cache_(std::make_shared<Cache>()) {
    if (alphabet_.empty()) {
      throw PreconditionError("empty alphabet");
    }
    if (!(language_.alphabet() == alphabet_)) {
      throw AlphabetMismatch("L is not over the structure alphabet");
    }
    check_relation_alphabets(alphabet_, equality_, "R");
    if (right_mult.size() != alphabet_.size()) {
      throw PreconditionError("expected one R_a per letter");
    }
    if (letter_reps_.size() != alphabet_.size()) {
      throw PreconditionError("expected one representative per letter");
    }
    for (std::size_t a = 0; a < right_mult.size(); ++a) {
      check_relation_alphabets(alphabet_, right_mult[a], "R_" + alphabet_.token(static_cast<Symbol>(a)));
      right_mult_.push_back(nivat_normalize(right_mult[a]));
      check_word(alphabet_, letter_reps_[a], "letter representative");
    }
    if (neutral_rep_) {
      check_word(alphabet_, *neutral_rep_, "neutral representative");
    }
    cache_->tau.resize(alphabet_.size());
  }

  Transducer const& QaStructure::right_mult(Symbol a) const {
    check_word(alphabet_, std::span<Symbol const>(&a, 1), "right_mult");
    return right_mult_[static_cast<std::size_t>(a)];
  }

  Word const& QaStructure::letter_rep(Symbol a) const {
    check_word(alphabet_, std::span<Symbol const>(&a, 1), "letter_rep");
    return letter_reps_[static_cast<std::size_t>(a)];
  }

  Uniformizer const& QaStructure::uniformizer(Symbol a) const {
    check_word(alphabet_, std::span<Symbol const>(&a, 1), "uniformizer");
    std::lock_guard lock(cache_->mutex);
    auto&           slot = cache_->tau[static_cast<std::size_t>(a)];
    if (!slot) {
      slot = std::make_unique<Uniformizer>(right_mult_[static_cast<std::size_t>(a)]);
    }
    return *slot;
  }

  // |τ_a(w)| <= N_τ (|w| + 1) <= 2 N_τ |w| for nonempty w, so
  // N = max(2, max |l(a)|, 2 max N_τ) gives |l(u)| <= N^|u|.
  std::size_t QaStructure::growth_constant() const {
    {
      std::lock_guard lock(cache_->mutex);
      if (cache_->growth) {
        return *cache_->growth;
      }
    }
    std::size_t n = 2;
    for (std::size_t a = 0; a < alphabet_.size(); ++a) {
      n = std::max(n, letter_reps_[a].size());
      n = std::max(n, 2 * uniformizer(static_cast<Symbol>(a)).growth_constant());
    }
    std::lock_guard lock(cache_->mutex);
    cache_->growth = n;
    return n;
  }

  std::size_t QaStructure::lipschitz_constant() const {
    std::lock_guard lock(cache_->mutex);
    if (!cache_->lipschitz) {
      // inverse() keeps the state count, so the inverses add nothing
      std::size_t n = equality_.num_states();
      for (auto const& t : right_mult_) {
        n = std::max(n, t.num_states());
      }
      cache_->lipschitz = n + 1;
    }
    return *cache_->lipschitz;
  }

  std::vector<std::string> QaStructure::check_invariants() const {
    std::vector<std::string> out;
    if (mode_ == Mode::semigroup && accepts(language_, Word{})) {
      out.push_back("semigroup mode but L contains the empty word");
    }
    auto check_rel = [&](Transducer const& t, std::string const& name) {
      if (!is_subset(domain(t), language_)) {
        out.push_back("domain of " + name + " is not contained in L");
      }
      if (!is_subset(image(t), language_)) {
        out.push_back("image of " + name + " is not contained in L");
      }
    };
    check_rel(equality_, "R");
    for (std::size_t a = 0; a < alphabet_.size(); ++a) {
      auto const name = "R_" + alphabet_.token(static_cast<Symbol>(a));
      check_rel(right_mult_[a], name);
      if (!accepts(language_, letter_reps_[a])) {
        out.push_back("l(" + alphabet_.token(static_cast<Symbol>(a)) + ") is not in L");
      }
    }
    if (neutral_rep_ && !accepts(language_, *neutral_rep_)) {
      out.push_back("l(1) is not in L");
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Representatives and the word problem
  ////////////////////////////////////////////////////////////////////////

  std::vector<Word> prefix_representatives(QaStructure const& s, std::span<Symbol const> u,
                                           RepresentativeOptions const& opts) {
    check_word(s.alphabet(), u, "word");
    std::vector<Word> out;
    out.reserve(u.size() + 1);
    bool const has_empty = s.mode() == Mode::monoid && s.neutral_rep().has_value();
    out.push_back(has_empty ? *s.neutral_rep() : Word{});
    if (u.empty()) {
      if (!has_empty) {
        throw PreconditionError(s.mode() == Mode::semigroup
                                    ? "the empty word has no value in semigroup mode"
                                    : "l(1) is needed for the empty word");
      }
      return out;
    }
    std::size_t steps = 0;
    out.push_back(s.letter_rep(u[0]));
    for (std::size_t i = 1; i < u.size(); ++i) {
      try {
        out.push_back(s.uniformizer(u[i]).select(out.back()));
      } catch (PreconditionError const&) {
        throw InvalidStructure("τ_" + s.alphabet().token(u[i]) + " is undefined on l("
                               + s.alphabet().format(u.subspan(0, i)) + ")");
      }
      steps += out.back().size();
      if (opts.max_steps != 0 && steps > opts.max_steps) {
        throw ResourceLimit("representative: more than " + std::to_string(opts.max_steps)
                            + " letters produced");
      }
    }
    return out;
  }

  Word representative(QaStructure const& s, std::span<Symbol const> u,
                      RepresentativeOptions const& opts) {
    return prefix_representatives(s, u, opts).back();
  }

  bool word_problem(QaStructure const& s, std::span<Symbol const> u, std::span<Symbol const> v,
                    RepresentativeOptions const& opts) {
    return contains_pair(s.equality(), representative(s, u, opts), representative(s, v, opts));
  }

  Transducer rw_relation(QaStructure const& s, std::span<Symbol const> w) {
    check_word(s.alphabet(), w, "word");
    if (w.empty()) {
      return s.equality();
    }
    Transducer cur = s.right_mult(w[0]);
    for (std::size_t i = 1; i < w.size(); ++i) {
      cur = compose(s.right_mult(w[i]), cur);
    }
    return cur;
  }

  ////////////////////////////////////////////////////////////////////////
  // Validation
  ////////////////////////////////////////////////////////////////////////

  ValidationReport validate(QaStructure const& s, SemigroupOracle const& oracle, std::size_t depth,
                            std::size_t max_issues) {
    if (!(oracle.alphabet() == s.alphabet())) {
      throw AlphabetMismatch("oracle alphabet differs from the structure alphabet");
    }
    ValidationReport report;
    report.depth = depth;
    auto issue   = [&](ValidationIssue i) {
      report.passed = false;
      ++report.issue_count;
      if (report.issues.size() < max_issues) {
        report.issues.push_back(std::move(i));
      }
    };
    for (auto& msg : s.check_invariants()) {
      issue({"invariant", msg, {}, {}, std::nullopt});
    }

    auto const& a    = s.alphabet();
    auto const  lang = determinize(s.language());
    bool const  semi = s.mode() == Mode::semigroup;

    // values of every word up to depth, in shortlex order
    auto                                        words = all_words(a.size(), depth);
    std::unordered_map<Word, Element, WordHash> value;
    value.reserve(words.size());
    for (auto const& w : words) {
      if (w.empty()) {
        value.emplace(w, oracle.identity());
      } else {
        Word prefix(w.begin(), w.end() - 1);
        value.emplace(w, oracle.multiply(value.at(prefix), oracle.generator(w.back())));
      }
    }
    std::unordered_map<Element, std::vector<Word>, ElementHash> in_l;  // L-words by value
    for (auto const& w : words) {
      if (semi && w.empty()) {
        continue;
      }
      ++report.words_checked;
      if (lang.accepts(w)) {
        in_l[value.at(w)].push_back(w);
      }
    }
    auto in_language = [&](Word const& w) {
      return lang.accepts(w);
    };
    auto value_of = [&](Word const& w) {
      auto it = value.find(w);
      return it != value.end() ? it->second : oracle.eval(w);
    };

    // R: soundness over its enumerated pairs, completeness over L-words
    for (auto const& [u, v] : enumerate_pairs(s.equality(), depth)) {
      ++report.pairs_checked;
      if (!in_language(u) || !in_language(v)) {
        issue({"R", "pair outside L x L", u, v, std::nullopt});
      } else if (value_of(u) != value_of(v)) {
        issue({"R", "pair with different values", u, v, std::nullopt});
      }
    }
    for (auto const& [e, ws] : in_l) {
      for (auto const& u : ws) {
        for (auto const& v : ws) {
          ++report.pairs_checked;
          if (!contains_pair(s.equality(), u, v)) {
            issue({"R", "equal values but pair missing", u, v, std::nullopt});
          }
        }
      }
    }

    // R_a
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      auto const& ra  = s.right_mult(x);
      auto const  gen = oracle.generator(x);
      for (auto const& [u, v] : enumerate_pairs(ra, depth)) {
        ++report.pairs_checked;
        if (!in_language(u) || !in_language(v)) {
          issue({"R_a", "pair outside L x L", u, v, x});
        } else if (oracle.multiply(value_of(u), gen) != value_of(v)) {
          issue({"R_a", "pair with μ(ua) != μ(v)", u, v, x});
        }
      }
      for (auto const& [e, ws] : in_l) {
        auto target = in_l.find(oracle.multiply(e, gen));
        if (target == in_l.end()) {
          continue;
        }
        for (auto const& u : ws) {
          for (auto const& v : target->second) {
            ++report.pairs_checked;
            if (!contains_pair(ra, u, v)) {
              issue({"R_a", "μ(ua) = μ(v) but pair missing", u, v, x});
            }
          }
        }
      }
    }

    // Surjectivity sample: every value reached by a word up to depth has a
    // representative, either among the L-words seen or via l().
    std::unordered_map<Element, bool, ElementHash> reached;
    std::unordered_map<Word, Word, WordHash>       reps;
    for (auto const& w : words) {
      if (semi && w.empty()) {
        continue;
      }
      auto const& e = value.at(w);
      if (reached.count(e) != 0) {
        continue;
      }
      if (in_l.count(e) != 0) {
        reached.emplace(e, true);
        continue;
      }
      std::optional<Word> rep;
      std::string         why;
      try {
        if (w.empty()) {
          rep = representative(s, w);
        } else if (w.size() == 1) {
          rep = s.letter_rep(w[0]);
        } else {
          Word prefix(w.begin(), w.end() - 1);
          auto it = reps.find(prefix);
          rep     = s.uniformizer(w.back()).select(it != reps.end() ? it->second
                                                                    : representative(s, prefix));
        }
      } catch (Error const& ex) {
        why = ex.what();
      }
      if (rep) {
        reps.emplace(w, *rep);
      }
      bool ok = rep && lang.accepts(*rep) && oracle.eval(*rep) == e;
      reached.emplace(e, ok);
      if (!ok) {
        issue({"surjectivity",
               why.empty() ? "no representative in L for the value of this word" : why, w,
               rep.value_or(Word{}), std::nullopt});
      }
    }
    report.elements_reached = reached.size();
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Monoid / semigroup conversion
  ////////////////////////////////////////////////////////////////////////

  namespace {

    Transducer with_alphabets(Transducer const& t, Alphabet const& in, Alphabet const& out) {
      Transducer r(in, out, t.num_states());
      for (State s : t.initial()) {
        r.add_initial(s);
      }
      for (State s : t.final_states()) {
        r.add_final(s);
      }
      for (auto const& tr : t.transitions()) {
        r.add_transition(tr.from, tr.in == kEpsilon ? kEpsilon : in.symbol(t.input_alphabet().token(tr.in)),
                         tr.out == kEpsilon ? kEpsilon : out.symbol(t.output_alphabet().token(tr.out)),
                         tr.to);
      }
      return r;
    }

    Transducer restrict_nonempty(Transducer const& t) {
      return restrict_recognizable(t, nonempty_words(t.input_alphabet()),
                                   nonempty_words(t.output_alphabet()));
    }

  }  // namespace

  QaStructure semigroup_to_monoid(QaStructure const& s) {
    return QaStructure(s.alphabet(), Mode::monoid, s.language(), s.equality(), s.right_mults(),
                       s.letter_reps(), s.neutral_rep());
  }

  Transducer replace_empty_by_letter(Transducer const& t, std::string const& token) {
    if (t.input_alphabet().contains(token) || t.output_alphabet().contains(token)) {
      throw AlphabetMismatch("fresh letter \"" + token + "\" already in the alphabet");
    }
    auto const in  = t.input_alphabet().extended({token});
    auto const out = t.output_alphabet().extended({token});
    auto const e   = with_alphabets(t, in, out);
    auto const c_in  = single_word(in, {in.symbol(token)});
    auto const c_out = single_word(out, {out.symbol(token)});

    auto result = restrict_nonempty(e);
    auto to_empty   = restrict_recognizable(e, nonempty_words(in), single_word(out, {}));
    auto from_empty = restrict_recognizable(e, single_word(in, {}), nonempty_words(out));
    result = union_of(result, cartesian_product(domain(to_empty), c_out));
    result = union_of(result, cartesian_product(c_in, image(from_empty)));
    if (contains_pair(t, Word{}, Word{})) {
      result = union_of(result, cartesian_product(c_in, c_out));
    }
    return nivat_normalize(result);
  }

  SemigroupConversion monoid_to_semigroup(QaStructure const& s, OraclePtr const& oracle,
                                          std::size_t depth, ConversionBranch branch,
                                          std::string const& fresh_token) {
    if (s.mode() != Mode::monoid) {
      throw PreconditionError("monoid_to_semigroup needs a monoid structure");
    }
    if (!oracle || !(oracle->alphabet() == s.alphabet())) {
      throw AlphabetMismatch("oracle alphabet differs from the structure alphabet");
    }
    auto const& a         = s.alphabet();
    bool const  empty_in_l = accepts(s.language(), Word{});

    std::optional<Word> witness;
    auto const          one = oracle->identity();
    for (auto const& w : enumerate(s.language(), depth)) {
      if (!w.empty() && oracle->eval(w) == one) {
        witness = w;
        break;
      }
    }
    bool fresh = false;
    switch (branch) {
      case ConversionBranch::automatic:
        fresh = empty_in_l && !witness;
        break;
      case ConversionBranch::intersect:
        fresh = false;
        break;
      case ConversionBranch::fresh_letter:
        fresh = true;
        break;
    }

    if (!fresh) {
      auto lang = intersection(s.language(), nonempty_words(a));
      std::vector<Transducer> ra;
      for (auto const& t : s.right_mults()) {
        ra.push_back(restrict_nonempty(t));
      }
      auto nonempty_or_witness = [&](Word const& w) {
        if (!w.empty()) {
          return w;
        }
        if (!witness) {
          throw PreconditionError("no nonempty representative of the identity up to depth "
                                  + std::to_string(depth));
        }
        return *witness;
      };
      std::vector<Word> reps;
      for (auto const& w : s.letter_reps()) {
        reps.push_back(nonempty_or_witness(w));
      }
      std::optional<Word> neutral;
      if (s.neutral_rep()) {
        neutral = nonempty_or_witness(*s.neutral_rep());
      }
      return {QaStructure(a, Mode::semigroup, lang, restrict_nonempty(s.equality()), ra, reps, neutral),
              false, witness, oracle};
    }

    if (a.contains(fresh_token)) {
      throw AlphabetMismatch("fresh letter \"" + fresh_token + "\" already in the alphabet");
    }
    auto const big = a.extended({fresh_token});
    auto const c   = big.symbol(fresh_token);
    auto       f   = [&](Word const& w) { return w.empty() ? Word{c} : w; };

    auto lang = embed(intersection(s.language(), nonempty_words(a)), big);
    if (empty_in_l) {
      lang = union_of(lang, single_word(big, {c}));
    }
    auto                    eq = replace_empty_by_letter(s.equality(), fresh_token);
    std::vector<Transducer> ra;
    for (auto const& t : s.right_mults()) {
      ra.push_back(replace_empty_by_letter(t, fresh_token));
    }
    ra.push_back(eq);
    std::vector<Word> reps;
    for (auto const& w : s.letter_reps()) {
      reps.push_back(f(w));
    }
    Word neutral = f(s.neutral_rep().value_or(Word{}));
    reps.push_back(neutral);
    return {QaStructure(big, Mode::semigroup, lang, eq, ra, reps, neutral), true, witness,
            with_identity_letter(oracle, fresh_token)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Generators and representatives
  ////////////////////////////////////////////////////////////////////////

  QaStructure change_generators(QaStructure const& s, Alphabet const& b,
                                std::vector<Word> const& alpha, std::vector<Word> const& lift) {
    auto const& a = s.alphabet();
    if (alpha.size() != a.size() || lift.size() != b.size()) {
      throw PreconditionError("change_generators: alpha needs one word per old letter, lift one per new letter");
    }
    for (auto const& w : alpha) {
      check_word(b, w, "alpha image");
      if (s.mode() == Mode::semigroup && w.empty()) {
        throw PreconditionError("alpha must map letters to nonempty words in semigroup mode");
      }
    }
    for (auto const& w : lift) {
      check_word(a, w, "lift word");
      if (s.mode() == Mode::semigroup && w.empty()) {
        throw PreconditionError("empty lift word in semigroup mode");
      }
    }
    auto recode = [&](Transducer const& t) { return apply_morphism_pair(t, alpha, b, alpha, b); };
    auto apply  = [&](Word const& w) {
      Word out;
      for (Symbol x : w) {
        out = concat(out, alpha[static_cast<std::size_t>(x)]);
      }
      return out;
    };
    auto                    k = image(recode(diagonal(s.language())));
    std::vector<Transducer> tb;
    std::vector<Word>       reps;
    for (auto const& w : lift) {
      tb.push_back(recode(rw_relation(s, w)));
      reps.push_back(apply(w.empty() ? *s.neutral_rep() : representative(s, w)));
    }
    std::optional<Word> neutral;
    if (s.neutral_rep()) {
      neutral = apply(*s.neutral_rep());
    }
    return QaStructure(b, s.mode(), k, recode(s.equality()), tb, reps, neutral);
  }

  QaStructure restrict_representatives(QaStructure const& s, Nfa const& sublanguage) {
    if (!(sublanguage.alphabet() == s.alphabet())) {
      throw AlphabetMismatch("sublanguage is not over the structure alphabet");
    }
    if (!is_subset(sublanguage, s.language())) {
      throw PreconditionError("sublanguage is not contained in L");
    }
    auto restrict = [&](Transducer const& t) {
      return restrict_recognizable(t, sublanguage, sublanguage);
    };
    auto move_rep = [&](Word const& w) {
      if (accepts(sublanguage, w)) {
        return w;
      }
      auto candidates = image(restrict_recognizable(s.equality(), single_word(s.alphabet(), w), sublanguage));
      return shortlex_least(candidates).value_or(w);
    };
    std::vector<Transducer> ra;
    for (auto const& t : s.right_mults()) {
      ra.push_back(restrict(t));
    }
    std::vector<Word> reps;
    for (auto const& w : s.letter_reps()) {
      reps.push_back(move_rep(w));
    }
    std::optional<Word> neutral;
    if (s.neutral_rep()) {
      neutral = move_rep(*s.neutral_rep());
    }
    return QaStructure(s.alphabet(), s.mode(), sublanguage, restrict(s.equality()), ra, reps, neutral);
  }

  ////////////////////////////////////////////////////////////////////////
  // Presentations and derivations
  ////////////////////////////////////////////////////////////////////////

  Presentation presentation(QaStructure const& s) {
    auto const& a = s.alphabet();
    Transducer  t = s.equality();
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      // {(ua, v) | (u, v) in R_a}: one more input letter after acceptance
      auto  ra  = s.right_mult(x);
      State end = ra.add_state();
      for (State f : ra.final_states()) {
        ra.add_transition(f, x, kEpsilon, end);
      }
      Transducer shifted(a, a, ra.num_states());
      for (State i : ra.initial()) {
        shifted.add_initial(i);
      }
      shifted.add_final(end);
      for (auto const& tr : ra.transitions()) {
        shifted.add_transition(tr.from, tr.in, tr.out, tr.to);
      }
      t = union_of(t, shifted);
    }
    std::vector<WordPair> letters;
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      letters.push_back({Word{x}, s.letter_rep(x)});
    }
    t = union_of(t, from_pairs(a, a, letters));
    return {a, nivat_normalize(t)};
  }

  bool check_derivation(Presentation const& p, Derivation const& d) {
    if (d.steps.size() != d.rewrites.size() + 1) {
      return false;
    }
    for (std::size_t i = 0; i < d.rewrites.size(); ++i) {
      auto const& r    = d.rewrites[i];
      auto const& from = d.steps[i];
      auto const& to   = d.steps[i + 1];
      if (from.size() < r.prefix.size() || !std::equal(r.prefix.begin(), r.prefix.end(), from.begin())) {
        return false;
      }
      Word expect = concat(r.replacement, std::span<Symbol const>(from).subspan(r.prefix.size()));
      if (expect != to) {
        return false;
      }
      bool in_t = r.forward ? contains_pair(p.relation, r.prefix, r.replacement)
                            : contains_pair(p.relation, r.replacement, r.prefix);
      if (!in_t) {
        return false;
      }
    }
    return true;
  }

  Derivation derivation(QaStructure const& s, std::span<Symbol const> u, std::span<Symbol const> v,
                        RepresentativeOptions const& opts) {
    auto check_empty = [&](std::span<Symbol const> w) {
      if (w.empty() && !(s.mode() == Mode::monoid && s.neutral_rep() && s.neutral_rep()->empty())) {
        throw PreconditionError("derivation: the empty word needs monoid mode with l(1) = ε");
      }
    };
    check_empty(u);
    check_empty(v);
    auto const pu = prefix_representatives(s, u, opts);
    auto const pv = prefix_representatives(s, v, opts);
    if (!contains_pair(s.equality(), pu.back(), pv.back())) {
      throw PreconditionError("derivation: the words are not equal in the semigroup");
    }

    Derivation d;
    d.steps.emplace_back(u.begin(), u.end());
    auto push = [&](Rewrite r) {
      auto const& cur = d.steps.back();
      d.steps.push_back(concat(r.replacement, std::span<Symbol const>(cur).subspan(r.prefix.size())));
      d.rewrites.push_back(std::move(r));
    };
    for (std::size_t i = 1; i <= u.size(); ++i) {
      if (i == 1) {
        push({Word{u[0]}, pu[1], true, "letter"});
      } else {
        push({concat(pu[i - 1], u.subspan(i - 1, 1)), pu[i], true, "right-mult"});
      }
    }
    push({pu.back(), pv.back(), true, "equality"});
    for (std::size_t j = v.size(); j >= 1; --j) {
      if (j == 1) {
        push({pv[1], Word{v[0]}, false, "letter"});
      } else {
        push({pv[j], concat(pv[j - 1], v.subspan(j - 1, 1)), false, "right-mult"});
      }
    }
    if (!check_derivation(presentation(s), d)) {
      throw InvalidStructure("derivation: a step is not in the presentation");
    }
    return d;
  }

  ////////////////////////////////////////////////////////////////////////
  // Weak Lipschitz certificates
  ////////////////////////////////////////////////////////////////////////

  LipschitzCertificate lipschitz_certificate(QaStructure const& s, SemigroupOracle const& oracle,
                                             std::span<Symbol const> u, std::span<Symbol const> v,
                                             std::optional<Symbol> letter) {
    if (!(oracle.alphabet() == s.alphabet())) {
      throw AlphabetMismatch("oracle alphabet differs from the structure alphabet");
    }
    auto const& t    = letter ? s.right_mult(*letter) : s.equality();
    auto        path = accepting_path(t, u, v);
    if (!path) {
      throw PreconditionError(std::string("pair is not in ") + (letter ? "R_a" : "R"));
    }
    auto const h = label_automaton(t);
    auto const k = static_cast<Symbol>(s.alphabet().size());

    LipschitzCertificate c;
    c.u.assign(u.begin(), u.end());
    c.v.assign(v.begin(), v.end());
    c.letter     = letter;
    c.bound      = s.lipschitz_constant();
    bool const group = oracle.kind() == OracleKind::group;
    Element    x = oracle.identity(), y = oracle.identity();
    std::size_t const n = path->labels.size();
    for (std::size_t i = 0; i <= n; ++i) {
      CertificateStep step;
      if (i > 0) {
        auto [in, out] = path->labels[i - 1];
        step.in        = in;
        step.out       = out;
        if (in != kEpsilon) {
          x = oracle.multiply(x, oracle.generator(in));
        }
        if (out != kEpsilon) {
          y = oracle.multiply(y, oracle.generator(out));
        }
      }
      for (Symbol m : completion_word(h, path->states[i])) {
        (m < k ? step.alpha : step.beta).push_back(m < k ? m : m - k);
      }
      auto d = cayley_distance(oracle, x, y, c.bound);
      if (!d) {
        c.failure = "prefix " + std::to_string(i) + " is farther than P";
      }
      step.distance = d.value_or(c.bound + 1);
      if (group) {
        if (i == 0) {
          step.connector = Word{};
        } else if (i == n) {
          step.connector = letter ? Word{*letter} : Word{};
        } else {
          step.connector = connecting_word(oracle, x, y, c.bound);
        }
      }
      (i == 0 ? c.start : c.steps.emplace_back()) = std::move(step);
    }
    std::string why;
    c.verified = verify_certificate(s, oracle, c, &why);
    if (!c.verified && c.failure.empty()) {
      c.failure = why;
    }
    return c;
  }

  bool verify_certificate(QaStructure const& s, SemigroupOracle const& oracle,
                          LipschitzCertificate const& c, std::string* why) {
    auto fail = [&](std::string msg) {
      if (why) {
        *why = std::move(msg);
      }
      return false;
    };
    Word ru, rv;
    for (auto const& st : c.steps) {
      if ((st.in == kEpsilon) == (st.out == kEpsilon)) {
        return fail("step reads on both or neither tape");
      }
      (st.in != kEpsilon ? ru : rv).push_back(st.in != kEpsilon ? st.in : st.out);
    }
    if (ru != c.u || rv != c.v) {
      return fail("interleaving does not spell the pair");
    }
    if (c.bound != s.lipschitz_constant()) {
      return fail("bound differs from the structure's P");
    }
    auto const link = c.letter ? oracle.generator(*c.letter) : oracle.identity();
    Element    x = oracle.identity(), y = oracle.identity();
    for (std::size_t i = 0; i <= c.steps.size(); ++i) {
      auto const& st = i == 0 ? c.start : c.steps[i - 1];
      if (i > 0) {
        if (st.in != kEpsilon) {
          x = oracle.multiply(x, oracle.generator(st.in));
        } else {
          y = oracle.multiply(y, oracle.generator(st.out));
        }
      }
      // the completed path is in the relation: x α link = y β
      if (oracle.multiply(oracle.multiply(x, oracle.eval(st.alpha)), link)
          != oracle.multiply(y, oracle.eval(st.beta))) {
        return fail("completion at prefix " + std::to_string(i) + " does not close");
      }
      if (st.alpha.size() + st.beta.size() + (c.letter ? 1 : 0) > c.bound) {
        return fail("completion at prefix " + std::to_string(i) + " is longer than P");
      }
      auto d = cayley_distance(oracle, x, y, c.bound);
      if (!d || *d != st.distance) {
        return fail("distance at prefix " + std::to_string(i) + " is wrong or exceeds P");
      }
      if (st.connector) {
        if (st.connector->size() > c.bound || oracle.multiply(x, oracle.eval(*st.connector)) != y) {
          return fail("connector at prefix " + std::to_string(i) + " is wrong");
        }
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Decision procedures
  ////////////////////////////////////////////////////////////////////////

  bool is_group(QaStructure const& s, std::span<Symbol const> l1) {
    check_word(s.alphabet(), l1, "l1");
    if (!accepts(s.language(), l1)) {
      throw PreconditionError("l1 is not in L");
    }
    auto const& a   = s.alphabet();
    auto const  r_e = rw_relation(s, l1);
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      auto const& la = s.letter_rep(x);
      if (!contains_pair(s.right_mult(x), l1, la) || !contains_pair(r_e, la, la)) {
        return false;  // l1 is not a two-sided identity
      }
    }
    auto const target = single_word(a, Word(l1.begin(), l1.end()));
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      if (is_empty(image(restrict_recognizable(s.right_mult(x), s.language(), target)))) {
        return false;
      }
    }
    return true;
  }

  Nfa left_neutral_set(QaStructure const& s) {
    auto const& a   = s.alphabet();
    auto const  all = universal_language(a);
    Nfa         e   = all;
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      auto ra = restrict_recognizable(s.right_mult(x), all, single_word(a, s.letter_rep(x)));
      e       = intersection(e, domain(ra));
    }
    return trim(remove_epsilon(e));
  }

  NeutralSearch find_neutral(QaStructure const& s, std::size_t budget) {
    NeutralSearch     result;
    auto const        e = left_neutral_set(s);
    std::vector<Word> candidates;
    bool const        finite = is_finite_language(e);
    if (finite) {
      candidates = enumerate(e, e.num_states());
    } else {
      for (std::size_t len = 0; candidates.size() < budget; ++len) {
        candidates = enumerate(e, len);
      }
    }
    for (auto const& w : candidates) {
      if (result.candidates == budget) {
        return result;
      }
      ++result.candidates;
      auto const r = rw_relation(s, w);
      bool       ok = true;
      for (Symbol x = 0; x < static_cast<Symbol>(s.alphabet().size()) && ok; ++x) {
        ok = contains_pair(r, s.letter_rep(x), s.letter_rep(x));
      }
      if (ok) {
        result.neutral = w;
        return result;
      }
    }
    result.exhausted_language = finite;
    return result;
  }

  FinitenessResult is_finite(QaStructure const& s, std::size_t budget, SemigroupOracle const* oracle,
                             RepresentativeOptions const& opts) {
    constexpr std::size_t kClassLimit = 100'000;
    auto const&           a           = s.alphabet();
    auto const&           r           = s.equality();
    auto same = [&](Word const& x, Word const& y) { return contains_pair(r, x, y); };
    auto add  = [&](std::vector<Word>& set, Word const& w) {
      for (auto const& x : set) {
        if (same(x, w)) {
          return false;
        }
      }
      if (set.size() >= kClassLimit) {
        throw ResourceLimit("is_finite: more than " + std::to_string(kClassLimit) + " classes");
      }
      set.push_back(w);
      return true;
    };

    FinitenessResult  result;
    std::vector<Word> shorter;  // classes of words of length <= n
    std::vector<Word> level;    // classes of words of length exactly n
    if (s.mode() == Mode::monoid && s.neutral_rep()) {
      add(shorter, *s.neutral_rep());
    }
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      if (add(level, s.letter_rep(x))) {
        add(shorter, s.letter_rep(x));
      }
    }
    std::size_t steps = 0;
    for (std::size_t n = 1; n <= budget; ++n) {
      std::vector<Word> next;
      bool              all_old = true;
      for (auto const& w : level) {
        for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
          Word img;
          try {
            img = s.uniformizer(x).select(w);
          } catch (PreconditionError const&) {
            throw InvalidStructure("τ_" + a.token(x) + " is undefined on a representative");
          }
          steps += img.size();
          if (opts.max_steps != 0 && steps > opts.max_steps) {
            throw ResourceLimit("is_finite: step budget exceeded");
          }
          if (add(next, img)) {
            bool old = std::any_of(shorter.begin(), shorter.end(), [&](Word const& y) { return same(y, img); });
            all_old  = all_old && old;
          }
        }
      }
      if (all_old) {
        result.verdict = Finiteness::finite;
        result.n       = n;
        result.classes = shorter.size();
        return result;
      }
      for (auto const& w : next) {
        add(shorter, w);
      }
      level = std::move(next);
    }
    result.classes = shorter.size();
    result.n       = budget;
    if (oracle && !oracle->size() && oracle->certifies_infinite()) {
      result.verdict = Finiteness::infinite_evidence;
    }
    return result;
  }

  ////////////////////////////////////////////////////////////////////////
  // Graded structures
  ////////////////////////////////////////////////////////////////////////

  namespace {
    std::optional<WordPair> offset_witness(Transducer const& t, long expected) {
      for (std::size_t len = 0; len <= 8; ++len) {
        for (auto const& p : enumerate_pairs(t, len)) {
          if (static_cast<long>(p.second.size()) - static_cast<long>(p.first.size()) != expected) {
            return p;
          }
        }
      }
      return std::nullopt;
    }
  }  // namespace

  AutomaticStructure graded_to_automatic(QaStructure const& s, std::string const& pad_symbol) {
    auto const& a = s.alphabet();
    if (length_offset(s.equality()) != 0) {
      throw NotGraded("R is not length-preserving", std::nullopt, offset_witness(s.equality(), 0));
    }
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      if (length_offset(s.right_mult(x)) != 1) {
        throw NotGraded("R_" + a.token(x) + " does not add exactly one letter", x,
                        offset_witness(s.right_mult(x), 1));
      }
    }
    AutomaticStructure out{to_letter_pair_automaton(s.equality()), {}};
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      out.right_mult.push_back(pad(s.right_mult(x), pad_symbol));
    }
    return out;
  }

}  // namespace qa
