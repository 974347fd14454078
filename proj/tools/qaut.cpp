// qaut: command line front end over structure manifests.
//
// Every subcommand prints one JSON report on stdout and a short summary on
// stderr. Exit codes: 0 pass, 1 fail, 2 unknown / budget, 64 usage,
// 65 malformed input, 66 precondition violated, 70 inconsistent structure.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <thread>

#include "qa/errors.hpp"
#include "qa/group.hpp"
#include "qa/manifest.hpp"
#include "qa/structure.hpp"

using namespace qa;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

  enum class Verdict { pass, fail, unknown };

  char const* to_string(Verdict v) {
    switch (v) {
      case Verdict::pass:
        return "pass";
      case Verdict::fail:
        return "fail";
      case Verdict::unknown:
        return "unknown";
    }
    return "?";
  }

  int exit_code(Verdict v) {
    return v == Verdict::pass ? 0 : v == Verdict::fail ? 1 : 2;
  }

  struct Options {
    std::string structure;
    std::string oracle;
    std::size_t depth     = 4;
    std::size_t budget    = 8;
    std::size_t max_steps = 1'000'000;
    std::size_t jobs      = 1;
    bool        json_only = false;

    std::vector<std::string> words;
    std::string              out;
    std::string              l1;
    std::string              map;
    std::string              letter;
    std::string              branch = "auto";
    bool                     certify    = false;
    bool                     use_oracle = false;
  };

  struct Report {
    std::string subcommand;
    json        inputs = json::object();
    Verdict     verdict = Verdict::pass;
    json        result  = json::object();
    json        witnesses = json::array();
    std::string summary;
  };

  struct Context {
    Manifest manifest;

    QaStructure const& s() const {
      return *manifest.structure;
    }
    Alphabet const& a() const {
      return s().alphabet();
    }
    SemigroupOracle const& oracle() const {
      if (!manifest.oracle) {
        throw PreconditionError("this subcommand needs an oracle (manifest \"oracle\" or --oracle)");
      }
      return *manifest.oracle;
    }
    std::string fmt(Word const& w) const {
      return a().format(w);
    }
    Word word(std::string const& text) const {
      return a().parse_word(text);
    }
  };

  json pair_json(Context const& c, Word const& u, Word const& v) {
    return json::array({c.fmt(u), c.fmt(v)});
  }

  Context load(Options const& o) {
    if (o.structure.empty()) {
      throw CLI::RequiredError("--structure");
    }
    Context c{load_manifest(o.structure)};
    if (!o.oracle.empty()) {
      json spec;
      if (!o.oracle.empty() && o.oracle.front() == '{') {
        spec = json::parse(o.oracle);
      } else if (fs::is_regular_file(o.oracle)) {
        spec = json::parse(read_file(o.oracle));
      } else {
        spec = json{{"name", o.oracle}};
      }
      c.manifest.oracle_spec = spec;
      c.manifest.oracle      = make_oracle(spec, c.s().alphabet(), fs::path(o.structure).parent_path());
    }
    return c;
  }

  RepresentativeOptions rep_opts(Options const& o) {
    return {.max_steps = o.max_steps};
  }

  ////////////////////////////////////////////////////////////////////////
  // Subcommands
  ////////////////////////////////////////////////////////////////////////

  void cmd_validate(Options const& o, Context const& c, Report& r) {
    r.inputs["depth"] = o.depth;
    auto v            = validate(c.s(), c.oracle(), o.depth);
    r.verdict         = v.passed ? Verdict::pass : Verdict::fail;
    r.result          = {{"depth", v.depth},
                         {"words_checked", v.words_checked},
                         {"pairs_checked", v.pairs_checked},
                         {"elements_reached", v.elements_reached},
                         {"surjectivity", "sampled"},
                         {"issue_count", v.issue_count}};
    for (auto const& i : v.issues) {
      json w = {{"check", i.check}, {"detail", i.detail}, {"u", c.fmt(i.u)}, {"v", c.fmt(i.v)}};
      if (i.letter) {
        w["letter"] = c.a().token(*i.letter);
      }
      r.witnesses.push_back(w);
    }
    r.summary = std::string(v.passed ? "valid" : "invalid") + " at depth " + std::to_string(o.depth)
                + " (" + std::to_string(v.pairs_checked) + " pairs, " + std::to_string(v.issue_count)
                + " issues)";
  }

  void cmd_rep(Options const& o, Context const& c, Report& r) {
    auto u           = c.word(o.words.at(0));
    r.inputs["word"] = c.fmt(u);
    auto rep         = representative(c.s(), u, rep_opts(o));
    r.result         = {{"representative", c.fmt(rep)}, {"length", rep.size()}};
    r.summary        = c.fmt(rep);
  }

  void cmd_eq(Options const& o, Context const& c, Report& r) {
    auto u = c.word(o.words.at(0)), v = c.word(o.words.at(1));
    r.inputs = {{"u", c.fmt(u)}, {"v", c.fmt(v)}};
    auto ru = representative(c.s(), u, rep_opts(o));
    auto rv = representative(c.s(), v, rep_opts(o));
    bool eq = contains_pair(c.s().equality(), ru, rv);
    r.verdict = eq ? Verdict::pass : Verdict::fail;
    r.result  = {{"equal", eq}};
    r.witnesses.push_back({{"representatives", pair_json(c, ru, rv)}});
    r.summary = eq ? "equal" : "not equal";
  }

  void cmd_present(Options const& o, Context const& c, Report& r) {
    auto p   = presentation(c.s());
    r.result = {{"states", p.relation.num_states()}, {"transitions", p.relation.transitions().size()}};
    if (!o.out.empty()) {
      write_file(o.out, print_transducer(p.relation));
      r.result["out"] = o.out;
    }
    r.summary = "presentation with " + std::to_string(p.relation.num_states()) + " states";
  }

  void cmd_derive(Options const& o, Context const& c, Report& r) {
    auto u = c.word(o.words.at(0)), v = c.word(o.words.at(1));
    r.inputs = {{"u", c.fmt(u)}, {"v", c.fmt(v)}};
    if (!word_problem(c.s(), u, v, rep_opts(o))) {
      r.verdict = Verdict::fail;
      r.summary = "the words are not equal";
      return;
    }
    auto d     = derivation(c.s(), u, v, rep_opts(o));
    json steps = json::array(), rewrites = json::array();
    for (auto const& w : d.steps) {
      steps.push_back(c.fmt(w));
    }
    for (auto const& rw : d.rewrites) {
      rewrites.push_back({{"prefix", c.fmt(rw.prefix)},
                          {"replacement", c.fmt(rw.replacement)},
                          {"direction", rw.forward ? "forward" : "backward"},
                          {"rule", rw.rule}});
    }
    r.result  = {{"n", d.rewrites.size()}, {"steps", steps}, {"rewrites", rewrites}};
    r.summary = std::to_string(d.rewrites.size()) + " rewriting steps";
  }

  json certificate_json(Context const& c, LipschitzCertificate const& cert) {
    json steps = json::array();
    auto one   = [&](CertificateStep const& st) {
      json j = {{"a", st.in == kEpsilon ? "" : c.a().token(st.in)},
                {"b", st.out == kEpsilon ? "" : c.a().token(st.out)},
                {"distance", st.distance},
                {"completion", pair_json(c, st.alpha, st.beta)}};
      if (st.connector) {
        j["connector"] = c.fmt(*st.connector);
      }
      return j;
    };
    steps.push_back(one(cert.start));
    for (auto const& st : cert.steps) {
      steps.push_back(one(st));
    }
    json j = {{"u", c.fmt(cert.u)}, {"v", c.fmt(cert.v)}, {"P", cert.bound},
              {"verified", cert.verified}, {"prefixes", steps}};
    if (cert.letter) {
      j["letter"] = c.a().token(*cert.letter);
    }
    if (!cert.failure.empty()) {
      j["failure"] = cert.failure;
    }
    return j;
  }

  void cmd_lipschitz(Options const& o, Context const& c, Report& r) {
    auto const p = c.s().lipschitz_constant();
    r.result     = {{"P", p}};
    if (o.certify) {
      if (o.words.size() < 2 || o.words.size() > 3) {
        throw CLI::ValidationError("--certify", "expects U V [A]");
      }
      auto u = c.word(o.words[0]), v = c.word(o.words[1]);
      std::optional<Symbol> letter;
      if (o.words.size() == 3) {
        letter = c.a().symbol(o.words[2]);
      }
      auto cert = lipschitz_certificate(c.s(), c.oracle(), u, v, letter);
      r.inputs  = {{"u", c.fmt(u)}, {"v", c.fmt(v)}};
      r.verdict = cert.verified ? Verdict::pass : Verdict::fail;
      r.witnesses.push_back(certificate_json(c, cert));
      r.summary = "P = " + std::to_string(p) + ", certificate " + (cert.verified ? "verified" : "rejected");
      return;
    }
    if (!c.manifest.oracle) {
      r.summary = "P = " + std::to_string(p);
      return;
    }
    // sweep every pair of R and each R_a up to --depth
    struct Job {
      Word                  u, v;
      std::optional<Symbol> letter;
    };
    std::vector<Job> jobs;
    for (auto const& [u, v] : enumerate_pairs(c.s().equality(), o.depth)) {
      jobs.push_back({u, v, std::nullopt});
    }
    for (Symbol a = 0; a < static_cast<Symbol>(c.a().size()); ++a) {
      for (auto const& [u, v] : enumerate_pairs(c.s().right_mult(a), o.depth)) {
        jobs.push_back({u, v, a});
      }
    }
    std::vector<LipschitzCertificate> certs(jobs.size());
    std::atomic<std::size_t>          next{0};
    auto                              worker = [&] {
      for (std::size_t i; (i = next++) < jobs.size();) {
        certs[i] = lipschitz_certificate(c.s(), c.oracle(), jobs[i].u, jobs[i].v, jobs[i].letter);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < std::max<std::size_t>(o.jobs, 1); ++t) {
      pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
      t.join();
    }
    std::size_t failed = 0, max_distance = 0;
    for (auto const& cert : certs) {
      for (auto const& st : cert.steps) {
        max_distance = std::max(max_distance, st.distance);
      }
      if (!cert.verified) {
        ++failed;
        if (r.witnesses.size() < 20) {
          r.witnesses.push_back(certificate_json(c, cert));
        }
      }
    }
    r.inputs  = {{"depth", o.depth}};
    r.verdict = failed == 0 ? Verdict::pass : Verdict::fail;
    r.result["pairs"]        = certs.size();
    r.result["failed"]       = failed;
    r.result["max_distance"] = max_distance;
    r.summary = "P = " + std::to_string(p) + ", " + std::to_string(certs.size()) + " pairs, "
                + std::to_string(failed) + " failed";
  }

  void cmd_isgroup(Options const& o, Context const& c, Report& r) {
    Word l1;
    if (!o.l1.empty()) {
      l1 = c.word(o.l1);
    } else if (c.s().neutral_rep()) {
      l1 = *c.s().neutral_rep();
    } else {
      throw PreconditionError("no --l1 and no neutral_rep in the manifest");
    }
    r.inputs["l1"] = c.fmt(l1);
    bool g         = is_group(c.s(), l1);
    r.verdict      = g ? Verdict::pass : Verdict::fail;
    r.result       = {{"group", g}};
    r.summary      = g ? "group" : "not a group";
  }

  void cmd_neutral(Options const& o, Context const& c, Report& r) {
    r.inputs["budget"] = o.budget;
    auto n             = find_neutral(c.s(), o.budget);
    r.result           = {{"candidates", n.candidates}, {"exhausted_language", n.exhausted_language}};
    if (n.neutral) {
      r.result["neutral"] = c.fmt(*n.neutral);
      r.summary           = "neutral element: \"" + c.fmt(*n.neutral) + "\"";
    } else if (n.exhausted_language) {
      r.verdict = Verdict::fail;
      r.summary = "no neutral element";
    } else {
      r.verdict = Verdict::unknown;
      r.summary = "budget exhausted";
    }
  }

  void cmd_finite(Options const& o, Context const& c, Report& r) {
    r.inputs["budget"] = o.budget;
    auto f = is_finite(c.s(), o.budget, o.use_oracle ? &c.oracle() : nullptr, rep_opts(o));
    r.result = {{"verdict", to_string(f.verdict)}, {"n", f.n}, {"classes", f.classes}};
    switch (f.verdict) {
      case Finiteness::finite:
        r.summary = "finite (n = " + std::to_string(f.n) + ", " + std::to_string(f.classes) + " elements)";
        break;
      case Finiteness::infinite_evidence:
        r.verdict = Verdict::fail;
        r.summary = "infinite (oracle)";
        break;
      case Finiteness::unknown:
        r.verdict = Verdict::unknown;
        r.summary = "unknown after budget " + std::to_string(o.budget);
        break;
    }
  }

  void cmd_graded2auto(Options const& o, Context const& c, Report& r) {
    try {
      auto a   = graded_to_automatic(c.s());
      r.result = {{"equality_states", a.equality.num_states()}};
      json ra  = json::object();
      for (Symbol x = 0; x < static_cast<Symbol>(c.a().size()); ++x) {
        ra[c.a().token(x)] = a.right_mult[static_cast<std::size_t>(x)].num_states();
      }
      r.result["right_mult_states"] = ra;
      if (!o.out.empty()) {
        fs::create_directories(o.out);
        write_file(fs::path(o.out) / "R.fa", print_automaton(a.equality));
        for (Symbol x = 0; x < static_cast<Symbol>(c.a().size()); ++x) {
          write_file(fs::path(o.out) / ("R" + std::to_string(x) + ".fa"),
                     print_automaton(a.right_mult[static_cast<std::size_t>(x)]));
        }
        r.result["out"] = o.out;
      }
      r.summary = "automatic structure built";
    } catch (NotGraded const& e) {
      r.verdict          = Verdict::fail;
      r.result["reason"] = e.what();
      if (e.witness()) {
        json w = {{"pair", pair_json(c, e.witness()->first, e.witness()->second)}};
        if (e.letter()) {
          w["letter"] = c.a().token(*e.letter());
        }
        r.witnesses.push_back(w);
      }
      r.summary = std::string("not graded: ") + e.what();
    }
  }

  void cmd_genchange(Options const& o, Context const& c, Report& r) {
    if (o.map.empty()) {
      throw CLI::RequiredError("--map");
    }
    // {"alphabet": [...], "alpha": {old: word}, "lift": {new: word}}
    auto        m = json::parse(read_file(o.map));
    Alphabet    b(m.at("alphabet").get<std::vector<std::string>>());
    std::vector<Word> alpha, lift;
    for (auto const& t : c.a().tokens()) {
      alpha.push_back(b.parse_word(m.at("alpha").at(t).get<std::string>()));
    }
    for (auto const& t : b.tokens()) {
      lift.push_back(c.a().parse_word(m.at("lift").at(t).get<std::string>()));
    }
    auto s2 = change_generators(c.s(), b, alpha, lift);
    r.inputs["map"] = o.map;
    json spec       = nullptr;
    if (!c.manifest.oracle_spec.is_null()) {
      auto base = c.manifest.oracle_spec;
      base["alphabet"] = c.a().tokens();
      spec = {{"name", "recoded"}, {"params", {{"base", base}, {"lift", m.at("lift")}}}};
    }
    if (!o.out.empty()) {
      auto path         = save_manifest(s2, o.out, fs::path(o.structure).stem().string() + "_gen", spec);
      r.result["out"]   = path.string();
    }
    r.summary = "structure over " + std::to_string(b.size()) + " generators";
    if (c.manifest.oracle) {
      auto nu = recoded_oracle(c.manifest.oracle, b, lift);
      auto v  = validate(s2, *nu, o.depth);
      r.result["validated_depth"] = o.depth;
      r.result["valid"]           = v.passed;
      r.verdict                   = v.passed ? Verdict::pass : Verdict::fail;
      r.summary += v.passed ? ", valid" : ", invalid";
    }
  }

  void cmd_isoperim(Options const& o, Context const& c, Report& r) {
    auto w           = c.word(o.words.at(0));
    r.inputs["word"] = c.fmt(w);
    auto d           = relator_decomposition(c.s(), c.oracle(), w, rep_opts(o));
    json factors     = json::array();
    for (auto const& f : d.factors) {
      factors.push_back({{"conjugator", c.fmt(f.conjugator)}, {"relator", c.fmt(f.relator)}});
    }
    r.verdict = d.verified ? Verdict::pass : Verdict::fail;
    r.result  = {{"factors", factors},
                 {"count", d.factors.size()},
                 {"count_bound", d.count_bound},
                 {"length_bound", d.length_bound},
                 {"N", d.growth},
                 {"P", d.lipschitz},
                 {"target", c.fmt(d.target)},
                 {"verified", d.verified}};
    if (!d.failure.empty()) {
      r.result["failure"] = d.failure;
    }
    r.summary = std::to_string(d.factors.size()) + " conjugated relators, "
                + (d.verified ? "verified" : "NOT verified: " + d.failure);
  }

  void cmd_buildta(Options const& o, Context const& c, Report& r) {
    std::optional<Symbol> letter;
    if (!o.letter.empty()) {
      letter = c.a().symbol(o.letter);
    }
    auto const p = c.s().lipschitz_constant();
    auto       t = build_ta(determinize(c.s().language()), c.oracle(), p, letter);
    r.inputs     = {{"letter", o.letter}};
    r.result     = {{"P", p}, {"states", t.num_states()}, {"transitions", t.transitions().size()}};
    if (!o.out.empty()) {
      write_file(o.out, print_transducer(t));
      r.result["out"] = o.out;
    }
    // compare with the structure's own relation
    auto const& ref  = letter ? c.s().right_mult(*letter) : c.s().equality();
    auto        mine = enumerate_pairs(t, o.depth);
    auto        want = enumerate_pairs(ref, o.depth);
    r.result["agrees_up_to"] = o.depth;
    r.verdict = mine == want ? Verdict::pass : Verdict::fail;
    if (mine != want) {
      std::vector<WordPair> diff;
      std::set_symmetric_difference(mine.begin(), mine.end(), want.begin(), want.end(),
                                    std::back_inserter(diff), PairShortlexLess{});
      for (std::size_t i = 0; i < diff.size() && i < 10; ++i) {
        r.witnesses.push_back({{"pair", pair_json(c, diff[i].first, diff[i].second)}});
      }
    }
    r.summary = "T with " + std::to_string(t.num_states()) + " states, "
                + (mine == want ? "agrees" : "differs") + " up to length " + std::to_string(o.depth);
  }

  void emit(Report const& r, Options const& o, double ms, std::string const& error = {}) {
    json j = {{"subcommand", r.subcommand},
              {"inputs", r.inputs},
              {"verdict", error.empty() ? to_string(r.verdict) : "error"},
              {"result", r.result},
              {"witnesses", r.witnesses},
              {"structure", o.structure},
              {"timing_ms", ms}};
    if (!error.empty()) {
      j["error"] = error;
    }
    std::cout << j.dump(2) << "\n";
    if (!o.json_only) {
      std::cerr << (error.empty() ? r.summary : "error: " + error) << "\n";
    }
  }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-automatic structures: representatives, word problem, certificates"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--structure", o.structure, "structure manifest (JSON)");
  app.add_option("--oracle", o.oracle, "oracle name, JSON spec or spec file (overrides the manifest)");
  app.add_option("--depth", o.depth, "word length for sweeps and validation");
  app.add_option("--budget", o.budget, "budget for semi-decision procedures");
  app.add_option("--max-steps", o.max_steps, "letters produced before giving up (0 = no limit)");
  app.add_option("--jobs", o.jobs, "threads for certificate sweeps");
  app.add_flag("--json", o.json_only, "no human summary on stderr");

  using Handler = void (*)(Options const&, Context const&, Report&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto sub = [&](char const* name, char const* help, Handler h) {
    auto* s = app.add_subcommand(name, help);
    s->fallthrough();
    commands.emplace_back(s, h);
    return s;
  };
  sub("validate", "check the structure against its oracle up to --depth", cmd_validate);
  sub("rep", "representative of a word", cmd_rep)->add_option("word", o.words)->required()->expected(1);
  sub("eq", "word problem", cmd_eq)->add_option("words", o.words, "U V")->required()->expected(2);
  sub("present", "rational presentation T", cmd_present)->add_option("--out", o.out);
  sub("derive", "prefix-rewriting derivation from U to V", cmd_derive)
      ->add_option("words", o.words, "U V")
      ->required()
      ->expected(2);
  {
    auto* l = sub("lipschitz", "constant P, certificate or sweep", cmd_lipschitz);
    l->add_flag("--certify", o.certify, "certify the pair U V [A]");
    l->add_option("words", o.words, "U V [A]")->expected(0, 3);
  }
  sub("isgroup", "decide whether the monoid is a group", cmd_isgroup)->add_option("--l1", o.l1);
  sub("neutral", "search a neutral element", cmd_neutral);
  {
    auto* f = sub("finite", "finiteness semi-decision", cmd_finite);
    f->add_flag("--use-oracle", o.use_oracle, "report infinite evidence from the oracle");
  }
  sub("graded2auto", "automatic structure of a graded structure", cmd_graded2auto)->add_option("--out", o.out);
  {
    auto* g = sub("genchange", "change of generators", cmd_genchange);
    g->add_option("--map", o.map, "JSON {alphabet, alpha, lift}");
    g->add_option("--out", o.out, "directory for the new manifest");
  }
  sub("isoperim", "decompose a trivial word into conjugated relators", cmd_isoperim)
      ->add_option("word", o.words)
      ->required()
      ->expected(1);
  {
    auto* b = sub("buildta", "transducer T_a from the Cayley ball of radius P", cmd_buildta);
    b->add_option("--letter", o.letter, "letter a (empty: the equality relation)");
    b->add_option("--out", o.out);
  }

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    return app.exit(e) == 0 ? 0 : 64;
  }

  Report r;
  auto   t0 = std::chrono::steady_clock::now();
  auto   ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  int code = 0;
  try {
    for (auto [s, h] : commands) {
      if (s->parsed()) {
        r.subcommand = s->get_name();
        auto c       = load(o);
        h(o, c, r);
      }
    }
    emit(r, o, ms());
    code = exit_code(r.verdict);
  } catch (CLI::Error const& e) {
    emit(r, o, ms(), e.what());
    code = 64;
  } catch (ResourceLimit const& e) {
    r.verdict = Verdict::unknown;
    r.summary = std::string("resource limit: ") + e.what();
    r.result["resource_limit"] = e.what();
    emit(r, o, ms());
    code = 2;
  } catch (ParseError const& e) {
    emit(r, o, ms(), e.what());
    code = 65;
  } catch (AlphabetMismatch const& e) {
    emit(r, o, ms(), e.what());
    code = 65;
  } catch (json::exception const& e) {
    emit(r, o, ms(), e.what());
    code = 65;
  } catch (PreconditionError const& e) {
    emit(r, o, ms(), e.what());
    code = 66;
  } catch (Error const& e) {
    emit(r, o, ms(), e.what());
    code = 70;
  }
  return code;
}
