#include "qa/manifest.hpp"

#include <fstream>
#include <sstream>

#include "qa/autogen.hpp"
#include "qa/errors.hpp"

namespace qa {

  using nlohmann::json;
  namespace fs = std::filesystem;

  std::string read_file(fs::path const& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw ParseError(path.string() + ": cannot open", 0);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write_file(fs::path const& path, std::string const& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text)) {
      throw Error(path.string() + ": cannot write");
    }
  }

  namespace {

    [[noreturn]] void bad(std::string const& what) {
      throw ParseError("manifest: " + what, 0);
    }

    json const& field(json const& j, char const* key) {
      if (!j.is_object() || !j.contains(key)) {
        bad(std::string("missing field \"") + key + "\"");
      }
      return j.at(key);
    }

    std::string string_field(json const& j, char const* key) {
      auto const& v = field(j, key);
      if (!v.is_string()) {
        bad(std::string("field \"") + key + "\" must be a string");
      }
      return v.get<std::string>();
    }

    Alphabet parse_alphabet(json const& j) {
      if (!j.is_array() || j.empty()) {
        bad("\"alphabet\" must be a nonempty array of tokens");
      }
      std::vector<std::string> tokens;
      for (auto const& t : j) {
        if (!t.is_string()) {
          bad("alphabet tokens must be strings");
        }
        tokens.push_back(t.get<std::string>());
      }
      try {
        return Alphabet(std::move(tokens));
      } catch (Error const& e) {
        bad(e.what());
      }
    }

    // Errors from a referenced file carry its path.
    template <class F>
    auto from_file(fs::path const& path, F parse) {
      auto const text = read_file(path);
      try {
        return parse(text);
      } catch (Error const& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
      }
    }

    std::vector<std::vector<std::int64_t>> letter_vectors(json const& params, Alphabet const& a) {
      auto const& letters = field(params, "letters");
      if (!letters.is_object()) {
        bad("\"letters\" must map tokens to integer vectors");
      }
      std::vector<std::vector<std::int64_t>> vectors(a.size());
      for (auto const& [tok, vec] : letters.items()) {
        auto s = a.find(tok);
        if (!s) {
          bad("oracle letter \"" + tok + "\" is not in the alphabet");
        }
        if (!vec.is_array()) {
          bad("vector of \"" + tok + "\" must be an array");
        }
        for (auto const& x : vec) {
          if (!x.is_number_integer()) {
            bad("vector of \"" + tok + "\" must hold integers");
          }
          vectors[static_cast<std::size_t>(*s)].push_back(x.get<std::int64_t>());
        }
      }
      return vectors;
    }

    Alphabet need(std::optional<Alphabet> const& a, std::string const& name) {
      if (!a) {
        bad("oracle \"" + name + "\" needs the manifest alphabet");
      }
      return *a;
    }

  }  // namespace

  OraclePtr make_oracle(json const& spec, std::optional<Alphabet> const& alphabet,
                        fs::path const& base_dir) {
    auto const name   = string_field(spec, "name");
    json const params = spec.contains("params") ? spec.at("params") : json::object();
    try {
      if (name == "table") {
        auto table = from_file(base_dir / string_field(params, "file"),
                               [](std::string const& t) { return parse_table(t); });
        return table_oracle(table, alphabet);
      }
      if (name == "zk" || name == "nk") {
        auto a       = need(alphabet, name);
        auto vectors = letter_vectors(params, a);
        return name == "zk" ? zk_oracle(a, vectors) : nk_oracle(a, vectors);
      }
      if (name == "free_monoid") {
        return free_monoid_oracle(need(alphabet, name));
      }
      if (name == "free_group") {
        return free_group_oracle(need(alphabet, name));
      }
      if (name == "bicyclic") {
        auto a = need(alphabet, name);
        return bicyclic_oracle(a, a.symbol(string_field(params, "b")),
                               a.symbol(string_field(params, "c")));
      }
      if (name == "with_identity") {
        auto const letter = string_field(params, "letter");
        std::optional<Alphabet> base_alphabet;
        if (alphabet) {
          std::vector<std::string> tokens;
          for (auto const& t : alphabet->tokens()) {
            if (t != letter) {
              tokens.push_back(t);
            }
          }
          base_alphabet = Alphabet(tokens);
        }
        return with_identity_letter(make_oracle(field(params, "base"), base_alphabet, base_dir),
                                    letter);
      }
      if (name == "recoded") {
        auto const& base_spec = field(params, "base");
        std::optional<Alphabet> base_alphabet;
        if (base_spec.contains("alphabet")) {
          base_alphabet = parse_alphabet(base_spec.at("alphabet"));
        }
        auto base = make_oracle(base_spec, base_alphabet, base_dir);
        auto b    = need(alphabet, name);
        auto const& lift_map = field(params, "lift");
        std::vector<Word> lift(b.size());
        for (std::size_t i = 0; i < b.size(); ++i) {
          auto const& tok = b.token(static_cast<Symbol>(i));
          if (!lift_map.contains(tok) || !lift_map.at(tok).is_string()) {
            bad("recoded oracle: no lift word for \"" + tok + "\"");
          }
          lift[i] = base->alphabet().parse_word(lift_map.at(tok).get<std::string>());
        }
        return recoded_oracle(base, b, lift);
      }
    } catch (ParseError const&) {
      throw;
    } catch (Error const& e) {
      bad("oracle \"" + name + "\": " + e.what());
    }
    bad("unknown oracle \"" + name + "\"");
  }

  Manifest parse_manifest(std::string_view text, fs::path const& base_dir) {
    json j;
    try {
      j = json::parse(text);
    } catch (json::parse_error const& e) {
      bad(e.what());
    }
    if (!j.is_object()) {
      bad("top level must be an object");
    }
    Manifest m;
    std::optional<Alphabet> alphabet;
    if (j.contains("alphabet")) {
      alphabet = parse_alphabet(j.at("alphabet"));
    }
    if (j.contains("oracle") && !j.at("oracle").is_null()) {
      m.oracle_spec = j.at("oracle");
      m.oracle      = make_oracle(m.oracle_spec, alphabet, base_dir);
      if (alphabet && !(m.oracle->alphabet() == *alphabet)) {
        bad("oracle alphabet differs from the manifest alphabet");
      }
    }
    if (j.value("autogen", false)) {
      if (!m.oracle) {
        bad("autogen needs an oracle");
      }
      m.structure = autogen_structure(*m.oracle);
      return m;
    }
    if (!alphabet) {
      bad("missing field \"alphabet\"");
    }
    auto const& a    = *alphabet;
    auto const  mode = j.value("mode", std::string("semigroup"));
    if (mode != "semigroup" && mode != "monoid") {
      bad("\"mode\" must be \"semigroup\" or \"monoid\"");
    }
    auto load_nfa = [&](std::string const& rel) {
      return from_file(base_dir / rel, [&](std::string const& t) {
        auto n = parse_automaton(t);
        if (!(n.alphabet() == a)) {
          throw AlphabetMismatch("automaton alphabet differs from the manifest alphabet");
        }
        return n;
      });
    };
    auto load_rel = [&](std::string const& rel) {
      return from_file(base_dir / rel, [](std::string const& t) { return parse_transducer(t); });
    };
    auto word = [&](json const& v, std::string const& what) {
      if (!v.is_string()) {
        bad(what + " must be a string");
      }
      try {
        return a.parse_word(v.get<std::string>());
      } catch (Error const& e) {
        bad(what + ": " + e.what());
      }
    };

    auto lang = load_nfa(string_field(j, "L"));
    auto r    = load_rel(string_field(j, "R"));
    auto const& ra_map  = field(j, "R_a");
    auto const& rep_map = field(j, "letter_reps");
    std::vector<Transducer> ra;
    std::vector<Word>       reps;
    for (auto const& tok : a.tokens()) {
      if (!ra_map.contains(tok)) {
        bad("\"R_a\" has no entry for \"" + tok + "\"");
      }
      if (!rep_map.contains(tok)) {
        bad("\"letter_reps\" has no entry for \"" + tok + "\"");
      }
      ra.push_back(load_rel(ra_map.at(tok).get<std::string>()));
      reps.push_back(word(rep_map.at(tok), "letter_reps." + tok));
    }
    std::optional<Word> neutral;
    if (j.contains("neutral_rep") && !j.at("neutral_rep").is_null()) {
      neutral = word(j.at("neutral_rep"), "neutral_rep");
    }
    try {
      m.structure.emplace(a, mode == "monoid" ? Mode::monoid : Mode::semigroup, std::move(lang),
                          std::move(r), std::move(ra), std::move(reps), std::move(neutral));
    } catch (ParseError const&) {
      throw;
    } catch (Error const& e) {
      bad(e.what());
    }
    return m;
  }

  Manifest load_manifest(fs::path const& path) {
    auto const text = read_file(path);
    try {
      auto m = parse_manifest(text, path.parent_path());
      m.path = path;
      return m;
    } catch (ParseError const& e) {
      throw ParseError(path.string() + ": " + e.what(), 0);
    }
  }

  fs::path save_manifest(QaStructure const& s, fs::path const& dir, std::string const& stem,
                         json const& oracle_spec) {
    fs::create_directories(dir);
    auto const& a = s.alphabet();
    json        j;
    j["alphabet"] = a.tokens();
    j["mode"]     = to_string(s.mode());
    auto put      = [&](std::string const& name, std::string const& text) {
      write_file(dir / name, text);
      return name;
    };
    j["L"] = put(stem + ".L.fa", print_automaton(s.language()));
    j["R"] = put(stem + ".R.ftd", print_transducer(s.equality()));
    json ra = json::object(), reps = json::object();
    for (Symbol x = 0; x < static_cast<Symbol>(a.size()); ++x) {
      // letter index rather than token keeps file names portable
      ra[a.token(x)]   = put(stem + ".R" + std::to_string(x) + ".ftd", print_transducer(s.right_mult(x)));
      reps[a.token(x)] = a.format(s.letter_rep(x));
    }
    j["R_a"]         = ra;
    j["letter_reps"] = reps;
    if (s.neutral_rep()) {
      j["neutral_rep"] = a.format(*s.neutral_rep());
    }
    if (!oracle_spec.is_null()) {
      j["oracle"] = oracle_spec;
    }
    auto const path = dir / (stem + ".json");
    write_file(path, j.dump(2) + "\n");
    return path;
  }

}  // namespace qa
