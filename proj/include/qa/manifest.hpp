#pragma once

// Structure manifests: a JSON document naming the alphabet, mode, and the
// automaton / transducer files of a structure, plus an optional builtin
// oracle. Paths are relative to the manifest.
//
//   {
//     "alphabet": ["p", "m"],
//     "mode": "monoid",
//     "L": "L.fa", "R": "R.ftd", "R_a": {"p": "Rp.ftd", "m": "Rm.ftd"},
//     "letter_reps": {"p": "p", "m": "m"},
//     "neutral_rep": "",
//     "oracle": {"name": "zk", "params": {"letters": {"p": [1], "m": [-1]}}}
//   }
//
// With "autogen": true the structure is generated from a finite oracle and
// the L / R / R_a / letter_reps fields are omitted.

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "qa/oracle.hpp"
#include "qa/structure.hpp"

namespace qa {

  struct Manifest {
    std::filesystem::path      path;
    std::optional<QaStructure> structure;
    OraclePtr                  oracle;       // null when none is declared
    nlohmann::json             oracle_spec;  // as written, null when absent
  };

  // Throws ParseError (prefixed with the file path) for malformed input.
  Manifest load_manifest(std::filesystem::path const& path);
  Manifest parse_manifest(std::string_view text, std::filesystem::path const& base_dir);

  // Builtin oracles by name: table {file}, zk / nk {letters: {tok: [ints]}},
  // free_monoid, free_group, bicyclic {b, c}, with_identity {base, letter},
  // recoded {base, lift: {tok: word}}.
  OraclePtr make_oracle(nlohmann::json const& spec, std::optional<Alphabet> const& alphabet,
                        std::filesystem::path const& base_dir);

  // Writes `stem`.json next to L / R / R_a files named after the stem.
  std::filesystem::path save_manifest(QaStructure const& s, std::filesystem::path const& dir,
                                      std::string const& stem,
                                      nlohmann::json const& oracle_spec = nullptr);

  std::string read_file(std::filesystem::path const& path);
  void        write_file(std::filesystem::path const& path, std::string const& text);

}  // namespace qa
