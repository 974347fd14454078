#pragma once

// Line tokenizer shared by the automaton, transducer and table readers.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace qa::detail {

  struct Line {
    std::size_t              number;
    std::vector<std::string> fields;
  };

  // Splits text into nonblank lines of whitespace separated fields, with
  // everything after '#' dropped.
  std::vector<Line> tokenize_lines(std::string_view text);

  // Parses a non-negative integer field, throwing ParseError on failure.
  std::size_t parse_index(std::string const& field, std::size_t line);

}  // namespace qa::detail
