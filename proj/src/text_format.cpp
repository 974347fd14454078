#include "text_format.hpp"

#include <cctype>
#include <charconv>

#include "qa/errors.hpp"

namespace qa::detail {

  std::vector<Line> tokenize_lines(std::string_view text) {
    std::vector<Line> lines;
    std::size_t       number = 0;
    std::size_t       pos    = 0;
    while (pos <= text.size()) {
      auto end = text.find('\n', pos);
      if (end == std::string_view::npos) {
        end = text.size();
      }
      ++number;
      auto raw = text.substr(pos, end - pos);
      if (auto hash = raw.find('#'); hash != std::string_view::npos) {
        raw = raw.substr(0, hash);
      }
      Line        line{number, {}};
      std::size_t i = 0;
      while (i < raw.size()) {
        while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) {
          ++i;
        }
        std::size_t j = i;
        while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) {
          ++j;
        }
        if (j > i) {
          line.fields.emplace_back(raw.substr(i, j - i));
        }
        i = j;
      }
      if (!line.fields.empty()) {
        lines.push_back(std::move(line));
      }
      pos = end + 1;
    }
    return lines;
  }

  std::size_t parse_index(std::string const& field, std::size_t line) {
    std::size_t value = 0;
    auto const* first = field.data();
    auto const* last  = field.data() + field.size();
    auto [ptr, ec]    = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      throw ParseError("expected a non-negative integer, got \"" + field + "\"", line);
    }
    return value;
  }

}  // namespace qa::detail
