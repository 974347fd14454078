#include "qa/word.hpp"

#include <cctype>
#include <set>

#include "qa/errors.hpp"

namespace qa {

  std::vector<Word> words_of_length(std::size_t alphabet_size, std::size_t len) {
    std::vector<Word> out;
    if (len == 0) {
      out.emplace_back();
      return out;
    }
    if (alphabet_size == 0) {
      return out;
    }
    auto const k = static_cast<Symbol>(alphabet_size);
    Word       w(len, 0);
    bool       more = true;
    while (more) {
      out.push_back(w);
      more = false;
      for (std::size_t i = len; i-- > 0;) {
        if (++w[i] < k) {
          more = true;
          break;
        }
        w[i] = 0;
      }
    }
    return out;
  }

  std::vector<Word> all_words(std::size_t alphabet_size, std::size_t max_len) {
    std::vector<Word> out;
    for (std::size_t n = 0; n <= max_len; ++n) {
      auto level = words_of_length(alphabet_size, n);
      out.insert(out.end(), level.begin(), level.end());
    }
    return out;
  }

  Alphabet::Alphabet(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      auto const& t = tokens_[i];
      if (t.empty() || t == "-") {
        throw Error("invalid alphabet token \"" + t + "\"");
      }
      for (char c : t) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '#') {
          throw Error("invalid alphabet token \"" + t + "\"");
        }
      }
      if (!index_.emplace(t, static_cast<Symbol>(i)).second) {
        throw Error("duplicate alphabet token \"" + t + "\"");
      }
      max_token_len_ = std::max(max_token_len_, t.size());
      single_chars_  = single_chars_ && t.size() == 1;
    }
  }

  std::string const& Alphabet::token(Symbol s) const {
    if (s < 0 || static_cast<std::size_t>(s) >= tokens_.size()) {
      throw Error("symbol " + std::to_string(s) + " out of range");
    }
    return tokens_[static_cast<std::size_t>(s)];
  }

  std::optional<Symbol> Alphabet::find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  Symbol Alphabet::symbol(std::string_view token) const {
    auto s = find(token);
    if (!s) {
      throw AlphabetMismatch("unknown symbol \"" + std::string(token) + "\"");
    }
    return *s;
  }

  Word Alphabet::parse_word(std::string_view text) const {
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
      }
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
      }
      return s;
    };
    text = trim(text);
    Word w;
    if (text.empty() || text == "-" || text == "ε") {
      return w;
    }
    if (text.find_first_of(" \t") != std::string_view::npos) {
      std::size_t pos = 0;
      while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
          ++pos;
        }
        std::size_t end = pos;
        while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) {
          ++end;
        }
        if (end > pos) {
          w.push_back(symbol(text.substr(pos, end - pos)));
        }
        pos = end;
      }
      return w;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t len = std::min(max_token_len_, text.size() - pos);
      for (; len > 0; --len) {
        if (auto s = find(text.substr(pos, len))) {
          w.push_back(*s);
          break;
        }
      }
      if (len == 0) {
        throw AlphabetMismatch("cannot tokenize \"" + std::string(text) + "\" at offset "
                               + std::to_string(pos));
      }
      pos += len;
    }
    return w;
  }

  std::string Alphabet::format(std::span<Symbol const> w) const {
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!single_chars_ && i > 0) {
        out += ' ';
      }
      out += token(w[i]);
    }
    return out;
  }

  Alphabet Alphabet::extended(std::vector<std::string> const& extra) const {
    auto tokens = tokens_;
    tokens.insert(tokens.end(), extra.begin(), extra.end());
    return Alphabet(std::move(tokens));
  }

  Word translate(Word const& w, Alphabet const& from, Alphabet const& to) {
    Word out;
    out.reserve(w.size());
    for (Symbol s : w) {
      out.push_back(to.symbol(from.token(s)));
    }
    return out;
  }

}  // namespace qa
