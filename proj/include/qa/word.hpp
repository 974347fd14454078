#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace qa {

  // Letters are dense indices into an Alphabet. kEpsilon marks the empty
  // label on automaton and transducer transitions.
  using Symbol = std::int32_t;
  inline constexpr Symbol kEpsilon = -1;

  using Word = std::vector<Symbol>;

  // Shortlex (length first, then lexicographic by symbol index).
  inline bool shortlex_less(std::span<Symbol const> x, std::span<Symbol const> y) {
    if (x.size() != y.size()) {
      return x.size() < y.size();
    }
    return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
  }

  struct ShortlexLess {
    bool operator()(Word const& x, Word const& y) const {
      return shortlex_less(x, y);
    }
  };

  using WordPair = std::pair<Word, Word>;

  // Shortlex on the first component, then on the second.
  struct PairShortlexLess {
    bool operator()(WordPair const& x, WordPair const& y) const {
      if (x.first != y.first) {
        return shortlex_less(x.first, y.first);
      }
      return shortlex_less(x.second, y.second);
    }
  };

  struct WordHash {
    std::size_t operator()(Word const& w) const noexcept {
      std::size_t h = 0xcbf29ce484222325ULL;
      for (Symbol s : w) {
        h ^= static_cast<std::size_t>(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      }
      return h;
    }
  };

  struct WordPairHash {
    std::size_t operator()(WordPair const& p) const noexcept {
      WordHash h;
      return h(p.first) * 31 + h(p.second);
    }
  };

  inline Word concat(Word x, std::span<Symbol const> y) {
    x.insert(x.end(), y.begin(), y.end());
    return x;
  }

  // All words of length <= max_len in shortlex order.
  std::vector<Word> all_words(std::size_t alphabet_size, std::size_t max_len);

  // All words of length exactly len in lexicographic order.
  std::vector<Word> words_of_length(std::size_t alphabet_size, std::size_t len);

  // A finite, ordered set of distinct tokens. The manifest order is the
  // total order used for every lexicographic tie-break.
  class Alphabet {
   public:
    Alphabet() = default;
    explicit Alphabet(std::vector<std::string> tokens);
    Alphabet(std::initializer_list<std::string> tokens)
        : Alphabet(std::vector<std::string>(tokens)) {}

    std::size_t size() const noexcept {
      return tokens_.size();
    }

    bool empty() const noexcept {
      return tokens_.empty();
    }

    std::string const& token(Symbol s) const;

    std::vector<std::string> const& tokens() const noexcept {
      return tokens_;
    }

    std::optional<Symbol> find(std::string_view token) const;

    // Throws AlphabetMismatch if absent.
    Symbol symbol(std::string_view token) const;

    bool contains(std::string_view token) const {
      return find(token).has_value();
    }

    // Parses a word. Whitespace separated tokens are taken literally;
    // otherwise the string is split greedily by longest matching token.
    // "", "-" and "ε" denote the empty word.
    Word parse_word(std::string_view text) const;

    // Tokens are concatenated when every token is a single character,
    // otherwise separated by spaces. The empty word prints as "".
    std::string format(std::span<Symbol const> w) const;

    // A copy with `extra` appended (throws on collision).
    Alphabet extended(std::vector<std::string> const& extra) const;

    friend bool operator==(Alphabet const& x, Alphabet const& y) {
      return x.tokens_ == y.tokens_;
    }

   private:
    std::vector<std::string>                     tokens_;
    std::unordered_map<std::string, Symbol>      index_;
    std::size_t                                  max_token_len_ = 0;
    bool                                         single_chars_  = true;
  };

  // Maps a word over `from` to the same tokens over `to`.
  Word translate(Word const& w, Alphabet const& from, Alphabet const& to);

}  // namespace qa
