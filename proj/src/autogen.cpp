#include "qa/autogen.hpp"

#include <deque>
#include <unordered_map>

#include "qa/errors.hpp"

namespace qa {

  QaStructure autogen_structure(SemigroupOracle const& oracle, std::size_t max_elements) {
    auto const size = oracle.size();
    if (!size) {
      throw PreconditionError("autogen needs a finite oracle");
    }
    auto const& a = oracle.alphabet();
    auto const  k = static_cast<Symbol>(a.size());

    // BFS in shortlex order: the first word to reach an element is its
    // shortlex-least word, since prefixes of least words are least.
    std::unordered_map<Element, std::size_t, ElementHash> index;
    std::vector<Element>                                  elements;
    std::vector<Word>                                     reps;
    std::deque<std::size_t>                               queue;
    auto visit = [&](Element const& e, Word w) {
      if (index.count(e) != 0) {
        return;
      }
      if (elements.size() >= max_elements) {
        throw ResourceLimit("autogen: more than " + std::to_string(max_elements) + " elements");
      }
      index.emplace(e, elements.size());
      queue.push_back(elements.size());
      elements.push_back(e);
      reps.push_back(std::move(w));
    };
    for (Symbol x = 0; x < k; ++x) {
      visit(oracle.generator(x), Word{x});
    }
    while (!queue.empty()) {
      auto const i = queue.front();
      queue.pop_front();
      for (Symbol x = 0; x < k; ++x) {
        visit(oracle.multiply(elements[i], oracle.generator(x)), concat(reps[i], Word{x}));
      }
    }
    if (elements.size() != *size) {
      throw PreconditionError("autogen: the letters generate " + std::to_string(elements.size())
                              + " elements, the oracle reports " + std::to_string(*size));
    }

    std::vector<Transducer> right_mult;
    for (Symbol x = 0; x < k; ++x) {
      std::vector<WordPair> pairs;
      auto const            g = oracle.generator(x);
      for (std::size_t i = 0; i < elements.size(); ++i) {
        pairs.emplace_back(reps[i], reps[index.at(oracle.multiply(elements[i], g))]);
      }
      right_mult.push_back(from_pairs(a, a, pairs));
    }
    std::vector<Word> letter_reps;
    for (Symbol x = 0; x < k; ++x) {
      letter_reps.push_back(reps[index.at(oracle.generator(x))]);
    }
    std::optional<Word> neutral;
    if (auto it = index.find(oracle.identity()); it != index.end()) {
      neutral = reps[it->second];
    }
    auto lang = finite_language(a, reps);
    return QaStructure(a, Mode::semigroup, lang, diagonal(lang), std::move(right_mult),
                       std::move(letter_reps), std::move(neutral));
  }

}  // namespace qa
