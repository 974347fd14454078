#pragma once

// Deterministic selection of one related output per input word.

#include <cstddef>
#include <span>
#include <string>

#include "qa/relation.hpp"
#include "qa/word.hpp"

namespace qa {

  class Uniformizer {
   public:
    Uniformizer() = default;
    explicit Uniformizer(Transducer const& t);

    // Normalized, trimmed copy of the transducer given at construction.
    Transducer const& source() const noexcept {
      return source_;
    }

    // |select(u)| <= growth_constant() * (|u| + 1).
    std::size_t growth_constant() const noexcept {
      return growth_;
    }

    static constexpr char const* policy() noexcept {
      return "shortlex-least-output";
    }

    // Shortlex-least v with (u, v) in the relation. Throws
    // PreconditionError when u is not in the domain.
    Word select(std::span<Symbol const> u) const;

   private:
    Transducer  source_;
    std::size_t growth_ = 1;
  };

  Uniformizer uniformize(Transducer const& t);

}  // namespace qa
