#pragma once

#include "qa/oracle.hpp"
#include "qa/structure.hpp"

namespace qa {

  // Structure of a finite oracle from its shortlex-least words: L lists one
  // word per element, R is the diagonal of L and R_a the finite graph of
  // right multiplication by a. Semigroup mode; the neutral representative
  // is set when the identity is generated by the letters.
  QaStructure autogen_structure(SemigroupOracle const& oracle, std::size_t max_elements = 100'000);

}  // namespace qa
