#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qa {

  // Base of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Malformed automaton, transducer, table or manifest text.
  class ParseError : public Error {
   public:
    ParseError(std::string const& what, std::size_t line)
        : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept {
      return line_;
    }

   private:
    std::size_t line_;
  };

  class AlphabetMismatch : public Error {
   public:
    using Error::Error;
  };

  // A configurable cap (states, ball size, steps) was exceeded.
  class ResourceLimit : public Error {
   public:
    using Error::Error;
  };

  // An operation was called outside its documented precondition.
  class PreconditionError : public Error {
   public:
    using Error::Error;
  };

  // A quasi-automatic structure turned out to be inconsistent while being
  // used (e.g. a uniformizer has no output for a representative).
  class InvalidStructure : public Error {
   public:
    using Error::Error;
  };

}  // namespace qa
