#pragma once

#include <stdexcept>
#include <string>

namespace abelcs {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (CLI exit 2).
class InputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public InputError {
 public:
  using InputError::InputError;
};

class MalformedDiagramError : public InputError {
 public:
  using InputError::InputError;
};

// Well-formed input violating a mathematical precondition (CLI exit 3).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class UnsupportedCaseError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class EvennessError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class WuClassError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class NotBlowdownableError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class TermLimitError : public PreconditionError {
 public:
  TermLimitError(const std::string& what, std::string count)
      : PreconditionError(what), term_count_(std::move(count)) {}
  const std::string& term_count() const { return term_count_; }

 private:
  std::string term_count_;
};

}  // namespace abelcs
