#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnplan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter outside the documented domain of an operation.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

// Connectivity ratio requested for a population with zero total weight.
class UndefinedRatio : public Error {
 public:
  using Error::Error;
};

// An AP with no path to any backhaul node.
class CorruptGraph : public Error {
 public:
  using Error::Error;
};

class NonTermination : public Error {
 public:
  NonTermination(const std::string& what, std::vector<std::size_t> uninfected)
      : Error(what), uninfected_(std::move(uninfected)) {}

  // Vertex ids still uninfected when the step cap was hit.
  const std::vector<std::size_t>& uninfected() const noexcept { return uninfected_; }

 private:
  std::vector<std::size_t> uninfected_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0) : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what)
      : Error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace rnplan
