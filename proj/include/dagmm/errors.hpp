#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dagmm {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0)
      : Error(row ? what + " (row " + std::to_string(row) + ")" : what), row_(row) {}
  /// 1-based data row, 0 when the error is not tied to a row.
  std::size_t row() const noexcept { return row_; }

 private:
  std::size_t row_;
};

class DuplicateNode : public Error {
 public:
  explicit DuplicateNode(const std::string& id) : Error("duplicate node id: " + id) {}
};

class SelfLoopError : public Error {
 public:
  explicit SelfLoopError(const std::string& id) : Error("self-loop on node: " + id) {}
};

class UnknownNode : public Error {
 public:
  explicit UnknownNode(const std::string& id) : Error("unknown node id: " + id) {}
};

class CycleFound : public Error {
 public:
  explicit CycleFound(std::vector<std::string> witness);
  /// Closed walk: first and last entries are the same node.
  const std::vector<std::string>& witness() const noexcept { return witness_; }

 private:
  std::vector<std::string> witness_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class TooFewNodes : public Error {
 public:
  using Error::Error;
};

class DegenerateWeights : public Error {
 public:
  using Error::Error;
};

class EmptyChain : public Error {
 public:
  EmptyChain() : Error("chain has no retained samples") {}
};

class UnknownSeries : public Error {
 public:
  explicit UnknownSeries(const std::string& name) : Error("unknown series: " + name) {}
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dagmm
