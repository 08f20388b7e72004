// Exception types thrown by the solver core.
#pragma once

#include <stdexcept>
#include <string>

namespace paradin {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user input: grid bounds, counts, incompatible factors, config keys.
class InvalidArgument : public Error {
public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// A pivot fell below the admissible floor during factorization.
class SingularMatrix : public Error {
public:
  SingularMatrix(const std::string& msg, int row) : Error(msg), row_(row) {}
  int row() const noexcept { return row_; }

private:
  int row_;
};

// An iteration (Newton or Parareal) exceeded its cap without converging.
class IterationCap : public Error {
public:
  explicit IterationCap(const std::string& msg) : Error(msg) {}
};

// The Parareal iteration is growing instead of contracting.
class Divergence : public Error {
public:
  explicit Divergence(const std::string& msg) : Error(msg) {}
};

// A worker blocked on a receive that can never be satisfied (emulated mode).
class Deadlock : public Error {
public:
  explicit Deadlock(const std::string& msg) : Error(msg) {}
};

// I/O failure in the experiment harness.
class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

}  // namespace paradin
