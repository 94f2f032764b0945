#pragma once

#include <stdexcept>
#include <string>

namespace relgame {

/// Malformed input or a violated precondition of the call itself.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An analysis declined to run: a size cap was exceeded, or a structural
/// precondition (monotone, convex) does not hold for this game.
class Refusal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The LP solver could not reach a verdict (pivot budget exhausted).
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace relgame
