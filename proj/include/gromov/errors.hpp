#pragma once

#include <stdexcept>
#include <string>

namespace gromov {

// Base class for everything this library throws on bad input or bad files.
// Internal-defect conditions (broken invariants that indicate a bug rather
// than bad input) throw InternalDefect instead.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ValidationError : Error {
  using Error::Error;
};

struct DuplicateNode : ValidationError {
  int node;
  explicit DuplicateNode(int node_)
      : ValidationError("node " + std::to_string(node_) +
                        " owns more than one pick or is missing"),
        node(node_) {}
};

struct PairContainsOwner : ValidationError {
  int node;
  explicit PairContainsOwner(int node_)
      : ValidationError("pick of node " + std::to_string(node_) +
                        " contains the node itself or repeats an element"),
        node(node_) {}
};

struct IndexOutOfRange : ValidationError {
  int node;
  explicit IndexOutOfRange(int node_)
      : ValidationError("node index " + std::to_string(node_) +
                        " is outside 1..n"),
        node(node_) {}
};

struct LengthMismatch : Error {
  LengthMismatch(int expected, int got)
      : Error("permutation length " + std::to_string(got) +
              " does not match point count " + std::to_string(expected)) {}
};

struct MalformedToken : Error {
  std::string token;
  explicit MalformedToken(const std::string& token_)
      : Error("malformed structure token \"" + token_ + "\""), token(token_) {}
};

struct WrongTokenCount : Error {
  int expected, got;
  WrongTokenCount(int expected_, int got_)
      : Error("expected " + std::to_string(expected_) + " tokens, got " +
              std::to_string(got_)),
        expected(expected_),
        got(got_) {}
};

struct NumberFormatError : Error {
  explicit NumberFormatError(const std::string& text)
      : Error("cannot parse \"" + text + "\" as an exact rational") {}
};

struct UnsupportedN : Error {
  int n;
  explicit UnsupportedN(int n_)
      : Error("point count " + std::to_string(n_) +
              " is outside the supported range"),
        n(n_) {}
};

struct SizeMismatch : Error {
  SizeMismatch(int a, int b)
      : Error("point counts differ: " + std::to_string(a) + " vs " +
              std::to_string(b)) {}
};

struct NotAllowable : Error {
  using Error::Error;
};

struct NotGeneric : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct SchemaVersionMismatch : Error {
  using Error::Error;
};

struct CorruptRecord : Error {
  using Error::Error;
};

struct LookupFailure : Error {
  using Error::Error;
};

struct NotFound : Error {
  using Error::Error;
};

// A broken internal invariant: solver postcondition failure, catalog
// inconsistency, and the like. Never caused by user input alone.
struct InternalDefect : Error {
  using Error::Error;
};

}  // namespace gromov
