#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rst {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller supplied an argument outside the operation's domain.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Graph (or positive-weight subgraph) is not connected where it must be.
class DisconnectedGraph : public Error {
public:
    using Error::Error;
};

/// Iterative Laplacian solve failed to reach its residual target.
class SolverError : public Error {
public:
    using Error::Error;
};

/// A brute-force construction would exceed its size guard.
class GuardExceeded : public Error {
public:
    using Error::Error;
};

/// Randomized routine ran out of retries.
class RetryBudgetExhausted : public Error {
public:
    using Error::Error;
};

/// Planted matrix could not be read back from a tree.
class RecoveryError : public Error {
public:
    using Error::Error;
};

enum class ParseErrorKind {
    Malformed,
    SelfLoop,
    NegativeWeight,
    VertexOutOfRange,
    DuplicateEdge,
    EdgeCountMismatch,
};

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, const std::string& what);

    ParseErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }

private:
    ParseErrorKind kind_;
    std::size_t line_;
};

}  // namespace rst
