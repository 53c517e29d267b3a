#include "rst/errors.hpp"

namespace rst {

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), kind_(kind), line_(line) {}

}  // namespace rst
