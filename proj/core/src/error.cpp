#include "varprod/error.hpp"

namespace varprod {

ParseError::ParseError(const std::string& what, std::size_t line)
    : ValidationError(line == 0 ? what : "line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace varprod
