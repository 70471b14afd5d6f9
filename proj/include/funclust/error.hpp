#pragma once

#include <stdexcept>
#include <string>

namespace funclust {

/// Domain error raised by every module. `code()` is a stable identifier
/// (e.g. "TriangleViolation") that the command-line tool prints verbatim.
class Error : public std::runtime_error {
  public:
    Error(std::string code, const std::string& detail)
      : std::runtime_error(code + ": " + detail)
      , code_{std::move(code)} {}

    const std::string& code() const noexcept { return code_; }

  private:
    std::string code_;
};

}  // namespace funclust
