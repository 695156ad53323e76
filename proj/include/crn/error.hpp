#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace crn {

// Half-open byte range [begin, end) with 1-based line/column of `begin`.
struct SourceSpan {
  std::size_t line = 0;
  std::size_t column = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
};

// All recoverable failures carry a stable machine-readable code alongside
// the human-readable message.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message,
        std::optional<SourceSpan> span = std::nullopt)
      : std::runtime_error(message), code_(std::move(code)), span_(span) {}

  const std::string& code() const { return code_; }
  const std::optional<SourceSpan>& span() const { return span_; }

 private:
  std::string code_;
  std::optional<SourceSpan> span_;
};

}  // namespace crn
