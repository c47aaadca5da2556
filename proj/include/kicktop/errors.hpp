#pragma once

#include <stdexcept>
#include <string>

namespace kicktop {

// Exit-code taxonomy: ConfigError -> 1, EngineError -> 2, CompareFailure -> 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct EngineError : std::runtime_error {
  explicit EngineError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CompareFailure : std::runtime_error {
  explicit CompareFailure(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace kicktop
