#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace limbs {

/// Domain error with a stable machine-readable code ("OutsideWake",
/// "NoConvergence", ...) next to the human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

inline void check(bool ok, const char* code, const std::string& message) {
    if (!ok) fail(code, message);
}

} // namespace limbs
