#pragma once

#include <stdexcept>
#include <string>

namespace pter {

// Error taxonomy mirrors the CLI exit codes: input/format problems (1),
// configuration problems (2), violated internal invariants (3).
enum class ErrorKind {
    Input = 1,
    Config = 2,
    Internal = 3,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }
    int exit_code() const { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

inline Error input_error(const std::string& message) {
    return Error(ErrorKind::Input, message);
}

inline Error config_error(const std::string& message) {
    return Error(ErrorKind::Config, message);
}

inline Error internal_error(const std::string& message) {
    return Error(ErrorKind::Internal, message);
}

}  // namespace pter
