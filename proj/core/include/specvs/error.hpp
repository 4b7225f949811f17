#pragma once

#include <stdexcept>
#include <string>

namespace specvs {

/// Base class for all library errors. The `code()` string is stable and
/// machine-parsable (kebab-case), the what() message is human-readable.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("io-error", msg) {}
};

class ParseError : public Error {
public:
    ParseError(const std::string& file, long line, const std::string& msg)
        : Error("parse-error", file + ":" + std::to_string(line) + ": " + msg) {}
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error("format-error", msg) {}
};

class InvalidArgument : public Error {
public:
    InvalidArgument(const std::string& code, const std::string& msg) : Error(code, msg) {}
};

class NumericalError : public Error {
public:
    NumericalError(const std::string& code, const std::string& msg) : Error(code, msg) {}
};

}  // namespace specvs
