#pragma once

#include <stdexcept>
#include <string>

namespace revsent {

// Every failure raised by the library derives from Error so callers can
// catch one type; the subclasses let the CLI map failures to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violated a documented precondition (out-of-range rating, bad spec).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A document could not be parsed at all (unterminated markup, broken CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

class DecodeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::string& path, const std::string& what)
        : Error(what + ": " + path), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Arguments outside a function's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    DimensionError(std::size_t expected, std::size_t actual)
        : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                std::to_string(actual)) {}
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// Model bundle failures. Each kind is its own type.
class ModelFormatError : public Error {
public:
    using Error::Error;
};

class VersionMismatchError : public ModelFormatError {
public:
    using ModelFormatError::ModelFormatError;
};

class FingerprintMismatchError : public ModelFormatError {
public:
    using ModelFormatError::ModelFormatError;
};

class CorruptModelError : public ModelFormatError {
public:
    using ModelFormatError::ModelFormatError;
};

/// Training stopped at its iteration cap and the run was configured to
/// treat that as fatal.
class NonConvergenceError : public Error {
public:
    using Error::Error;
};

/// Wraps an error raised inside one pipeline stage, keeping the stage name.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string& what, int exit_code)
        : Error("stage '" + stage + "': " + what), stage_(std::move(stage)), exit_code_(exit_code) {}

    const std::string& stage() const noexcept { return stage_; }
    int exit_code() const noexcept { return exit_code_; }

private:
    std::string stage_;
    int exit_code_;
};

}  // namespace revsent
