#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wnsearch {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file or directory could not be opened.
class LoadError : public Error {
public:
    using Error::Error;
};

/// Malformed record. Carries the source name and the byte offset (or line
/// number, for line-oriented formats) where parsing stopped.
class ParseError : public Error {
public:
    ParseError(std::string source, std::uint64_t location, const std::string& what)
        : Error(source + ":" + std::to_string(location) + ": " + what),
          source_(std::move(source)), location_(location) {}

    const std::string& source() const noexcept { return source_; }
    std::uint64_t location() const noexcept { return location_; }

private:
    std::string source_;
    std::uint64_t location_;
};

/// Structurally valid input that violates a graph invariant (cycles,
/// dangling pointers).
class IntegrityError : public Error {
public:
    using Error::Error;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class BuildError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Failures reading a persisted index image.
class IndexFormatError : public Error {
public:
    using Error::Error;
};

class VersionMismatchError : public IndexFormatError {
public:
    using IndexFormatError::IndexFormatError;
};

class ChecksumError : public IndexFormatError {
public:
    using IndexFormatError::IndexFormatError;
};

class TruncatedFileError : public IndexFormatError {
public:
    using IndexFormatError::IndexFormatError;
};

}  // namespace wnsearch
