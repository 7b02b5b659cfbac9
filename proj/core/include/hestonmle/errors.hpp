#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hestonmle {

// Parameter or argument outside its admissible domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A variance (or price) observation that must be strictly positive is not.
class NonPositiveValue : public DomainError {
public:
    NonPositiveValue(const std::string& what, std::size_t index)
        : DomainError(what + " at index " + std::to_string(index)), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

// Malformed input file; line numbers are 1-based and count the header.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// File could not be opened or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hestonmle
