#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sinkeq {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A game, machine or reduction could not be constructed because an
/// invariant of its definition does not hold.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input document is malformed. `path` points into the document
/// (e.g. "/players/2/strategies/0").
class ParseError : public Error {
public:
    ParseError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class CapExceeded : public Error {
public:
    CapExceeded(std::uint64_t cap, const std::string& what)
        : Error(what + " (cap " + std::to_string(cap) + ")"), cap_(cap) {}
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t cap_;
};

class UnsupportedOperation : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

}  // namespace sinkeq
