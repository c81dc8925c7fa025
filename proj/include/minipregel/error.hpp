#ifndef MINIPREGEL_ERROR_HPP
#define MINIPREGEL_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace minipregel {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Graph construction or access failure (bad edge, out-of-range vertex).
class GraphError : public Error {
public:
    using Error::Error;
};

/// Invalid engine or partition configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A superstep run aborted (program exception, message to a nonexistent
/// vertex, unknown aggregator, bad mutation).
class EngineError : public Error {
public:
    using Error::Error;
};

/// Checkpoint blob could not be decoded (bad magic, truncation, version).
class CheckpointError : public Error {
public:
    using Error::Error;
};

/// Text input failed to parse; carries the 1-based offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace minipregel

#endif
