#pragma once

#include <stdexcept>
#include <string>

namespace quench {

// Malformed input document or stream (bad JSON, bad field types, bad IPv4...).
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally well-formed but semantically invalid graph: cycle, non-bipartite
// edge, dangling endpoint, duplicate id. `subject` names the offending vertex/edge.
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& msg, std::string subject)
        : std::runtime_error(msg), subject_(std::move(subject)) {}
    const std::string& subject() const noexcept { return subject_; }

private:
    std::string subject_;
};

class UnknownVertexError : public std::runtime_error {
public:
    explicit UnknownVertexError(const std::string& vertex_id)
        : std::runtime_error("unknown vertex: " + vertex_id), vertex_(vertex_id) {}
    const std::string& vertex() const noexcept { return vertex_; }

private:
    std::string vertex_;
};

// Alert timestamp older than the stream maximum beyond the configured tolerance.
class TimeRegressionError : public std::runtime_error {
public:
    explicit TimeRegressionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Bucket clock moved backwards beyond tolerance.
class ClockRegressionError : public std::runtime_error {
public:
    explicit ClockRegressionError(const std::string& msg) : std::runtime_error(msg) {}
};

class CapExceededError : public std::runtime_error {
public:
    explicit CapExceededError(const std::string& msg) : std::runtime_error(msg) {}
};

class UnsortedInputError : public std::runtime_error {
public:
    explicit UnsortedInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem / stream failure; the CLI maps this to a distinct exit code.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace quench
