#pragma once

#include <stdexcept>
#include <string>

namespace treels {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotATree : Error {
    explicit NotATree(const std::string& msg) : Error(msg) {}
};

struct BadVertex : Error {
    explicit BadVertex(const std::string& msg) : Error(msg) {}
};

struct SizeLimit : Error {
    explicit SizeLimit(const std::string& msg) : Error(msg) {}
};

struct Infeasible : Error {
    explicit Infeasible(const std::string& msg) : Error(msg) {}
};

struct InfeasibleStart : Error {
    explicit InfeasibleStart(const std::string& msg) : Error(msg) {}
};

struct InfeasibleInstance : Error {
    explicit InfeasibleInstance(const std::string& msg) : Error(msg) {}
};

struct Timeout : Error {
    explicit Timeout(const std::string& msg) : Error(msg) {}
};

struct Disconnected : Error {
    explicit Disconnected(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
    ParseError(int line, const std::string& msg)
        : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
    int line;
};

struct NonPositiveWeight : Error {
    explicit NonPositiveWeight(const std::string& msg) : Error(msg) {}
};

struct SelfLoopLink : Error {
    explicit SelfLoopLink(const std::string& msg) : Error(msg) {}
};

struct MissingSection : Error {
    explicit MissingSection(const std::string& msg) : Error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace treels
