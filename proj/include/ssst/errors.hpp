#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssst {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse failure; offset is the byte position in the source text.
struct SyntaxError : Error {
    std::size_t offset;
    SyntaxError(const std::string& msg, std::size_t off)
        : Error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct UnknownSymbol : Error {
    std::string name;
    UnknownSymbol(const std::string& sym, std::size_t off)
        : Error("unknown symbol '" + sym + "' (at byte " + std::to_string(off) + ")"),
          name(sym) {}
};

// Evaluation outside the mathematical domain (log/sqrt of nonpositive
// argument, division by zero, fractional power of a nonpositive base).
struct DomainError : Error {
    using Error::Error;
};

// Metric fails its signature contract at a sample point.
struct MetricError : Error {
    using Error::Error;
};

struct UnknownField : Error {
    UnknownField(const std::string& name)
        : Error("no scalar field named '" + name + "' on this chart") {}
};

struct WrongKind : Error {
    using Error::Error;
};

// Adaptive integrator could not meet the requested tolerance.
struct StepFailure : Error {
    using Error::Error;
};

struct UnknownEntry : Error {
    UnknownEntry(const std::string& name) : Error("no catalog entry named '" + name + "'") {}
};

struct BadParam : Error {
    using Error::Error;
};

struct SpecError : Error {
    using Error::Error;
};

}  // namespace ssst
