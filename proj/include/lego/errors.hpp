#pragma once
// Error taxonomy shared by all modules. Per-query stage failures are caught
// by the pipeline and recorded; everything else propagates to the caller.

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lego {

// Malformed input data. line == 0 when the position is unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, std::size_t line = 0)
        : std::runtime_error(line > 0 ? message + " (line " + std::to_string(line) + ")"
                                      : message),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Invalid or inconsistent configuration (strict schema, bad values).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition violation: a caller handed us arguments outside the contract.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Scoring backend failure (transport after retries, protocol violations).
class ScorerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A pipeline stage failed for one query; the run continues.
class StageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// LLM generation endpoint failure.
class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A metric was requested over an empty evaluation set.
class UndefinedMetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace lego
