#pragma once

#include <stdexcept>
#include <string>

namespace multihess {

// Bad user input: generator, C matrix, indices, ranges.
class InvalidInput : public std::invalid_argument {
public:
    explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

// Something went wrong numerically; carries a context string for diagnostics.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& kind, const std::string& what, std::string context = {})
        : std::runtime_error(what), kind_(kind), context_(std::move(context)) {}
    const std::string& kind() const { return kind_; }
    const std::string& context() const { return context_; }

private:
    std::string kind_;
    std::string context_;
};

}  // namespace multihess
