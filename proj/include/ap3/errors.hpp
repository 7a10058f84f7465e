#pragma once

#include <stdexcept>
#include <string>

namespace ap3 {

// Raised when a pipeline stage cannot produce its contract output (as opposed
// to bad user input, which surfaces as std::invalid_argument).
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& message)
        : std::runtime_error(stage + ": " + message), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace ap3
