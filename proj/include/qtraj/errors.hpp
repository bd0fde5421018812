// Error taxonomy: configuration problems (CLI exit code 2) vs numerical
// failures during integration (CLI exit code 3).
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qtraj {

struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct NumericalError : std::runtime_error {
    NumericalError(const std::string& what, std::size_t step_index)
        : std::runtime_error(what + " (step " + std::to_string(step_index) + ")"),
          detail(what),
          step(step_index) {}
    std::string detail;  ///< message without the step suffix, for re-tagging
    std::size_t step;
};

}  // namespace qtraj
