#pragma once

#include <stdexcept>
#include <string>

namespace hetvol {

/// Malformed input file or configuration. Carries a location when one is known.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
    InputError(const std::string& file, std::size_t row, const std::string& column,
               const std::string& what)
        : std::runtime_error(file + ": row " + std::to_string(row) + ", column '" + column +
                             "': " + what) {}
};

/// A numerical fit could not be completed (rank deficiency, divergence, no converged start).
class FitError : public std::runtime_error {
public:
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hetvol
