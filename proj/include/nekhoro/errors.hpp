#pragma once

#include <stdexcept>
#include <string>

namespace nekhoro {

// Enumeration budget exhausted (e.g. resonance scans with huge K).
class budget_exceeded : public std::runtime_error {
public:
    explicit budget_exceeded(const std::string& what) : std::runtime_error(what) {}
};

// The gradient of the integrable part vanished where it must not.
class degenerate_gradient_error : public std::runtime_error {
public:
    explicit degenerate_gradient_error(const std::string& what) : std::runtime_error(what) {}
};

// Regression input carries no usable signal.
class not_fittable_error : public std::runtime_error {
public:
    explicit not_fittable_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nekhoro
