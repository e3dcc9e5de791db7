#pragma once

#include <stdexcept>
#include <string>

namespace lpflab {

// Requested work exceeds a configured memory/runtime budget.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation outside the extent of a precomputed table; caller may rebuild
// the table with a larger extent and retry.
class extent_error : public std::runtime_error {
public:
    explicit extent_error(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature could not reach the requested tolerance. Carries the best
// estimate so callers can decide whether to accept it.
class accuracy_error : public std::runtime_error {
public:
    accuracy_error(const std::string& what, double best)
        : std::runtime_error(what), best_estimate(best) {}
    double best_estimate;
};

} // namespace lpflab
