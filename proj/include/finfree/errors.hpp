#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace finfree {

// Argument outside the mathematical domain of an operation (n <= -1, l > d, alpha = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class DegreeMismatch : public std::invalid_argument {
public:
    DegreeMismatch(int dp, int dq)
        : std::invalid_argument("degree mismatch: " + std::to_string(dp) + " vs " + std::to_string(dq)) {}
};

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonConvergence : public std::runtime_error {
public:
    NonConvergence(std::size_t index, unsigned precision_bits)
        : std::runtime_error("root iteration did not converge (root " + std::to_string(index) + ", " +
                             std::to_string(precision_bits) + " bits)"),
          index_(index) {}
    std::size_t index() const { return index_; }

private:
    std::size_t index_;
};

class ComplexRoots : public std::runtime_error {
public:
    explicit ComplexRoots(std::size_t count)
        : std::runtime_error(std::to_string(count) + " root(s) off the real axis"), count_(count) {}
    std::size_t count() const { return count_; }

private:
    std::size_t count_;
};

class UnsupportedCdf : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BracketFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PoleProximity : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace finfree
