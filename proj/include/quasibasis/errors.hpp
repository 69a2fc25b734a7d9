#pragma once

#include <stdexcept>
#include <string>

namespace quasibasis {

// Base of every error raised by the library. The CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed user input (bad region, bad scenario, bad parameters).
class InvalidInput : public Error {
public:
    using Error::Error;
};

class BoundaryHit : public Error {
public:
    using Error::Error;
};

class SingularLattice : public Error {
public:
    using Error::Error;
};

class TranslationFailed : public Error {
public:
    using Error::Error;
};

class IndependenceHeuristicFailed : public Error {
public:
    using Error::Error;
};

class WindowTooSmall : public Error {
public:
    using Error::Error;
};

class BlockCardinalityViolation : public Error {
public:
    BlockCardinalityViolation(long long block, std::size_t found, int expected)
        : Error("block " + std::to_string(block) + " has " + std::to_string(found) +
                " elements, expected " + std::to_string(expected)),
          block_(block), found_(found) {}

    long long block() const noexcept { return block_; }
    std::size_t found() const noexcept { return found_; }

private:
    long long block_;
    std::size_t found_;
};

class EnumerationTooShort : public Error {
public:
    using Error::Error;
};

class QuadratureNotConverged : public Error {
public:
    using Error::Error;
};

class DuplicateFrequency : public Error {
public:
    using Error::Error;
};

class EigensolverNotConverged : public Error {
public:
    using Error::Error;
};

}  // namespace quasibasis
