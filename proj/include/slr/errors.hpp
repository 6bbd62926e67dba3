#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace slr {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class InvalidConfig : public Error {
public:
    explicit InvalidConfig(const std::string& what) : Error(what) {}
};

// Thrown when an iterative solver produces a NaN/Inf iterate. Carries the
// residual history collected up to the point of failure.
class NonFiniteIterate : public Error {
public:
    NonFiniteIterate(const std::string& what, std::vector<double> history)
        : Error(what), residual_history(std::move(history)) {}

    std::vector<double> residual_history;
};

// Data ingestion errors.
class MissingFrames : public Error {
public:
    explicit MissingFrames(const std::string& what) : Error(what) {}
};

class BadImageFormat : public Error {
public:
    explicit BadImageFormat(const std::string& what) : Error(what) {}
};

class InconsistentDimensions : public Error {
public:
    explicit InconsistentDimensions(const std::string& what) : Error(what) {}
};

class TooFewFrames : public Error {
public:
    explicit TooFewFrames(const std::string& what) : Error(what) {}
};

class ZeroAtom : public Error {
public:
    explicit ZeroAtom(const std::string& what) : Error(what) {}
};

class InsufficientData : public Error {
public:
    explicit InsufficientData(const std::string& what) : Error(what) {}
};

}  // namespace slr
