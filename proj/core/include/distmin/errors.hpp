#pragma once

#include <stdexcept>
#include <string>

namespace distmin {

// Base class for all library failures. Each error carries a short
// machine-readable kind string; the CLI maps kinds to exit codes and
// emits them as single-line JSON diagnostics.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class InvalidGeometryError : public Error {
public:
    explicit InvalidGeometryError(const std::string& what) : Error("invalid-geometry", what) {}
};

class InvalidMapError : public Error {
public:
    explicit InvalidMapError(const std::string& what) : Error("invalid-map", what) {}
};

class DomainMismatchError : public Error {
public:
    explicit DomainMismatchError(const std::string& what) : Error("domain-mismatch", what) {}
};

class InvalidParameterError : public Error {
public:
    explicit InvalidParameterError(const std::string& what) : Error("invalid-parameter", what) {}
};

class InsufficientResolutionError : public Error {
public:
    explicit InsufficientResolutionError(const std::string& what)
        : Error("insufficient-resolution", what) {}
};

class HypothesisViolationError : public Error {
public:
    explicit HypothesisViolationError(const std::string& what)
        : Error("hypothesis-violation", what) {}
};

class InvalidScheduleError : public Error {
public:
    explicit InvalidScheduleError(const std::string& what) : Error("invalid-schedule", what) {}
};

class FlowFoldError : public Error {
public:
    explicit FlowFoldError(const std::string& what) : Error("flow-fold", what) {}
};

class MorphFoldError : public Error {
public:
    explicit MorphFoldError(const std::string& what) : Error("morph-fold", what) {}
};

class NonMonotoneVolumeError : public Error {
public:
    explicit NonMonotoneVolumeError(const std::string& what)
        : Error("non-monotone-volume", what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace distmin
