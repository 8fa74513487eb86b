#pragma once

#include <exception>
#include <string>
#include <utility>

namespace latentgp {

// Base class for all toolkit failures. `category()` is a stable
// machine-readable tag; the CLI maps it to an exit code. Messages are
// human-readable and may be extended with context while the exception
// propagates (see add_context), which is why what() is backed by our
// own buffer instead of std::runtime_error's.
class Error : public std::exception {
public:
    Error(std::string category, std::string message)
        : category_(std::move(category)), message_(std::move(message)) {
        rebuild();
    }

    const char* what() const noexcept override { return full_.c_str(); }
    const std::string& category() const noexcept { return category_; }
    const std::string& message() const noexcept { return message_; }

    // Prefixes "<ctx>: " to the message. Used when rethrowing from a
    // pipeline stage so the origin stays visible.
    void add_context(const std::string& ctx) {
        message_ = ctx + ": " + message_;
        rebuild();
    }

private:
    void rebuild() { full_ = category_ + ": " + message_; }

    std::string category_;
    std::string message_;
    std::string full_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(std::string msg) : Error("ConfigError", std::move(msg)) {}
};

class ShapeError : public Error {
public:
    explicit ShapeError(std::string msg) : Error("ShapeError", std::move(msg)) {}
};

// --- mechanics ---

class IncompressibleMaterialError : public Error {
public:
    explicit IncompressibleMaterialError(std::string msg)
        : Error("IncompressibleMaterial", std::move(msg)) {}
};

// Raised when an element's deformation gradient loses positive
// determinant during assembly. The solver treats it like a failed
// Newton iteration and cuts the load step.
class InvertedElementError : public Error {
public:
    InvertedElementError(std::string msg, long element_index)
        : Error("InvertedElement", std::move(msg)), element_index_(element_index) {}
    long element_index() const noexcept { return element_index_; }

private:
    long element_index_;
};

class NonConvergenceError : public Error {
public:
    NonConvergenceError(std::string msg, double last_load_factor)
        : Error("NonConvergence", std::move(msg)), last_load_factor_(last_load_factor) {}
    double last_load_factor() const noexcept { return last_load_factor_; }

private:
    double last_load_factor_;
};

class TooManyFailuresError : public Error {
public:
    explicit TooManyFailuresError(std::string msg)
        : Error("TooManyFailures", std::move(msg)) {}
};

// --- training / fitting ---

class TrainingDivergenceError : public Error {
public:
    explicit TrainingDivergenceError(std::string msg)
        : Error("Divergence", std::move(msg)) {}
};

class OptimizationFailureError : public Error {
public:
    explicit OptimizationFailureError(std::string msg)
        : Error("OptimizationFailure", std::move(msg)) {}
};

// --- storage ---

class ChecksumMismatchError : public Error {
public:
    explicit ChecksumMismatchError(std::string msg)
        : Error("ChecksumMismatch", std::move(msg)) {}
};

class VersionMismatchError : public Error {
public:
    explicit VersionMismatchError(std::string msg)
        : Error("VersionMismatch", std::move(msg)) {}
};

class TruncatedBlobError : public Error {
public:
    explicit TruncatedBlobError(std::string msg)
        : Error("TruncatedBlob", std::move(msg)) {}
};

class DataError : public Error {
public:
    explicit DataError(std::string msg) : Error("DataError", std::move(msg)) {}
};

}  // namespace latentgp
