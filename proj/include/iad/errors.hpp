#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace iad {

/// Base class for every error raised by the library. I/O failures derive
/// from IoError; everything else is a validation/usage error.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// --- group validation ---

class EmptySeriesError : public Error {
public:
    explicit EmptySeriesError(std::string vm_id)
        : Error("empty series: vm '" + vm_id + "' has zero-length timeseries"),
          vm_id_(std::move(vm_id)) {}
    const std::string& vm_id() const noexcept { return vm_id_; }

private:
    std::string vm_id_;
};

class LengthMismatchError : public Error {
public:
    LengthMismatchError(std::size_t expected, std::string vm_id, std::size_t actual)
        : Error("length mismatch: vm '" + vm_id + "' has " + std::to_string(actual) +
                " ticks, expected " + std::to_string(expected)),
          expected_(expected), actual_(actual), vm_id_(std::move(vm_id)) {}
    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }
    const std::string& vm_id() const noexcept { return vm_id_; }

private:
    std::size_t expected_;
    std::size_t actual_;
    std::string vm_id_;
};

// --- streaming / detection ---

class InvalidSampleError : public Error {
public:
    using Error::Error;
};

class InsufficientHistoryError : public Error {
public:
    using Error::Error;
};

class InvalidWindowError : public Error {
public:
    using Error::Error;
};

class InvalidConfigError : public Error {
public:
    using Error::Error;
};

class ArityMismatchError : public Error {
public:
    ArityMismatchError(std::size_t expected, std::size_t actual)
        : Error("arity mismatch: got " + std::to_string(actual) +
                " values for " + std::to_string(expected) + " VMs"),
          expected_(expected), actual_(actual) {}
    std::size_t expected() const noexcept { return expected_; }
    std::size_t actual() const noexcept { return actual_; }

private:
    std::size_t expected_;
    std::size_t actual_;
};

// --- data generation ---

class InvalidSpecError : public Error {
public:
    InvalidSpecError(std::string field, const std::string& message)
        : Error("invalid spec: " + field + ": " + message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IntervalOutOfRangeError : public Error {
public:
    using Error::Error;
};

class PoolTooSmallError : public Error {
public:
    using Error::Error;
};

// --- CSV ingestion ---

class MissingHeaderError : public Error {
public:
    using Error::Error;
};

class MalformedRowError : public Error {
public:
    MalformedRowError(std::size_t line_number, const std::string& message)
        : Error("line " + std::to_string(line_number) + ": " + message),
          line_number_(line_number) {}
    std::size_t line_number() const noexcept { return line_number_; }

private:
    std::size_t line_number_;
};

class NonRectangularError : public Error {
public:
    NonRectangularError(std::string vm_id, const std::string& message)
        : Error("non-rectangular data: vm '" + vm_id + "': " + message),
          vm_id_(std::move(vm_id)) {}
    const std::string& vm_id() const noexcept { return vm_id_; }

private:
    std::string vm_id_;
};

// --- evaluation ---

class MissingPredictionError : public Error {
public:
    explicit MissingPredictionError(std::string vmm_id)
        : Error("missing prediction for vmm '" + vmm_id + "'"), vmm_id_(std::move(vmm_id)) {}
    const std::string& vmm_id() const noexcept { return vmm_id_; }

private:
    std::string vmm_id_;
};

}  // namespace iad
