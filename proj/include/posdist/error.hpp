#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posdist {

/// Base for every failure caused by input data (treebanks, registries, counts).
/// The CLI maps these to exit code 1.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration or command-line arguments (exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownTag : public DataError {
public:
    explicit UnknownTag(const std::string& label) : DataError("unknown UPOS tag '" + label + "'"), label_(label) {}
    UnknownTag(const std::string& label, const std::string& where)
        : DataError(where + ": unknown UPOS tag '" + label + "'"), label_(label) {}
    const std::string& label() const noexcept { return label_; }

private:
    std::string label_;
};

class MalformedLine : public DataError {
public:
    MalformedLine(std::string source, std::size_t line, const std::string& what)
        : DataError(source + ":" + std::to_string(line) + ": " + what), source_(std::move(source)), line_(line) {}
    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

class DuplicateLanguage : public DataError {
public:
    using DataError::DataError;
};

class CoordinateOutOfRange : public DataError {
public:
    using DataError::DataError;
};

class DigitOutOfRange : public DataError {
public:
    using DataError::DataError;
};

class EmptyCounts : public DataError {
public:
    using DataError::DataError;
};

class InsufficientData : public DataError {
public:
    using DataError::DataError;
};

class InconsistentMarginals : public DataError {
public:
    using DataError::DataError;
};

class MissingContext : public DataError {
public:
    using DataError::DataError;
};

class SentenceTooShort : public DataError {
public:
    using DataError::DataError;
};

class MismatchedBlockSize : public DataError {
public:
    using DataError::DataError;
};

class DuplicateLabel : public DataError {
public:
    using DataError::DataError;
};

class KOutOfRange : public DataError {
public:
    using DataError::DataError;
};

class MissingCoordinates : public DataError {
public:
    using DataError::DataError;
};

}  // namespace posdist
