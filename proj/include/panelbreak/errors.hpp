#pragma once

#include <stdexcept>
#include <string>

namespace panelbreak {

// Two error families, mapped to CLI exit codes:
//   ValidationError -> exit 2 (bad input, bad configuration, contract violation)
//   NumericError    -> exit 3 (the computation itself broke down)
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SeriesTooShort : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnknownVariable : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ShapeMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InsufficientEntities : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InsufficientData : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidPValue : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidSpec : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class MalformedRow : public ValidationError {
public:
    using ValidationError::ValidationError;
    MalformedRow(int line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what) {}
};

class DuplicateObservation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class UnmappedVariable : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ThresholdOutOfRange : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class IoError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ExplosiveWithoutFlag : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class RankDeficient : public NumericError {
public:
    using NumericError::NumericError;
};

class SingularRestriction : public NumericError {
public:
    using NumericError::NumericError;
};

class CholeskyFailure : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace panelbreak
