#pragma once

#include <stdexcept>
#include <string>

namespace imt {

enum class ErrorKind {
    PrecisionExhausted,
    HypothesisViolated,
    TooLarge,
    EigenSplitFailed,
    ZeroReduction,
    NonIntegral,
    TruncationTooSmall,
    NotInPsiZero,
    SingularSystem,
    InsufficientData,
    OutOfRange,
    NotFound,
    SchemaMismatch,
    Network,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

template <ErrorKind K>
class TypedError : public Error {
public:
    explicit TypedError(const std::string& what) : Error(K, what) {}
};

using PrecisionExhausted = TypedError<ErrorKind::PrecisionExhausted>;
using HypothesisViolated = TypedError<ErrorKind::HypothesisViolated>;
using TooLarge = TypedError<ErrorKind::TooLarge>;
using EigenSplitFailed = TypedError<ErrorKind::EigenSplitFailed>;
using ZeroReduction = TypedError<ErrorKind::ZeroReduction>;
using NonIntegral = TypedError<ErrorKind::NonIntegral>;
using TruncationTooSmall = TypedError<ErrorKind::TruncationTooSmall>;
using NotInPsiZero = TypedError<ErrorKind::NotInPsiZero>;
using SingularSystem = TypedError<ErrorKind::SingularSystem>;
using InsufficientData = TypedError<ErrorKind::InsufficientData>;
using OutOfRange = TypedError<ErrorKind::OutOfRange>;
using NotFound = TypedError<ErrorKind::NotFound>;
using SchemaMismatch = TypedError<ErrorKind::SchemaMismatch>;
using NetworkError = TypedError<ErrorKind::Network>;

}  // namespace imt
