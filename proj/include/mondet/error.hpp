#pragma once

#include <stdexcept>
#include <string>

namespace mondet {

enum class ErrorCode {
    ArityMismatch,
    InvalidArgument,
    UnsafeRule,
    NonBooleanQuery,
    NotFrontierGuarded,
    UnsupportedClass,
    SaturationBudget,
    DatalogViewUnexpandable,
    NonCqView,
    NonFullSigma,
    DatalogViewHere,
    FanoutLimit,
    SchemaTooLarge,
    Incoherent,
    WidthExceeded,
    InvalidDecomposition,
    AlphabetMismatch,
    NondeterministicSpec,
    EmptyTileset,
    ParseError,
    UndeclaredPredicate,
};

const char* errorCodeName(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, int detail = 0)
        : std::runtime_error(std::string(errorCodeName(code)) + ": " + message),
          code_(code), detail_(detail) {}

    ErrorCode code() const { return code_; }
    // Extra integer payload, e.g. the violated coherence condition.
    int detail() const { return detail_; }

private:
    ErrorCode code_;
    int detail_;
};

} // namespace mondet
