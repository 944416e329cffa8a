#include "mondet/error.hpp"

namespace mondet {

const char* errorCodeName(ErrorCode code) {
    switch (code) {
    case ErrorCode::ArityMismatch: return "ARITY_MISMATCH";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::UnsafeRule: return "UNSAFE_RULE";
    case ErrorCode::NonBooleanQuery: return "NON_BOOLEAN_QUERY";
    case ErrorCode::NotFrontierGuarded: return "NOT_FRONTIER_GUARDED";
    case ErrorCode::UnsupportedClass: return "UNSUPPORTED_CLASS";
    case ErrorCode::SaturationBudget: return "SATURATION_BUDGET";
    case ErrorCode::DatalogViewUnexpandable: return "DATALOG_VIEW_UNEXPANDABLE";
    case ErrorCode::NonCqView: return "NON_CQ_VIEW";
    case ErrorCode::NonFullSigma: return "NON_FULL_SIGMA";
    case ErrorCode::DatalogViewHere: return "DATALOG_VIEW_HERE";
    case ErrorCode::FanoutLimit: return "FANOUT_LIMIT";
    case ErrorCode::SchemaTooLarge: return "SCHEMA_TOO_LARGE";
    case ErrorCode::Incoherent: return "INCOHERENT";
    case ErrorCode::WidthExceeded: return "WIDTH_EXCEEDED";
    case ErrorCode::InvalidDecomposition: return "INVALID_DECOMPOSITION";
    case ErrorCode::AlphabetMismatch: return "ALPHABET_MISMATCH";
    case ErrorCode::NondeterministicSpec: return "NONDETERMINISTIC_SPEC";
    case ErrorCode::EmptyTileset: return "EMPTY_TILESET";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::UndeclaredPredicate: return "UNDECLARED_PREDICATE";
    }
    return "UNKNOWN_ERROR";
}

} // namespace mondet
