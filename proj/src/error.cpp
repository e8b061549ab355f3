#include "fcr/error.hpp"

namespace fcr {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyFormula: return "EmptyFormula";
    case ErrorCode::OversizeFormula: return "OversizeFormula";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotMathML: return "NotMathML";
    case ErrorCode::CorpusFormatError: return "CorpusFormatError";
    case ErrorCode::AnnotationFormatError: return "AnnotationFormatError";
    case ErrorCode::ModelFormatError: return "ModelFormatError";
    case ErrorCode::InvalidFormula: return "InvalidFormula";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::BadHyperparameter: return "BadHyperparameter";
    case ErrorCode::MissingAnnotation: return "MissingAnnotation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownFormula: return "UnknownFormula";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::EmptyBatch: return "EmptyBatch";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::TooManyClusters: return "TooManyClusters";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::Undefined: return "Undefined";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::StratificationError: return "StratificationError";
    case ErrorCode::IngestEmpty: return "IngestEmpty";
    case ErrorCode::OfflineMiss: return "OfflineMiss";
    case ErrorCode::UnknownQid: return "UnknownQid";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

ErrorCategory category(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::EmptyFormula:
    case ErrorCode::OversizeFormula:
    case ErrorCode::ParseError:
    case ErrorCode::NotMathML:
    case ErrorCode::CorpusFormatError:
    case ErrorCode::AnnotationFormatError:
    case ErrorCode::ModelFormatError:
        return ErrorCategory::InputFormat;
    case ErrorCode::OfflineMiss:
        return ErrorCategory::OfflineMiss;
    case ErrorCode::UnknownQid:
    case ErrorCode::NetworkError:
    case ErrorCode::IoError:
        return ErrorCategory::Runtime;
    default:
        return ErrorCategory::Precondition;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

} // namespace fcr
