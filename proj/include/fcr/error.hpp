#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fcr {

enum class ErrorCode {
    // input format (CLI exit code 2)
    EmptyFormula,
    OversizeFormula,
    ParseError,
    NotMathML,
    CorpusFormatError,
    AnnotationFormatError,
    ModelFormatError,
    // precondition violations (CLI exit code 3)
    InvalidFormula,
    InvalidConfig,
    EmptyCorpus,
    BadHyperparameter,
    MissingAnnotation,
    DimensionMismatch,
    UnknownFormula,
    DuplicateId,
    EmptyQuery,
    EmptyBatch,
    DegenerateData,
    TooManyClusters,
    EmptyInput,
    Undefined,
    DegenerateLabels,
    StratificationError,
    IngestEmpty,
    // knowledge-base access
    OfflineMiss,
    UnknownQid,
    NetworkError,
    IoError,
};

enum class ErrorCategory { InputFormat, Precondition, OfflineMiss, Runtime };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps the code's category onto its exit status.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace fcr
