#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inertia {

enum class ErrorKind {
    // data loading and segmentation
    MissingFile,
    MalformedHeader,
    UnparsableRow,
    RaggedRow,
    DuplicateObservation,
    EmptyDataset,
    GapInSegment,
    SegmentNotCovered,
    // numerical kernels
    LengthMismatch,
    TooFewPoints,
    ZeroVarianceX,
    NonFiniteInput,
    InvalidDf,
    OutOfDomain,
    SampleTooSmall,
    SampleTooLarge,
    ZeroVariance,
    NonPositiveBinWidth,
    // model
    NonPositiveLevel,
    YearBeforeStart,
    CohortNotCovered,
    InvalidParameter,
    // output
    IoError,
    EmptyInput,
    // orchestration
    Config,
};

[[nodiscard]] std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. what() is "<Kind>: <detail>" so the
/// kind name is always the first token of a diagnostic.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail)
        : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace inertia
