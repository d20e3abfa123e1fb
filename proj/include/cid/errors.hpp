#ifndef CID_ERRORS_HPP
#define CID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cid {

enum class ErrorCode {
    SyntaxError,
    DuplicateNode,
    DuplicateEdge,
    UnknownNodeInEdge,
    CycleDetected,
    SelfLoop,
    UnknownNode,
    OverlappingSets,
    NotSingleDecision,
    NodeDescendsFromDecision,
    IsDecisionNode,
    NoIncentive,
    ReportGraphMismatch,
    MissingCpt,
    RowNotNormalized,
    DomainMismatch,
    NonNumericUtilityDomain,
    StateSpaceTooLarge,
    EditCreatesCycle,
    BadParams,
    UnknownExample,
    InvalidModel,
};

const char* error_code_name(ErrorCode code);

// Single exception type for all analysis errors. `line`/`column` are 1-based
// and only meaningful for parse errors (0 otherwise).
class CidError : public std::runtime_error {
public:
    CidError(ErrorCode code, const std::string& message, int line = 0, int column = 0)
        : std::runtime_error(format(code, message, line, column)),
          code_(code), line_(line), column_(column) {}

    ErrorCode code() const { return code_; }
    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(ErrorCode code, const std::string& message, int line, int column);

    ErrorCode code_;
    int line_;
    int column_;
};

} // namespace cid

#endif // CID_ERRORS_HPP
