#pragma once

#include <stdexcept>
#include <string>

namespace capharm {

/// Broad failure classes. The numeric values double as CLI exit codes.
enum class ErrorCategory : int {
    Config = 1,
    Io = 2,
    Topology = 3,
    Convergence = 4,
    NumericalDomain = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, std::string kind, const std::string& message);

    ErrorCategory category() const noexcept { return category_; }
    const std::string& kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
    std::string kind_;
};

#define CAPHARM_DEFINE_ERROR(Name, Category)                                   \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& message)                              \
            : Error(ErrorCategory::Category, #Name, message) {}                \
    };

CAPHARM_DEFINE_ERROR(ParseError, Io)
CAPHARM_DEFINE_ERROR(IoError, Io)
CAPHARM_DEFINE_ERROR(ChecksumMismatch, Io)
CAPHARM_DEFINE_ERROR(TopologyError, Topology)
CAPHARM_DEFINE_ERROR(NoConvergence, Convergence)
CAPHARM_DEFINE_ERROR(RootMissed, Convergence)
CAPHARM_DEFINE_ERROR(ConvergenceError, Convergence)
CAPHARM_DEFINE_ERROR(DomainError, NumericalDomain)
CAPHARM_DEFINE_ERROR(OverflowError, NumericalDomain)
CAPHARM_DEFINE_ERROR(Underdetermined, NumericalDomain)
CAPHARM_DEFINE_ERROR(DegenerateFace, NumericalDomain)
CAPHARM_DEFINE_ERROR(DegenerateFdec, NumericalDomain)
CAPHARM_DEFINE_ERROR(InsufficientPoints, NumericalDomain)
CAPHARM_DEFINE_ERROR(ConfigError, Config)
CAPHARM_DEFINE_ERROR(ThetaCMismatch, Config)
CAPHARM_DEFINE_ERROR(WindowOutOfRange, Config)
CAPHARM_DEFINE_ERROR(EigenTableMismatch, Config)

#undef CAPHARM_DEFINE_ERROR

}  // namespace capharm
