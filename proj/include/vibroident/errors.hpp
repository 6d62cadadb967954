#pragma once

#include <stdexcept>
#include <string>

namespace vibroident {

/// Broad failure class, mapped to process exit codes by the CLI.
enum class ErrorKind { Config, Parse, Numeric, IO };

int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string name, const std::string& what)
        : std::runtime_error(what), kind_(kind), name_(std::move(name)) {}
    ErrorKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

private:
    ErrorKind kind_;
    std::string name_;
};

#define VIBROIDENT_ERROR(Name, Kind)                                        \
    class Name : public Error {                                             \
    public:                                                                 \
        explicit Name(const std::string& what)                              \
            : Error(ErrorKind::Kind, #Name, what) {}                        \
    };

VIBROIDENT_ERROR(ConfigError, Config)
VIBROIDENT_ERROR(IoError, IO)
VIBROIDENT_ERROR(ParseError, Parse)
VIBROIDENT_ERROR(SpacingError, Parse)
VIBROIDENT_ERROR(AlignmentError, Numeric)
VIBROIDENT_ERROR(WindowError, Numeric)
VIBROIDENT_ERROR(AssemblyError, Numeric)
VIBROIDENT_ERROR(EigenError, Numeric)
VIBROIDENT_ERROR(SolveError, Numeric)
VIBROIDENT_ERROR(IntegrationError, Numeric)
VIBROIDENT_ERROR(DesignError, Numeric)
VIBROIDENT_ERROR(FilterError, Numeric)
VIBROIDENT_ERROR(DomainError, Numeric)
VIBROIDENT_ERROR(ForceEstimationError, Numeric)
VIBROIDENT_ERROR(BuildError, Numeric)
VIBROIDENT_ERROR(RankError, Numeric)
VIBROIDENT_ERROR(InfinityError, Numeric)
VIBROIDENT_ERROR(NormalizationError, Numeric)
VIBROIDENT_ERROR(ComparisonError, Numeric)
VIBROIDENT_ERROR(GeometryError, Numeric)

#undef VIBROIDENT_ERROR

} // namespace vibroident
