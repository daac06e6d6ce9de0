#ifndef SPLINEIDS_ERRORS_HPP
#define SPLINEIDS_ERRORS_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace splineids {

/// Coarse failure category; the CLI maps it onto its exit code.
enum class ErrorCategory { Usage = 1, Data = 2, Numerical = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }
    int exit_code() const noexcept { return static_cast<int>(category_); }

private:
    ErrorCategory category_;
};

#define SPLINEIDS_DEFINE_ERROR(Name, Category)                                 \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what)                                 \
            : Error(ErrorCategory::Category, #Name ": " + what) {}             \
    }

SPLINEIDS_DEFINE_ERROR(ConfigError, Usage);
SPLINEIDS_DEFINE_ERROR(EmptySample, Data);
SPLINEIDS_DEFINE_ERROR(DegenerateKnots, Data);
SPLINEIDS_DEFINE_ERROR(InsufficientData, Data);
SPLINEIDS_DEFINE_ERROR(InvalidAbscissae, Data);
SPLINEIDS_DEFINE_ERROR(BadIndex, Data);
SPLINEIDS_DEFINE_ERROR(EmptyData, Data);
SPLINEIDS_DEFINE_ERROR(ShapeError, Data);
SPLINEIDS_DEFINE_ERROR(SplitError, Data);
SPLINEIDS_DEFINE_ERROR(ModelLoadError, Data);
SPLINEIDS_DEFINE_ERROR(NumericalError, Numerical);

#undef SPLINEIDS_DEFINE_ERROR

class OutOfDomain : public Error {
public:
    explicit OutOfDomain(const std::string& what, std::optional<std::size_t> row = std::nullopt)
        : Error(ErrorCategory::Data,
                "OutOfDomain: " + what + (row ? " (row " + std::to_string(*row) + ")" : "")),
          row_(row) {}

    /// Offending row when raised while building a design matrix.
    std::optional<std::size_t> row() const noexcept { return row_; }

private:
    std::optional<std::size_t> row_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(ErrorCategory::Data, "ParseError: line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace splineids

#endif  // SPLINEIDS_ERRORS_HPP
