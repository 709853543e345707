#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace exform {

/// Position inside a .form source text, 1-based.
struct SourceLocation {
    std::size_t line = 1;
    std::size_t column = 1;

    std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

/// Root of every error the engine raises. Errors raised while reading a .form
/// document carry the location of the offending token.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what, std::optional<SourceLocation> loc = std::nullopt)
        : std::runtime_error(loc ? loc->str() + ": " + what : what), location_(loc), message_(what) {}

    const std::optional<SourceLocation>& location() const noexcept { return location_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::optional<SourceLocation> location_;
    std::string message_;
};

#define EXFORM_DEFINE_ERROR(Name)                                                      \
    class Name : public Error {                                                        \
    public:                                                                            \
        explicit Name(const std::string& what,                                         \
                      std::optional<SourceLocation> loc = std::nullopt)                \
            : Error(what, loc) {}                                                      \
    }

EXFORM_DEFINE_ERROR(DivisionByZero);
EXFORM_DEFINE_ERROR(UnknownVariable);
EXFORM_DEFINE_ERROR(PoleAtPoint);
EXFORM_DEFINE_ERROR(VariableMismatch);
EXFORM_DEFINE_ERROR(DegreeError);
EXFORM_DEFINE_ERROR(ArityError);
EXFORM_DEFINE_ERROR(ParameterError);
EXFORM_DEFINE_ERROR(NotClosed);
EXFORM_DEFINE_ERROR(WitnessUndecided);
/// Syntax error in a .form document; always carries a location.
EXFORM_DEFINE_ERROR(ParseError);

#undef EXFORM_DEFINE_ERROR

}  // namespace exform
