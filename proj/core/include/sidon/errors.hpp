#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace sidon {

enum class Errc {
    NonPrimeCharacteristic,
    NoIrreducibleFound,
    DivisionByZero,
    FieldMismatch,
    NotASubLevel,
    DegreeNotDividing,
    ZeroArgument,
    NotInSubfield,
    AmbientMismatch,
    ZeroScalar,
    BudgetExceeded,
    IdenticalSubspaces,
    InputNotSidon,
    HypothesisViolation,
    CoefficientOutOfDomain,
    DimensionCollapse,
    ParseError,
    InvalidArgument,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised when an enumeration would exceed its configured cap. `required` is a
/// decimal string because projective counts of large ambients overflow 64 bits.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(std::string what, std::string required, std::uint64_t cap)
        : Error(Errc::BudgetExceeded, what + " (required " + required + ", cap " + std::to_string(cap) + ")"),
          required_(std::move(required)),
          cap_(cap) {}

    [[nodiscard]] const std::string& required() const noexcept { return required_; }
    [[nodiscard]] std::uint64_t cap() const noexcept { return cap_; }

private:
    std::string required_;
    std::uint64_t cap_;
};

}  // namespace sidon
