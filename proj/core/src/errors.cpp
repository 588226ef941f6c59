#include "sidon/errors.hpp"

namespace sidon {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::NonPrimeCharacteristic: return "NonPrimeCharacteristic";
        case Errc::NoIrreducibleFound: return "NoIrreducibleFound";
        case Errc::DivisionByZero: return "DivisionByZero";
        case Errc::FieldMismatch: return "FieldMismatch";
        case Errc::NotASubLevel: return "NotASubLevel";
        case Errc::DegreeNotDividing: return "DegreeNotDividing";
        case Errc::ZeroArgument: return "ZeroArgument";
        case Errc::NotInSubfield: return "NotInSubfield";
        case Errc::AmbientMismatch: return "AmbientMismatch";
        case Errc::ZeroScalar: return "ZeroScalar";
        case Errc::BudgetExceeded: return "BudgetExceeded";
        case Errc::IdenticalSubspaces: return "IdenticalSubspaces";
        case Errc::InputNotSidon: return "InputNotSidon";
        case Errc::HypothesisViolation: return "HypothesisViolation";
        case Errc::CoefficientOutOfDomain: return "CoefficientOutOfDomain";
        case Errc::DimensionCollapse: return "DimensionCollapse";
        case Errc::ParseError: return "ParseError";
        case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace sidon
