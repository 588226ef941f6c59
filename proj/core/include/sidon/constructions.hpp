#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sidon/field_tower.hpp"
#include "sidon/subspace.hpp"

namespace sidon {

/// coeff * scalar * x^(q^frobenius) * prod_g g^e, with g ranging over tower
/// level names (their generators).
struct Term {
    std::string coeff;  // coefficient symbol; empty means 1
    std::int64_t scalar = 1;
    std::uint64_t frobenius = 0;
    std::map<std::string, unsigned> monomial;

    friend bool operator==(const Term&, const Term&) = default;
};

/// One variable x ranging over the subfield F_{q^d}.
struct VariableGroup {
    std::string variable;
    std::size_t subfield_degree = 1;
    std::vector<Term> terms;

    friend bool operator==(const VariableGroup&, const VariableGroup&) = default;
};

struct CoefficientDomain {
    std::size_t subfield_degree = 1;
    bool nonzero = true;

    friend bool operator==(const CoefficientDomain&, const CoefficientDomain&) = default;
};

/// The set { sum over groups and terms : x_i in F_{q^{d_i}} }.
struct ConstructionSpec {
    std::string name;
    std::vector<VariableGroup> groups;
    std::map<std::string, CoefficientDomain> coefficients;

    [[nodiscard]] std::size_t claimed_dim() const noexcept;
    friend bool operator==(const ConstructionSpec&, const ConstructionSpec&) = default;
};

/// Coefficient values as top-level elements. Missing symbols default to 1.
using CoefficientAssignment = std::map<std::string, FieldElement>;

struct Realization {
    Subspace space;
    std::vector<Subspace> group_spaces;  // one per variable group
    std::size_t claimed_dim = 0;
};

/// Spans the term sums evaluated on an F_q-basis of each group's subfield.
/// Throws CoefficientOutOfDomain when a coefficient leaves its declared subfield
/// (or is zero where nonzero is required) and DimensionCollapse when the span is
/// smaller than the claimed dimension.
[[nodiscard]] Realization realize(const ConstructionSpec& spec, const TowerPtr& tower,
                                  const CoefficientAssignment& coefficients);

/// Parses one coefficient value: an integer, "level:JSON" for an element of a
/// named level, or a JSON array read at the top level.
[[nodiscard]] FieldElement parse_coefficient(const FieldTower& tower, std::string_view text);

/// "name=value;name=value" into an assignment (values via parse_coefficient).
[[nodiscard]] CoefficientAssignment parse_coefficients(const FieldTower& tower, std::string_view text);

/// Uniformly random nonzero elements of each declared subfield.
[[nodiscard]] CoefficientAssignment random_coefficients(const ConstructionSpec& spec, const FieldTower& tower,
                                                        std::uint64_t seed);

[[nodiscard]] nlohmann::json to_json(const ConstructionSpec& spec);
[[nodiscard]] ConstructionSpec spec_from_json(const nlohmann::json& j);
/// JSON Schema (draft 2020-12) of the ConstructionSpec document.
[[nodiscard]] const nlohmann::json& construction_spec_schema();

}  // namespace sidon
