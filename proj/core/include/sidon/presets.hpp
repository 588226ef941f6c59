#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sidon/constructions.hpp"

namespace sidon {

struct PresetParams {
    std::uint64_t q = 2;
    std::optional<std::size_t> k, l, s, m, r, n;
    std::optional<std::uint64_t> t_exp, s_exp;  // Frobenius exponents replacing 0 and 1
    std::uint64_t seed = 0;                     // tower search seed
    std::string coeffs;                         // "name=value;..."
    std::optional<std::uint64_t> random_coeffs;
    bool force = false;
    std::string reading = "xi";  // thm_4_20 only: "xi" or "verbatim"
};

struct Hypothesis {
    std::string name;
    bool passed = false;
    std::string detail;
    bool forcible = true;
};

struct PresetSpace {
    std::string label;
    ConstructionSpec spec;
    Realization realized;
};

struct PresetResult {
    std::string preset;
    PresetParams params;
    TowerPtr tower;
    std::vector<Hypothesis> hypotheses;
    std::vector<std::string> warnings;
    std::vector<std::string> notes;
    bool unsupported = false;  // a hypothesis failed and --force was given
    CoefficientAssignment coefficients;
    std::vector<PresetSpace> spaces;  // two for the union presets, one otherwise
    std::string plan;                 // "orbit" when a full alpha sweep fits the default budget
};

[[nodiscard]] const std::vector<std::string>& preset_names();

/// Builds the tower, checks the preset's hypotheses and realizes its space(s).
/// Throws HypothesisViolation naming the first failed hypothesis unless `force`
/// is set and the hypothesis is forcible.
[[nodiscard]] PresetResult run_preset(const std::string& name, const PresetParams& params);

[[nodiscard]] nlohmann::json to_json(const PresetResult& r);

/// Splits q into (p, e) with q = p^e; throws InvalidArgument otherwise.
[[nodiscard]] std::pair<std::uint32_t, std::size_t> split_prime_power(std::uint64_t q);

}  // namespace sidon
