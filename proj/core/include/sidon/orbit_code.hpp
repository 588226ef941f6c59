#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json_fwd.hpp>

#include "sidon/budget.hpp"
#include "sidon/certify.hpp"
#include "sidon/subspace.hpp"

namespace sidon {

using BigInt = boost::multiprecision::cpp_int;

enum class OrbitMethod { Enumerated, ImpliedBySidon };
std::string_view to_string(OrbitMethod m) noexcept;

struct OrbitReport {
    std::size_t k = 0;
    std::size_t n = 0;
    std::uint32_t q = 2;
    OrbitMethod method = OrbitMethod::Enumerated;
    BigInt size = 0;
    std::size_t t = 0;                    // stabilizer subfield F_{q^t}
    std::uint64_t stabilizer_count = 0;   // projective alphas with alpha V = V
    std::size_t max_dim = 0;              // max dim(V cap alpha V) over alpha V != V
    std::optional<std::size_t> distance;  // absent for degenerate orbits
    bool degenerate = false;              // fewer than two codewords
    std::uint64_t alphas_swept = 0;
};

/// Sweeps every projective alpha of the top field, collecting canonical RREF
/// keys of alpha V. Throws BudgetExceeded when (q^n-1)/(q-1) exceeds the orbit
/// budget.
[[nodiscard]] OrbitReport enumerate_orbit(const Subspace& v, const Budgets& budgets = {});

/// Size and distance stated by the Sidon size/distance equivalence for a space
/// certified Sidon, without enumeration.
[[nodiscard]] OrbitReport implied_orbit_report(const Subspace& v, const SidonCertificate& cert);

/// All distinct codewords of orb(V), sorted by canonical key. Same budget as
/// enumerate_orbit.
[[nodiscard]] std::vector<Subspace> orbit_codewords(const Subspace& v, const Budgets& budgets = {});

enum class CrossMethod { Swept, ImpliedByPairwise };
std::string_view to_string(CrossMethod m) noexcept;

struct CrossReport {
    std::size_t i = 0;
    std::size_t j = 0;
    CrossMethod method = CrossMethod::Swept;
    bool same_orbit = false;     // alpha V_j = V_i for some alpha
    std::size_t max_dim = 0;     // max dim(V_i cap alpha V_j) over alpha V_j != V_i
    bool max_dim_is_bound = false;
    std::optional<std::size_t> distance;
};

struct UnionCodeReport {
    std::vector<OrbitReport> orbits;
    std::vector<CrossReport> cross;
    BigInt size = 0;
    BigInt sum_of_orbit_sizes = 0;
    bool collision = false;
    std::optional<std::size_t> distance;
    bool distance_is_bound = false;  // true when some term came from a certificate
};

/// Union of orbits: each orbit enumerated (or implied when over budget and
/// Sidon), each pair of generators by a full alpha sweep (or, over budget, the
/// pairwise product criterion, which bounds the cross intersection by 1).
[[nodiscard]] UnionCodeReport min_distance_union(std::span<const Subspace> generators, const Budgets& budgets = {});

struct EquivalenceRecord {
    SidonCertificate sidon;
    OrbitReport orbit;
    BigInt expected_size = 0;
    std::size_t expected_distance = 0;
    bool orbit_matches = false;
    bool equivalence_holds = false;
};

/// Runs both oracles and compares: is_sidon(V) iff orbit size (q^n-1)/(q-1) and
/// distance 2k-2. Requires 2 <= k.
[[nodiscard]] EquivalenceRecord verify_sidon_orbit_equivalence(const Subspace& v, const Budgets& budgets = {});

/// Gaussian binomial [n, k]_q.
[[nodiscard]] BigInt gaussian_binomial(std::size_t n, std::size_t k, std::uint32_t q);

/// Walks every k-dimensional subspace of the top field in RREF order: pivot
/// column sets in lexicographic order, free entries as base-q counters.
class GrassmannianIterator {
public:
    GrassmannianIterator(TowerPtr tower, std::size_t k);

    [[nodiscard]] bool done() const noexcept { return done_; }
    [[nodiscard]] Subspace current() const;
    void next();

private:
    void load_pivots();

    TowerPtr tower_;
    std::size_t n_;
    std::size_t k_;
    std::uint32_t q_;
    std::vector<std::size_t> pivots_;
    std::vector<std::pair<std::size_t, std::size_t>> free_;  // (row, column)
    std::vector<SmallField::Value> digits_;
    bool done_ = false;
};

[[nodiscard]] nlohmann::json big_to_json(const BigInt& v);
[[nodiscard]] nlohmann::json to_json(const OrbitReport& r);
[[nodiscard]] nlohmann::json to_json(const UnionCodeReport& r);
[[nodiscard]] nlohmann::json to_json(const FieldTower& t, const EquivalenceRecord& r);

}  // namespace sidon
