#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sidon/budget.hpp"
#include "sidon/subspace.hpp"

namespace sidon {

enum class Verdict { Sidon, NotSidon };
enum class CertMethod { DefinitionBruteforce, SumConditions, OrbitEquivalence };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(CertMethod m) noexcept;

/// Nonzero a, b, c, d with ab = cd exactly and {aF_q, bF_q} != {cF_q, dF_q}.
struct Quadruple {
    FieldElement a, b, c, d;
};

struct SidonCertificate {
    Verdict verdict = Verdict::Sidon;
    CertMethod method = CertMethod::DefinitionBruteforce;
    std::optional<Quadruple> witness;
    std::uint64_t points = 0;          // projective points enumerated
    std::uint64_t pairs_examined = 0;  // products hashed

    [[nodiscard]] bool sidon() const noexcept { return verdict == Verdict::Sidon; }
};

/// Result of the product-injectivity test on P(U) x P(V). On failure the
/// witness is (a, c) in U and (b, d) in V with ab = cd, stored as a, b, c, d.
struct PairwiseResult {
    bool holds = true;
    std::optional<Quadruple> witness;
    std::uint64_t pairs_examined = 0;
};

struct PairCheck {
    std::size_t i = 0;
    std::size_t j = 0;
    bool holds = false;
    bool identical = false;  // V_i == V_j, which the pairwise criterion excludes
    std::optional<Quadruple> witness;
};

struct SumCertificate {
    bool direct_sum = false;  // all products V_iV_j (i <= j) form a direct sum
    std::vector<std::size_t> product_dims;
    std::size_t sum_of_products_dim = 0;
    std::vector<PairCheck> pairs;
    std::vector<SidonCertificate> inputs;
    bool pass = false;
};

/// Brute-force Sidon test: injectivity of {pair of projective points} -> product
/// point, a = b included. Requires dim V >= 1.
[[nodiscard]] SidonCertificate is_sidon(const Subspace& v, const Budgets& budgets = {});

/// Injectivity of P(U) x P(V) -> projective products. U and V must differ.
[[nodiscard]] PairwiseResult pairwise_condition(const Subspace& u, const Subspace& v, const Budgets& budgets = {});

/// dim(U cap alpha V) <= 1 for every projective alpha in the top field.
[[nodiscard]] bool pairwise_condition_direct(const Subspace& u, const Subspace& v, const Budgets& budgets = {});

/// Checks the two sufficient conditions for sum(spaces) to be Sidon: directness
/// of the products V_iV_j and the pairwise criterion for i < j. Each input must
/// pass is_sidon. A pass is sufficient, not necessary.
[[nodiscard]] SumCertificate certify_sum(std::span<const Subspace> spaces, const Budgets& budgets = {});

/// Rechecks ab = cd and the projective pair inequality.
[[nodiscard]] bool witness_valid(const FieldTower& t, const Quadruple& w);

/// Key of the projective class xF_q.
[[nodiscard]] std::string projective_key(const FieldTower& t, const FieldElement& x);

[[nodiscard]] nlohmann::json to_json(const FieldTower& t, const Quadruple& w);
[[nodiscard]] nlohmann::json to_json(const FieldTower& t, const SidonCertificate& c);
[[nodiscard]] nlohmann::json to_json(const FieldTower& t, const SumCertificate& c);

}  // namespace sidon
