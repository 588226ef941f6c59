#pragma once

// Brute-force reference implementations. They work on explicit element sets and
// use only field arithmetic (add, mul, pow), never the RREF or projective
// machinery under test.

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "sidon/field_tower.hpp"
#include "sidon/subspace.hpp"

namespace oracle {

using sidon::FieldElement;
using sidon::FieldTower;

/// Every element of the given level, in flat counting order (zero first).
std::vector<FieldElement> all_elements(const FieldTower& t, std::size_t level);

/// F_q as top-level elements: the roots of x^q = x.
std::vector<FieldElement> base_scalars(const FieldTower& t);

/// Every element of the F_q-span of `basis` (zero included).
std::vector<FieldElement> span_elements(const FieldTower& t, const std::vector<FieldElement>& basis);

/// Lexicographically least coefficient vector of the class xF_q^*.
std::vector<sidon::Coeff> projective_class(const FieldTower& t, const FieldElement& x);
std::vector<sidon::Coeff> projective_class(const FieldTower& t, const FieldElement& x,
                                           const std::vector<FieldElement>& scalars);

struct DefinitionWitness {
    FieldElement a, b, c, d;
};

/// Sidon test straight from the definition: for all nonzero a, b, c, d in V
/// with ab = cd, {aF_q, bF_q} = {cF_q, dF_q}. Returns a violating quadruple.
std::optional<DefinitionWitness> sidon_by_definition(const FieldTower& t, const std::vector<FieldElement>& basis);

/// Dimension of the span of all products uv, u in U, v in V (all elements).
std::size_t product_span_dim(const FieldTower& t, const std::vector<FieldElement>& u, const std::vector<FieldElement>& v);

/// log_q of the number of common elements.
std::size_t intersection_dim(const FieldTower& t, const std::vector<FieldElement>& u_elems,
                             const std::vector<FieldElement>& v_elems);

struct OrbitStats {
    std::uint64_t size = 0;
    std::optional<std::size_t> min_distance;  // over distinct codeword pairs
};

/// orb(V) from every nonzero alpha (not just projective representatives), as
/// element sets, with the minimum distance by comparing all codeword pairs.
OrbitStats orbit_by_sets(const FieldTower& t, const std::vector<FieldElement>& basis);

/// Max dim(U cap alpha V) over nonzero alpha, by element sets. Alphas with
/// alpha V = U are skipped unless `every_alpha` is set.
std::size_t cross_max_dim(const FieldTower& t, const std::vector<FieldElement>& u, const std::vector<FieldElement>& v,
                          bool every_alpha = false);

/// Monic irreducibility over F_p by trial division with every monic polynomial
/// of degree 1..deg/2. Coefficients ascending, leading 1 included.
bool irreducible_by_trial_division(std::uint32_t p, const std::vector<std::uint32_t>& f);

/// Number of monic irreducibles of degree d over F_p (necklace formula).
std::uint64_t irreducible_count(std::uint32_t p, unsigned d);

/// Gaussian binomial by the product formula, in 64 bits.
std::uint64_t gaussian_binomial_formula(std::uint64_t n, std::uint64_t k, std::uint64_t q);

/// (q^n - 1)/(q - 1).
std::uint64_t projective_count(std::uint64_t q, std::uint64_t n);

}  // namespace oracle
