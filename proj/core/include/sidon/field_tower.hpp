#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sidon/small_field.hpp"

namespace sidon {

/// An element of one tower level.
///
/// Storage is the flattened nested coefficient vector: a level-L element is d_L
/// consecutive blocks, each a level-(L-1) element, down to F_p. Position i of
/// `coeffs` is the coefficient of the i-th flattened basis monomial (products of
/// level generators in lexicographic power order, lowest level fastest).
struct FieldElement {
    std::size_t level = 0;
    std::vector<Coeff> coeffs;

    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

/// Polynomial over one tower level, ascending coefficients, no trailing zeros.
struct Polynomial {
    std::size_t level = 0;
    std::vector<FieldElement> coeffs;

    /// -1 for the zero polynomial.
    [[nodiscard]] int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

class FieldTower;

/// Extra acceptance rule for automatically searched level polynomials.
using PolynomialFilter = std::function<bool(const FieldTower&, const Polynomial&)>;

/// How to obtain one level: an explicit monic irreducible polynomial over the
/// previous level, or a seeded search.
struct LevelSpec {
    std::string name;
    std::size_t degree = 1;
    std::optional<std::string> polynomial;  // text or coefficient-list form
    std::uint64_t seed = 0;
    PolynomialFilter filter;  // auto search only
};

struct Level {
    std::string name;
    std::size_t degree = 1;       // over the previous level
    std::size_t flat_degree = 1;  // over F_p
    Polynomial modulus;           // empty for F_p
    std::optional<std::uint64_t> seed;
    std::optional<SmallField> table;
    std::vector<SmallField::Value> modulus_encoded;  // when the previous level is tabled
};

/// A chain F_p = L_0 < L_1 < ... < L_top of explicit extensions.
///
/// The designated code base F_q (q = p^e) is L_0 when e = 1 and otherwise the
/// level named "q" directly above F_p. All values are immutable once built;
/// share through TowerPtr.
class FieldTower {
public:
    /// make_tower: q = p, one auto level per entry of `level_degrees`, level i
    /// searched with seed `seed + i`. Level names are "L1", "L2", ...
    static FieldTower make(std::uint32_t p, std::span<const std::size_t> level_degrees, std::uint64_t seed);

    /// General builder. q = p^q_exponent; for q_exponent > 1 the "q" level is
    /// searched with `q_seed` unless `q_polynomial` is given.
    static FieldTower build(std::uint32_t p, std::size_t q_exponent, std::span<const LevelSpec> levels,
                            std::optional<std::string> q_polynomial = std::nullopt, std::uint64_t q_seed = 0);

    /// Parses "p=2; q=p^1; levels=k:3:auto(1),m:4:x^4+x+1".
    static FieldTower parse(std::string_view descriptor);

    /// Descriptor with every polynomial spelled out, so the tower can be rebuilt
    /// without repeating the irreducible search.
    [[nodiscard]] std::string descriptor() const;

    [[nodiscard]] std::uint32_t characteristic() const noexcept { return p_; }
    [[nodiscard]] std::uint32_t q() const noexcept { return base().order(); }
    [[nodiscard]] std::size_t q_exponent() const noexcept { return q_exponent_; }
    [[nodiscard]] std::size_t q_level() const noexcept { return q_exponent_ == 1 ? 0 : 1; }
    [[nodiscard]] std::size_t level_count() const noexcept { return levels_.size(); }
    [[nodiscard]] std::size_t top() const noexcept { return levels_.size() - 1; }
    [[nodiscard]] const Level& level(std::size_t i) const { return levels_.at(i); }
    [[nodiscard]] std::optional<std::size_t> find_level(std::string_view name) const;
    /// Degree of level i over F_q. Requires i >= q_level().
    [[nodiscard]] std::size_t degree_over_q(std::size_t i) const;
    /// Degree of the top field over F_q.
    [[nodiscard]] std::size_t n() const { return degree_over_q(top()); }
    /// Arithmetic of F_q on encoded coordinates.
    [[nodiscard]] const SmallField& base() const noexcept { return *levels_[q_level()].table; }

    [[nodiscard]] FieldElement zero(std::size_t level) const;
    [[nodiscard]] FieldElement one(std::size_t level) const;
    /// Image of the integer c (mod p) in the given level.
    [[nodiscard]] FieldElement constant(std::size_t level, std::int64_t c) const;
    /// Root of the level's defining polynomial, as a level element.
    [[nodiscard]] FieldElement generator(std::size_t level) const;
    /// Validates length and range of a flat coefficient vector.
    [[nodiscard]] FieldElement element(std::size_t level, std::vector<Coeff> flat) const;
    [[nodiscard]] bool is_zero(const FieldElement& x) const noexcept;
    [[nodiscard]] bool is_one(const FieldElement& x) const noexcept;

    [[nodiscard]] FieldElement add(const FieldElement& a, const FieldElement& b) const;
    [[nodiscard]] FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    [[nodiscard]] FieldElement neg(const FieldElement& a) const;
    [[nodiscard]] FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    [[nodiscard]] FieldElement inv(const FieldElement& a) const;
    [[nodiscard]] FieldElement pow(const FieldElement& a, std::uint64_t e) const;
    /// x^(q^i), q the code base order.
    [[nodiscard]] FieldElement frobenius(const FieldElement& x, std::uint64_t i) const;
    /// Canonical inclusion into a higher level.
    [[nodiscard]] FieldElement lift(const FieldElement& x, std::size_t target_level) const;

    /// Coordinates over F_q (encoded F_q values); level must be >= q_level().
    [[nodiscard]] std::vector<SmallField::Value> coordinates(const FieldElement& x) const;
    [[nodiscard]] FieldElement from_coordinates(std::size_t level, std::span<const SmallField::Value> coords) const;
    /// Multiplies by an F_q scalar given as an encoded value.
    [[nodiscard]] FieldElement scale(const FieldElement& x, SmallField::Value lambda) const;

    /// F_q-basis of the subfield F_{q^d} of `level`: kernel of x -> x^(q^d) - x.
    [[nodiscard]] std::vector<FieldElement> subfield_basis(std::size_t level, std::size_t d) const;
    [[nodiscard]] bool in_subfield(const FieldElement& x, std::size_t d) const;
    /// True iff the nonzero c in F_{q^k} is a (q-1)-th power there, decided by
    /// c^((q^k-1)/(q-1)) = 1, computed as the product of the k conjugates.
    [[nodiscard]] bool in_W(const FieldElement& c, std::size_t k) const;

    /// Nested ascending-coefficient arrays.
    [[nodiscard]] nlohmann::json to_json(const FieldElement& x) const;
    /// Accepts the nested form or the flat F_p list.
    [[nodiscard]] FieldElement element_from_json(std::size_t level, const nlohmann::json& j) const;

    /// Structural equality: same characteristic, base and moduli.
    [[nodiscard]] bool same_field(const FieldTower& other) const noexcept;

private:
    FieldTower() = default;

    void push_prime(std::uint32_t p);
    void push_level(std::string name, Polynomial modulus, std::optional<std::uint64_t> seed);
    void check_level(const FieldElement& x) const;
    void check_same(const FieldElement& a, const FieldElement& b) const;

    void mul_into(std::size_t level, const Coeff* a, const Coeff* b, Coeff* out) const;
    [[nodiscard]] FieldElement inv_generic(const FieldElement& a) const;

    std::uint32_t p_ = 2;
    std::size_t q_exponent_ = 1;
    std::vector<Level> levels_;

    friend Polynomial find_irreducible(const FieldTower&, std::size_t, std::size_t, std::uint64_t);
};

using TowerPtr = std::shared_ptr<const FieldTower>;

/// Monic irreducible of the given degree over `level`, from seeded pseudorandom
/// candidates filtered by the Rabin criterion. Deterministic for a fixed seed.
[[nodiscard]] Polynomial find_irreducible(const FieldTower& tower, std::size_t level, std::size_t degree,
                                          std::uint64_t seed);

/// Rabin test: x^(Q^d) = x mod f and gcd(x^(Q^(d/r)) - x, f) = 1 for primes r | d.
[[nodiscard]] bool is_irreducible(const FieldTower& tower, const Polynomial& f);

/// Polynomial arithmetic over one level of a tower.
class PolyRing {
public:
    PolyRing(const FieldTower& tower, std::size_t level) : t_(tower), level_(level) {}

    [[nodiscard]] Polynomial zero() const { return {level_, {}}; }
    [[nodiscard]] Polynomial constant(const FieldElement& c) const;
    [[nodiscard]] Polynomial x() const;
    [[nodiscard]] Polynomial normalize(Polynomial f) const;

    [[nodiscard]] Polynomial add(const Polynomial& a, const Polynomial& b) const;
    [[nodiscard]] Polynomial sub(const Polynomial& a, const Polynomial& b) const;
    [[nodiscard]] Polynomial mul(const Polynomial& a, const Polynomial& b) const;
    /// Quotient and remainder; b must be nonzero.
    [[nodiscard]] std::pair<Polynomial, Polynomial> divmod(const Polynomial& a, const Polynomial& b) const;
    [[nodiscard]] Polynomial mod(const Polynomial& a, const Polynomial& b) const { return divmod(a, b).second; }
    /// Monic gcd (zero if both are zero).
    [[nodiscard]] Polynomial gcd(Polynomial a, Polynomial b) const;
    [[nodiscard]] Polynomial powmod(Polynomial base, std::uint64_t e, const Polynomial& modulus) const;
    [[nodiscard]] FieldElement eval(const Polynomial& f, const FieldElement& x) const;
    [[nodiscard]] Polynomial make_monic(const Polynomial& f) const;

private:
    const FieldTower& t_;
    std::size_t level_;
};

/// Parses "x^3+x+1" (integer coefficients, taken mod p) or a coefficient list
/// "[1,1,0,1]" whose entries are integers or flat/nested element arrays.
[[nodiscard]] Polynomial parse_polynomial(const FieldTower& tower, std::size_t level, std::string_view text);

/// Text form when every coefficient lies in F_p, coefficient-list form otherwise.
[[nodiscard]] std::string to_string(const FieldTower& tower, const Polynomial& f);

}  // namespace sidon
