#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sidon/field_tower.hpp"
#include "sidon/linalg.hpp"

namespace sidon {

/// An F_q-subspace of the top field of a tower, stored as its RREF coordinate
/// matrix. Two subspaces of one ambient are equal iff the matrices are equal.
class Subspace {
public:
    /// Zero subspace of the tower's top field.
    explicit Subspace(TowerPtr tower);

    /// Smallest F_q-subspace containing `elements`. Elements below the top level
    /// are lifted first.
    static Subspace span(TowerPtr tower, std::span<const FieldElement> elements);
    /// Row space of an arbitrary coordinate matrix with n columns.
    static Subspace from_rows(TowerPtr tower, DenseMatrix rows);

    [[nodiscard]] const FieldTower& tower() const noexcept { return *tower_; }
    [[nodiscard]] const TowerPtr& tower_ptr() const noexcept { return tower_; }
    [[nodiscard]] std::size_t dim() const noexcept { return m_.rows; }
    [[nodiscard]] std::size_t n() const noexcept { return m_.cols; }
    [[nodiscard]] std::uint32_t q() const noexcept { return tower_->q(); }
    [[nodiscard]] const DenseMatrix& matrix() const noexcept { return m_; }

    /// The RREF rows as top-field elements.
    [[nodiscard]] std::vector<FieldElement> basis() const;
    [[nodiscard]] bool contains(const FieldElement& x) const;
    /// Number of projective points (q^dim - 1)/(q - 1).
    [[nodiscard]] std::uint64_t projective_count() const;
    /// Element sum_i c_i b_i for the projective index `idx` (see projective_vector).
    [[nodiscard]] FieldElement projective_point(std::uint64_t idx) const;

    /// Packed bytes of the RREF matrix; equal keys iff equal subspaces.
    [[nodiscard]] std::string key() const;

    /// Same ambient: identical tower object or structurally equal towers.
    [[nodiscard]] bool same_ambient(const Subspace& other) const noexcept;

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.m_ == b.m_ && a.same_ambient(b); }

private:
    Subspace(TowerPtr tower, DenseMatrix rref_matrix);

    TowerPtr tower_;
    DenseMatrix m_;
};

/// Projective points of F_q^d indexed by [0, (q^d-1)/(q-1)): vectors whose first
/// nonzero entry is 1. Index 0 is e_{d-1}; the blocks for leading position
/// j = d-1, d-2, ..., 0 follow each other, and within a block the trailing
/// entries are the base-q digits of the offset (last entry least significant).
void projective_vector(std::uint32_t q, std::uint64_t idx, std::span<SmallField::Value> out);

/// (q^d - 1)/(q - 1); throws BudgetExceeded-free Error on 64-bit overflow.
[[nodiscard]] std::uint64_t projective_size(std::uint32_t q, std::size_t d);

/// Scales the coordinate vector so its first nonzero entry is 1; returns the
/// applied factor (0 for the zero vector).
SmallField::Value normalize_projective(const SmallField& f, std::span<SmallField::Value> v);

/// Packs F_q coordinates into a hashable byte string (bits for q = 2, two bytes
/// per entry otherwise).
[[nodiscard]] std::string pack_coordinates(std::uint32_t q, std::span<const SmallField::Value> v);

[[nodiscard]] Subspace sum(const Subspace& u, const Subspace& v);
[[nodiscard]] Subspace intersect(const Subspace& u, const Subspace& v);
/// dim U + dim V - rank of the stacked bases.
[[nodiscard]] std::size_t intersection_dim(const Subspace& u, const Subspace& v);
/// {alpha v : v in V}; alpha must be nonzero.
[[nodiscard]] Subspace scalar_mul(const FieldElement& alpha, const Subspace& v);
/// F_q-span of all products uv, from products of basis elements.
[[nodiscard]] Subspace product_space(const Subspace& u, const Subspace& v);
/// True iff dim(sum of spaces) equals the sum of their dimensions.
[[nodiscard]] bool direct_sum_check(std::span<const Subspace> spaces);
/// dim U + dim V - 2 dim(U cap V).
[[nodiscard]] std::size_t distance(const Subspace& u, const Subspace& v);

/// {ambient, q, n, dim, basis: [[F_p coefficients]]}, plus hex rows when p = 2.
[[nodiscard]] nlohmann::json to_json(const Subspace& v);
/// Reads either the basis arrays or, when present alone, the hex rows.
[[nodiscard]] Subspace subspace_from_json(TowerPtr tower, const nlohmann::json& j);

}  // namespace sidon
