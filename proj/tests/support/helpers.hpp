#pragma once

#include <initializer_list>
#include <memory>
#include <random>
#include <vector>

#include "sidon/field_tower.hpp"
#include "sidon/presets.hpp"
#include "sidon/subspace.hpp"

namespace testing_support {

inline sidon::TowerPtr tower(std::uint32_t p, std::initializer_list<std::size_t> degrees, std::uint64_t seed = 0) {
    const std::vector<std::size_t> d(degrees);
    return std::make_shared<const sidon::FieldTower>(sidon::FieldTower::make(p, d, seed));
}

inline sidon::FieldElement random_element(const sidon::FieldTower& t, std::size_t level, std::mt19937_64& rng) {
    std::vector<sidon::Coeff> c(t.level(level).flat_degree);
    for (auto& x : c) x = static_cast<sidon::Coeff>(rng() % t.characteristic());
    return t.element(level, c);
}

inline sidon::FieldElement random_nonzero(const sidon::FieldTower& t, std::size_t level, std::mt19937_64& rng) {
    for (;;) {
        auto x = random_element(t, level, rng);
        if (!t.is_zero(x)) return x;
    }
}

/// The subfield F_{q^d} of the top level as a subspace.
inline sidon::Subspace subfield_space(const sidon::TowerPtr& t, std::size_t d) {
    const auto b = t->subfield_basis(t->top(), d);
    return sidon::Subspace::span(t, b);
}

inline sidon::PresetParams params(std::uint64_t q, std::size_t k, std::size_t n) {
    sidon::PresetParams p;
    p.q = q;
    p.k = k;
    p.n = n;
    return p;
}

}  // namespace testing_support
