#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sidon/certify.hpp"
#include "sidon/errors.hpp"
#include "sidon/orbit_code.hpp"
#include "sidon/presets.hpp"

using namespace sidon;
using testing_support::params;
using testing_support::tower;

TEST(Orbit, SubfieldOrbitOverF64) {
    const auto t = tower(2, {6});
    const OrbitReport r = enumerate_orbit(testing_support::subfield_space(t, 2));
    EXPECT_EQ(r.size, 21);
    EXPECT_EQ(r.t, 2u);
    EXPECT_EQ(r.stabilizer_count, 3u);
    EXPECT_EQ(r.max_dim, 0u);
    ASSERT_TRUE(r.distance);
    EXPECT_EQ(*r.distance, 4u);
    EXPECT_FALSE(r.degenerate);
    EXPECT_EQ(r.alphas_swept, 63u);
}

TEST(Orbit, SidonSpaceOverF729) {
    const PresetResult p = run_preset("lemma_4_1", params(3, 2, 6));
    const OrbitReport r = enumerate_orbit(p.spaces[0].realized.space);
    EXPECT_EQ(r.size, 364);
    EXPECT_EQ(r.t, 1u);
    EXPECT_EQ(r.max_dim, 1u);
    ASSERT_TRUE(r.distance);
    EXPECT_EQ(*r.distance, 2u);
}

TEST(Orbit, WholeFieldIsDegenerate) {
    const auto t = tower(3, {3});
    const OrbitReport r = enumerate_orbit(testing_support::subfield_space(t, 3));
    EXPECT_EQ(r.size, 1);
    EXPECT_TRUE(r.degenerate);
    EXPECT_FALSE(r.distance);
    EXPECT_TRUE(to_json(r).at("distance").is_null());
}

TEST(Orbit, AgreesWithElementSetOracle) {
    std::mt19937_64 rng(11);
    for (const auto& [p, n] : std::vector<std::pair<std::uint32_t, std::size_t>>{{2, 6}, {2, 8}, {3, 4}, {5, 3}}) {
        const auto t = tower(p, {n});
        for (int it = 0; it < 6; ++it) {
            const std::size_t k = 1 + rng() % (n - 1);
            std::vector<FieldElement> g;
            for (std::size_t i = 0; i < k; ++i) g.push_back(testing_support::random_element(*t, 1, rng));
            const Subspace v = Subspace::span(t, g);
            if (v.dim() == 0 || v.dim() == n) continue;
            const OrbitReport r = enumerate_orbit(v);
            const oracle::OrbitStats o = oracle::orbit_by_sets(*t, v.basis());
            EXPECT_EQ(r.size, o.size);
            EXPECT_EQ(r.distance, o.min_distance);
            // orbit-stabilizer over projective alphas
            EXPECT_EQ(r.size * r.stabilizer_count, oracle::projective_count(p, n));
            EXPECT_EQ(r.stabilizer_count, oracle::projective_count(p, r.t));
            EXPECT_EQ(n % r.t, 0u);
        }
    }
}

TEST(Orbit, ScalarMultipleHasSameOrbit) {
    std::mt19937_64 rng(12);
    const auto t = tower(2, {8});
    const Subspace v = Subspace::span(t, std::vector{testing_support::random_nonzero(*t, 1, rng),
                                                     testing_support::random_nonzero(*t, 1, rng)});
    const Subspace w = scalar_mul(testing_support::random_nonzero(*t, 1, rng), v);
    const auto a = orbit_codewords(v);
    const auto b = orbit_codewords(w);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i], b[i]);
    EXPECT_EQ(to_json(enumerate_orbit(v)).dump(), to_json(enumerate_orbit(w)).dump());
}

TEST(Orbit, BudgetExceeded) {
    const auto t = tower(2, {20});
    Budgets b;
    b.orbit = 1000;
    EXPECT_THROW((void)enumerate_orbit(testing_support::subfield_space(t, 4), b), BudgetExceeded);
}

TEST(Orbit, ImpliedReportMatchesEnumeration) {
    const PresetResult p = run_preset("lemma_4_1", params(2, 3, 12));
    const Subspace& v = p.spaces[0].realized.space;
    const SidonCertificate cert = is_sidon(v);
    ASSERT_TRUE(cert.sidon());
    const OrbitReport implied = implied_orbit_report(v, cert);
    const OrbitReport swept = enumerate_orbit(v);
    EXPECT_EQ(implied.method, OrbitMethod::ImpliedBySidon);
    EXPECT_EQ(implied.size, swept.size);
    EXPECT_EQ(implied.distance, swept.distance);
    EXPECT_EQ(implied.size, 4095);
}

TEST(Equivalence, HoldsOnGrassmannianSweep) {
    const auto t = tower(2, {6});
    std::size_t sidon = 0;
    for (GrassmannianIterator it(t, 2); !it.done(); it.next()) {
        const EquivalenceRecord r = verify_sidon_orbit_equivalence(it.current());
        EXPECT_TRUE(r.equivalence_holds);
        EXPECT_EQ(r.orbit_matches, r.sidon.sidon());
        sidon += r.sidon.sidon();
    }
    EXPECT_EQ(sidon, 630u);
}

TEST(Equivalence, RequiresTwoDimensions) {
    const auto t = tower(2, {6});
    try {
        (void)verify_sidon_orbit_equivalence(Subspace::span(t, std::vector{t->one(1)}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidArgument);
    }
}

TEST(Grassmannian, CountsMatchFormula) {
    for (const auto& [q, n, k] : std::vector<std::tuple<std::uint32_t, std::size_t, std::size_t>>{
             {2, 6, 2}, {2, 6, 3}, {3, 4, 2}, {2, 5, 1}, {5, 3, 2}}) {
        const auto t = tower(q, {n});
        std::uint64_t count = 0;
        std::set<std::string> keys;
        for (GrassmannianIterator it(t, k); !it.done(); it.next()) {
            const Subspace v = it.current();
            EXPECT_EQ(v.dim(), k);
            keys.insert(v.key());
            ++count;
        }
        EXPECT_EQ(count, oracle::gaussian_binomial_formula(n, k, q));
        EXPECT_EQ(keys.size(), count);
        EXPECT_EQ(gaussian_binomial(n, k, q), count);
    }
    EXPECT_EQ(gaussian_binomial(6, 2, 2), 651);
    EXPECT_EQ(gaussian_binomial(6, 3, 2), 1395);
    EXPECT_EQ(gaussian_binomial(4, 5, 2), 0);
}

TEST(Union, SelfUnionCollides) {
    const PresetResult p = run_preset("lemma_4_1", params(2, 2, 6));
    const Subspace& v = p.spaces[0].realized.space;
    const std::vector<Subspace> gens{v, scalar_mul(p.tower->generator(p.tower->top()), v)};
    const UnionCodeReport r = min_distance_union(gens);
    EXPECT_TRUE(r.collision);
    EXPECT_EQ(r.size, 63);
    EXPECT_EQ(r.sum_of_orbit_sizes, 126);
    ASSERT_EQ(r.cross.size(), 1u);
    EXPECT_TRUE(r.cross[0].same_orbit);
}

TEST(Union, CombinedConstructionDoublesTheCode) {
    const PresetResult p = run_preset("combined_4_21", params(3, 2, 6));
    ASSERT_EQ(p.spaces.size(), 2u);
    const std::vector<Subspace> gens{p.spaces[0].realized.space, p.spaces[1].realized.space};
    const UnionCodeReport r = min_distance_union(gens);
    EXPECT_FALSE(r.collision);
    EXPECT_EQ(r.size, 728);
    ASSERT_TRUE(r.distance);
    EXPECT_EQ(*r.distance, 2u);
    EXPECT_FALSE(r.distance_is_bound);
}

TEST(Union, CrossIntersectionAgreesWithOracle) {
    const PresetResult p = run_preset("combined_4_21", params(3, 1, 3));
    const auto& u = p.spaces[0].realized.space;
    const auto& v = p.spaces[1].realized.space;
    const UnionCodeReport r = min_distance_union(std::vector{u, v});
    ASSERT_EQ(r.cross.size(), 1u);
    EXPECT_EQ(r.cross[0].max_dim, oracle::cross_max_dim(*p.tower, u.basis(), v.basis()));
}
