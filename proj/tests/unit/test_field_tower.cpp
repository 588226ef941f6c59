#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "helpers.hpp"
#include "oracles.hpp"
#include "sidon/errors.hpp"
#include "sidon/field_tower.hpp"
#include "sidon/small_field.hpp"

using namespace sidon;
using testing_support::random_element;
using testing_support::random_nonzero;
using testing_support::tower;

namespace {

// Schoolbook product modulo the level-1 modulus, on plain integers.
std::vector<Coeff> naive_mul(const FieldTower& t, const FieldElement& a, const FieldElement& b) {
    const std::uint32_t p = t.characteristic();
    const Polynomial& f = t.level(1).modulus;
    const std::size_t d = f.coeffs.size() - 1;
    std::vector<std::uint32_t> prod(2 * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) prod[i + j] = (prod[i + j] + a.coeffs[i] * b.coeffs[j]) % p;
    }
    for (std::size_t i = 2 * d; i-- > d;) {
        const std::uint32_t c = prod[i];
        if (!c) continue;
        for (std::size_t j = 0; j <= d; ++j) {
            prod[i - d + j] = (prod[i - d + j] + p * p - c * f.coeffs[j].coeffs[0] % p) % p;
        }
    }
    return {prod.begin(), prod.begin() + static_cast<std::ptrdiff_t>(d)};
}

std::vector<std::uint32_t> digits(std::uint64_t idx, std::uint32_t p, std::size_t len) {
    std::vector<std::uint32_t> out(len);
    for (auto& x : out) {
        x = static_cast<std::uint32_t>(idx % p);
        idx /= p;
    }
    return out;
}

}  // namespace

TEST(SmallField, PrimesAndFactors) {
    EXPECT_TRUE(is_prime(2));
    EXPECT_TRUE(is_prime(65521));
    EXPECT_FALSE(is_prime(1));
    EXPECT_FALSE(is_prime(91));
    EXPECT_EQ(prime_factors(360), (std::vector<std::uint64_t>{2, 3, 5}));
    EXPECT_THROW((void)SmallField::prime(4), Error);
}

TEST(SmallField, PrimeFieldInverses) {
    const SmallField f = SmallField::prime(7);
    for (SmallField::Value a = 1; a < 7; ++a) EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
    EXPECT_EQ(f.add(5, 4), 2u);
    EXPECT_EQ(f.neg(3), 4u);
}

TEST(Irreducibility, MatchesTrialDivisionOverF2AndF3) {
    for (std::uint32_t p : {2u, 3u}) {
        const auto t = tower(p, {});
        const unsigned max_deg = p == 2 ? 8 : 5;
        for (unsigned d = 1; d <= max_deg; ++d) {
            std::uint64_t total = 1;
            for (unsigned i = 0; i < d; ++i) total *= p;
            std::uint64_t count = 0;
            for (std::uint64_t idx = 0; idx < total; ++idx) {
                auto c = digits(idx, p, d);
                c.push_back(1);
                nlohmann::json j = c;
                const Polynomial f = parse_polynomial(*t, 0, j.dump());
                const bool expect = oracle::irreducible_by_trial_division(p, c);
                ASSERT_EQ(is_irreducible(*t, f), expect) << "p=" << p << " f=" << j.dump();
                count += expect;
            }
            EXPECT_EQ(count, oracle::irreducible_count(p, d)) << "p=" << p << " d=" << d;
        }
    }
}

TEST(Irreducibility, SearchIsDeterministicAndIrreducible) {
    const auto t = tower(2, {3});
    const Polynomial a = find_irreducible(*t, 1, 4, 11);
    const Polynomial b = find_irreducible(*t, 1, 4, 11);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.degree(), 4);
    EXPECT_TRUE(is_irreducible(*t, a));
}

TEST(FieldTower, SingleLevelProductMatchesSchoolbook) {
    std::mt19937_64 rng(1);
    for (auto [p, d] : std::vector<std::pair<std::uint32_t, std::size_t>>{{2, 8}, {2, 20}, {3, 4}, {5, 3}, {3, 11}}) {
        const auto t = tower(p, {d}, 3);
        for (int it = 0; it < 200; ++it) {
            const auto a = random_element(*t, 1, rng);
            const auto b = random_element(*t, 1, rng);
            ASSERT_EQ(t->mul(a, b).coeffs, naive_mul(*t, a, b)) << "p=" << p << " d=" << d;
        }
    }
}

TEST(FieldTower, FieldAxiomsOnNestedTowers) {
    std::mt19937_64 rng(2);
    std::vector<TowerPtr> towers = {tower(2, {2, 3}), tower(3, {2, 2}), tower(2, {3, 7}), tower(2, {4, 5, 2})};
    const LevelSpec q4[] = {{"m", 3, std::nullopt, 5, {}}};
    towers.push_back(std::make_shared<const FieldTower>(FieldTower::build(2, 2, q4)));
    for (const auto& t : towers) {
        const std::size_t top = t->top();
        for (int it = 0; it < 60; ++it) {
            const auto a = random_element(*t, top, rng);
            const auto b = random_element(*t, top, rng);
            const auto c = random_element(*t, top, rng);
            ASSERT_EQ(t->mul(a, b), t->mul(b, a));
            ASSERT_EQ(t->mul(t->mul(a, b), c), t->mul(a, t->mul(b, c)));
            ASSERT_EQ(t->mul(a, t->add(b, c)), t->add(t->mul(a, b), t->mul(a, c)));
            ASSERT_EQ(t->sub(t->add(a, b), b), a);
            if (!t->is_zero(a)) ASSERT_TRUE(t->is_one(t->mul(a, t->inv(a))));
        }
    }
}

TEST(FieldTower, GeneratorsAreRootsOfTheirModuli) {
    const auto t = tower(3, {2, 3, 2}, 4);
    for (std::size_t i = 1; i < t->level_count(); ++i) {
        const FieldElement g = t->generator(i);
        // Evaluate the level-(i-1) modulus at g inside level i.
        FieldElement acc = t->zero(i);
        for (std::size_t j = t->level(i).modulus.coeffs.size(); j-- > 0;) {
            acc = t->add(t->mul(acc, g), t->lift(t->level(i).modulus.coeffs[j], i));
        }
        EXPECT_TRUE(t->is_zero(acc)) << "level " << i;
    }
}

TEST(FieldTower, MultiplicativeOrderDividesGroupOrder) {
    const auto t = tower(2, {2, 3});  // F_64
    for (const auto& x : oracle::all_elements(*t, t->top())) {
        if (t->is_zero(x)) continue;
        ASSERT_TRUE(t->is_one(t->pow(x, 63)));
    }
}

TEST(FieldTower, FrobeniusIsPowerQ) {
    std::mt19937_64 rng(3);
    const LevelSpec lv[] = {{"k", 2, std::nullopt, 1, {}}, {"g", 3, std::nullopt, 2, {}}};
    const auto t = std::make_shared<const FieldTower>(FieldTower::build(2, 2, lv));  // q = 4, n = 6
    EXPECT_EQ(t->q(), 4u);
    EXPECT_EQ(t->n(), 6u);
    for (int it = 0; it < 50; ++it) {
        const auto x = random_element(*t, t->top(), rng);
        EXPECT_EQ(t->frobenius(x, 1), t->pow(x, 4));
        EXPECT_EQ(t->frobenius(x, 2), t->pow(x, 16));
        EXPECT_EQ(t->frobenius(x, 6), x);
    }
}

TEST(FieldTower, SubfieldBasis) {
    const auto t = tower(2, {12});
    for (std::size_t d : {1u, 2u, 3u, 4u, 6u, 12u}) {
        const auto basis = t->subfield_basis(t->top(), d);
        ASSERT_EQ(basis.size(), d);
        for (const auto& b : basis) EXPECT_TRUE(t->in_subfield(b, d));
        EXPECT_EQ(Subspace::span(t, basis).dim(), d);
    }
    EXPECT_THROW((void)t->subfield_basis(t->top(), 5), Error);
}

TEST(FieldTower, InWMatchesPowerSet) {
    for (std::uint32_t q : {3u, 5u}) {
        for (std::size_t k : {1u, 2u, 3u}) {
            const auto t = tower(q, {k, 2});
            std::set<std::vector<Coeff>> powers;
            const auto sub = oracle::all_elements(*t, 1);
            for (const auto& y : sub) {
                if (!t->is_zero(y)) powers.insert(t->lift(t->pow(y, q - 1), t->top()).coeffs);
            }
            for (const auto& y : sub) {
                if (t->is_zero(y)) continue;
                const auto x = t->lift(y, t->top());
                ASSERT_EQ(t->in_W(x, k), powers.count(x.coeffs) == 1) << "q=" << q << " k=" << k;
            }
        }
    }
}

TEST(FieldTower, MinusOneIsSquareInF9NotF3) {
    const auto t3 = tower(3, {3});
    EXPECT_FALSE(t3->in_W(t3->constant(t3->top(), -1), 1));
    const auto t9 = tower(3, {2, 3});
    EXPECT_TRUE(t9->in_W(t9->constant(t9->top(), -1), 2));
}

TEST(FieldTower, InWErrors) {
    const auto t = tower(3, {2, 3});
    EXPECT_THROW((void)t->in_W(t->zero(t->top()), 2), Error);
    EXPECT_THROW((void)t->in_W(t->lift(t->generator(2), t->top()), 2), Error);
}

TEST(FieldTower, DescriptorRoundTrip) {
    const LevelSpec lv[] = {{"k", 2, std::nullopt, 1, {}}, {"gamma", 3, std::nullopt, 9, {}}};
    const FieldTower t = FieldTower::build(2, 2, lv, std::nullopt, 4);
    const FieldTower u = FieldTower::parse(t.descriptor());
    EXPECT_TRUE(t.same_field(u));
    EXPECT_EQ(t.descriptor(), u.descriptor());
    const FieldTower v = FieldTower::parse("p=3; q=p^1; levels=k:2:x^2+1,gamma:3:auto(5)");
    EXPECT_EQ(v.n(), 6u);
    EXPECT_EQ(to_string(v, v.level(1).modulus), "x^2+1");
}

TEST(FieldTower, ParseRejectsBadInput) {
    EXPECT_THROW((void)FieldTower::parse("p=4; levels=a:2:auto"), Error);
    EXPECT_THROW((void)FieldTower::parse("p=2; levels=a:2:x^2+1"), Error);  // (x+1)^2
    EXPECT_THROW((void)FieldTower::parse("p=2; levels=a:3:x^2+x+1"), Error);
    EXPECT_THROW((void)FieldTower::parse("levels=a:2:auto"), Error);
    try {
        (void)FieldTower::parse("p=9; levels=a:2:auto");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NonPrimeCharacteristic);
    }
}

TEST(FieldTower, JsonRoundTrip) {
    std::mt19937_64 rng(5);
    const auto t = tower(3, {2, 3});
    for (int it = 0; it < 20; ++it) {
        const auto x = random_element(*t, t->top(), rng);
        EXPECT_EQ(t->element_from_json(t->top(), t->to_json(x)), x);
        EXPECT_EQ(t->element_from_json(t->top(), nlohmann::json(x.coeffs)), x);
    }
}

TEST(FieldTower, ErrorsOnMisuse) {
    const auto t = tower(2, {3});
    EXPECT_THROW((void)t->inv(t->zero(1)), Error);
    const auto other = tower(3, {3});
    EXPECT_THROW((void)t->mul(t->one(0), t->one(1)), Error);
    EXPECT_FALSE(t->same_field(*other));
}

TEST(FieldTower, CoordinatesRoundTrip) {
    std::mt19937_64 rng(6);
    const LevelSpec lv[] = {{"m", 4, std::nullopt, 3, {}}};
    const auto t = std::make_shared<const FieldTower>(FieldTower::build(3, 2, lv));  // q = 9
    for (int it = 0; it < 30; ++it) {
        const auto x = random_nonzero(*t, t->top(), rng);
        const auto c = t->coordinates(x);
        ASSERT_EQ(c.size(), 4u);
        EXPECT_EQ(t->from_coordinates(t->top(), c), x);
        EXPECT_EQ(t->scale(x, 1), x);
    }
}
