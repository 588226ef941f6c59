#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace sidon {

/// Coefficient of an element over the prime field F_p.
using Coeff = std::uint16_t;

/// Table-driven arithmetic for a field of order Q = p^f <= 2^16.
///
/// Elements are encoded as integers in [0, Q): the flat F_p coefficient vector
/// c_0..c_{f-1} maps to sum c_i p^i. Multiplication goes through discrete
/// log/antilog tables; addition is digit-wise (plain XOR when p = 2).
class SmallField {
public:
    using Value = std::uint32_t;

    static constexpr std::uint32_t kMaxOrder = 1u << 16;

    /// F_p itself. Requires p prime and p <= kMaxOrder.
    static SmallField prime(std::uint32_t p);

    /// Builds tables for an extension of degree `flat_degree` over F_p whose
    /// multiplication on encoded values is `mul`. Used by the tower to table any
    /// level small enough, whatever its internal nesting.
    static SmallField from_multiplier(std::uint32_t p, std::size_t flat_degree,
                                      const std::function<Value(Value, Value)>& mul);

    [[nodiscard]] std::uint32_t characteristic() const noexcept { return p_; }
    [[nodiscard]] std::uint32_t order() const noexcept { return order_; }
    [[nodiscard]] std::size_t flat_degree() const noexcept { return degree_; }

    [[nodiscard]] Value add(Value a, Value b) const noexcept {
        if (p_ == 2) return a ^ b;
        if (degree_ == 1) {
            Value s = a + b;
            return s >= p_ ? s - p_ : s;
        }
        return add_digits(a, b);
    }
    [[nodiscard]] Value neg(Value a) const noexcept {
        if (p_ == 2) return a;
        if (degree_ == 1) return a == 0 ? 0 : p_ - a;
        return neg_digits(a);
    }
    [[nodiscard]] Value sub(Value a, Value b) const noexcept { return add(a, neg(b)); }
    [[nodiscard]] Value mul(Value a, Value b) const noexcept {
        if (a == 0 || b == 0) return 0;
        return exp_[log_[a] + log_[b]];
    }
    /// Requires a != 0.
    [[nodiscard]] Value inv(Value a) const noexcept { return exp_[(order_ - 1) - log_[a]]; }
    [[nodiscard]] Value pow(Value a, std::uint64_t e) const noexcept;
    /// log of a nonzero value relative to the table's primitive element.
    [[nodiscard]] std::uint32_t log(Value a) const noexcept { return log_[a]; }
    [[nodiscard]] Value exp(std::uint64_t e) const noexcept { return exp_[e % (order_ - 1)]; }

    [[nodiscard]] Value encode(std::span<const Coeff> flat) const noexcept;
    void decode(Value v, std::span<Coeff> flat) const noexcept;

private:
    SmallField() = default;

    [[nodiscard]] Value add_digits(Value a, Value b) const noexcept;
    [[nodiscard]] Value neg_digits(Value a) const noexcept;

    std::uint32_t p_ = 2;
    std::size_t degree_ = 1;
    std::uint32_t order_ = 2;
    std::vector<Value> exp_;  // length 2(Q-1) so that log a + log b needs no reduction
    std::vector<std::uint32_t> log_;
};

/// Deterministic primality test for 32-bit values.
[[nodiscard]] bool is_prime(std::uint64_t n) noexcept;

/// Distinct prime factors in increasing order.
[[nodiscard]] std::vector<std::uint64_t> prime_factors(std::uint64_t n);

}  // namespace sidon
