#include "sidon/small_field.hpp"

#include "sidon/errors.hpp"

namespace sidon {

bool is_prime(std::uint64_t n) noexcept {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

namespace {

// Multiplicative order check: g generates iff g^((Q-1)/r) != 1 for every prime r | Q-1.
template <class Pow>
bool is_primitive(std::uint32_t g, std::uint32_t order, const std::vector<std::uint64_t>& factors, Pow&& pow) {
    for (std::uint64_t r : factors) {
        if (pow(g, (order - 1) / r) == 1) return false;
    }
    return true;
}

}  // namespace

SmallField SmallField::prime(std::uint32_t p) {
    if (!is_prime(p)) throw Error(Errc::NonPrimeCharacteristic, std::to_string(p) + " is not prime");
    if (p > kMaxOrder) throw Error(Errc::InvalidArgument, "characteristic too large for table arithmetic");
    return from_multiplier(p, 1, [p](Value a, Value b) {
        return static_cast<Value>((static_cast<std::uint64_t>(a) * b) % p);
    });
}

SmallField SmallField::from_multiplier(std::uint32_t p, std::size_t flat_degree,
                                       const std::function<Value(Value, Value)>& mul) {
    std::uint64_t order = 1;
    for (std::size_t i = 0; i < flat_degree; ++i) {
        order *= p;
        if (order > kMaxOrder) throw Error(Errc::InvalidArgument, "field too large for table arithmetic");
    }
    SmallField f;
    f.p_ = p;
    f.degree_ = flat_degree;
    f.order_ = static_cast<std::uint32_t>(order);
    f.log_.assign(order, 0);
    f.exp_.assign(2 * (order - 1), 0);
    if (order == 2) {
        f.exp_ = {1, 1};
        f.log_ = {0, 0};
        return f;
    }

    auto slow_pow = [&](Value a, std::uint64_t e) {
        Value r = 1;
        while (e != 0) {
            if (e & 1U) r = mul(r, a);
            a = mul(a, a);
            e >>= 1U;
        }
        return r;
    };
    const auto factors = prime_factors(order - 1);
    Value g = 2;
    while (g < order && !is_primitive(g, f.order_, factors, slow_pow)) ++g;
    if (g >= order) throw Error(Errc::InvalidArgument, "no primitive element: multiplier is not a field");

    Value x = 1;
    for (std::uint32_t i = 0; i < order - 1; ++i) {
        f.exp_[i] = x;
        f.exp_[i + order - 1] = x;
        f.log_[x] = i;
        x = mul(x, g);
    }
    return f;
}

SmallField::Value SmallField::pow(Value a, std::uint64_t e) const noexcept {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % (order_ - 1))) % (order_ - 1)];
}

SmallField::Value SmallField::encode(std::span<const Coeff> flat) const noexcept {
    Value v = 0;
    for (std::size_t i = flat.size(); i-- > 0;) v = v * p_ + flat[i];
    return v;
}

void SmallField::decode(Value v, std::span<Coeff> flat) const noexcept {
    for (auto& c : flat) {
        c = static_cast<Coeff>(v % p_);
        v /= p_;
    }
}

SmallField::Value SmallField::add_digits(Value a, Value b) const noexcept {
    Value out = 0;
    Value scale = 1;
    for (std::size_t i = 0; i < degree_; ++i) {
        Value s = a % p_ + b % p_;
        if (s >= p_) s -= p_;
        out += s * scale;
        scale *= p_;
        a /= p_;
        b /= p_;
    }
    return out;
}

SmallField::Value SmallField::neg_digits(Value a) const noexcept {
    Value out = 0;
    Value scale = 1;
    for (std::size_t i = 0; i < degree_; ++i) {
        Value d = a % p_;
        out += (d == 0 ? 0 : p_ - d) * scale;
        scale *= p_;
        a /= p_;
    }
    return out;
}

}  // namespace sidon
