#include "sidon/field_tower.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sidon/errors.hpp"
#include "sidon/linalg.hpp"

namespace sidon {

namespace {

using Value = SmallField::Value;

void add_flat(Coeff* acc, const Coeff* x, std::size_t len, std::uint32_t p) {
    if (p == 2) {
        for (std::size_t i = 0; i < len; ++i) acc[i] ^= x[i];
        return;
    }
    for (std::size_t i = 0; i < len; ++i) {
        std::uint32_t s = std::uint32_t{acc[i]} + x[i];
        acc[i] = static_cast<Coeff>(s >= p ? s - p : s);
    }
}

void sub_flat(Coeff* acc, const Coeff* x, std::size_t len, std::uint32_t p) {
    if (p == 2) {
        for (std::size_t i = 0; i < len; ++i) acc[i] ^= x[i];
        return;
    }
    for (std::size_t i = 0; i < len; ++i) {
        std::uint32_t s = std::uint32_t{acc[i]} + (x[i] == 0 ? 0 : p - x[i]);
        acc[i] = static_cast<Coeff>(s >= p ? s - p : s);
    }
}

bool all_zero(const Coeff* x, std::size_t len) {
    return std::all_of(x, x + len, [](Coeff c) { return c == 0; });
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// Splits on `sep` outside brackets.
std::vector<std::string> split_top(std::string_view s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
    return out;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
    const std::string t = trim(s);
    if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        throw Error(Errc::ParseError, "expected an unsigned integer for " + std::string(what) + ", got '" + t + "'");
    }
    return std::stoull(t);
}

void flatten_json(const nlohmann::json& j, std::vector<std::int64_t>& out) {
    if (j.is_array()) {
        for (const auto& e : j) flatten_json(e, out);
    } else if (j.is_number_integer()) {
        out.push_back(j.get<std::int64_t>());
    } else {
        throw Error(Errc::ParseError, "field element entries must be integers or arrays");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

void FieldTower::push_prime(std::uint32_t p) {
    if (!is_prime(p)) throw Error(Errc::NonPrimeCharacteristic, std::to_string(p) + " is not prime");
    p_ = p;
    Level lv;
    lv.name = "p";
    lv.table = SmallField::prime(p);
    levels_.push_back(std::move(lv));
}

void FieldTower::push_level(std::string name, Polynomial modulus, std::optional<std::uint64_t> seed) {
    const Level& prev = levels_.back();
    Level lv;
    lv.name = std::move(name);
    lv.degree = static_cast<std::size_t>(modulus.degree());
    lv.flat_degree = prev.flat_degree * lv.degree;
    lv.seed = seed;
    if (prev.table) {
        for (const auto& c : modulus.coeffs) lv.modulus_encoded.push_back(prev.table->encode(c.coeffs));
    }
    lv.modulus = std::move(modulus);
    levels_.push_back(std::move(lv));

    std::uint64_t order = 1;
    bool small = true;
    for (std::size_t i = 0; i < levels_.back().flat_degree && small; ++i) {
        order *= p_;
        small = order <= SmallField::kMaxOrder;
    }
    if (!small) return;
    const std::size_t idx = levels_.size() - 1;
    const std::size_t flat = levels_.back().flat_degree;
    const SmallField& prime = *levels_.front().table;
    auto table = SmallField::from_multiplier(p_, flat, [&](Value a, Value b) {
        std::vector<Coeff> fa(flat), fb(flat), out(flat);
        prime.decode(a, fa);
        prime.decode(b, fb);
        // decode() on the prime table splits digits, which is all that is needed here
        mul_into(idx, fa.data(), fb.data(), out.data());
        Value v = 0;
        for (std::size_t i = flat; i-- > 0;) v = v * p_ + out[i];
        return v;
    });
    levels_.back().table = std::move(table);
}

FieldTower FieldTower::build(std::uint32_t p, std::size_t q_exponent, std::span<const LevelSpec> levels,
                             std::optional<std::string> q_polynomial, std::uint64_t q_seed) {
    if (q_exponent < 1) throw Error(Errc::InvalidArgument, "q exponent must be >= 1");
    FieldTower t;
    t.push_prime(p);
    t.q_exponent_ = q_exponent;

    auto add_level = [&t](const std::string& name, std::size_t degree, const std::optional<std::string>& poly,
                          std::uint64_t seed, const PolynomialFilter& filter) {
        if (degree < 1) throw Error(Errc::NoIrreducibleFound, "level '" + name + "' has degree < 1");
        const std::size_t below = t.top();
        if (poly) {
            Polynomial f = parse_polynomial(t, below, *poly);
            if (f.degree() != static_cast<int>(degree)) {
                throw Error(Errc::InvalidArgument, "level '" + name + "': polynomial degree does not match");
            }
            if (!t.is_one(f.coeffs.back())) throw Error(Errc::InvalidArgument, "level '" + name + "': not monic");
            if (!is_irreducible(t, f)) throw Error(Errc::InvalidArgument, "level '" + name + "': not irreducible");
            t.push_level(name, std::move(f), std::nullopt);
            return;
        }
        constexpr std::uint64_t kMaxFilterAttempts = 100000;
        for (std::uint64_t s = seed; s < seed + kMaxFilterAttempts; ++s) {
            Polynomial f = find_irreducible(t, below, degree, s);
            if (!filter || filter(t, f)) {
                t.push_level(name, std::move(f), s);
                return;
            }
        }
        throw Error(Errc::NoIrreducibleFound, "level '" + name + "': no candidate satisfied the filter");
    };

    if (q_exponent > 1) add_level("q", q_exponent, q_polynomial, q_seed, {});
    if (t.q() > SmallField::kMaxOrder) throw Error(Errc::InvalidArgument, "q too large");
    for (const auto& spec : levels) add_level(spec.name, spec.degree, spec.polynomial, spec.seed, spec.filter);
    return t;
}

FieldTower FieldTower::make(std::uint32_t p, std::span<const std::size_t> level_degrees, std::uint64_t seed) {
    std::vector<LevelSpec> specs;
    for (std::size_t i = 0; i < level_degrees.size(); ++i) {
        specs.push_back({"L" + std::to_string(i + 1), level_degrees[i], std::nullopt, seed + i, {}});
    }
    return build(p, 1, specs);
}

FieldTower FieldTower::parse(std::string_view descriptor) {
    std::optional<std::uint32_t> p;
    std::size_t q_exp = 1;
    std::optional<std::string> q_poly;
    std::uint64_t q_seed = 0;
    std::vector<LevelSpec> specs;

    auto parse_source = [](const std::string& src, std::optional<std::string>& poly, std::uint64_t& seed) {
        if (src.rfind("auto", 0) == 0) {
            const auto open = src.find('(');
            const auto close = src.find(')');
            if (open == std::string::npos || close == std::string::npos || close < open) {
                seed = 0;
                if (trim(src) != "auto") throw Error(Errc::ParseError, "bad auto spec '" + src + "'");
            } else {
                seed = parse_uint(src.substr(open + 1, close - open - 1), "auto seed");
            }
        } else {
            poly = src;
        }
    };

    for (const auto& part : split_top(descriptor, ';')) {
        if (part.empty()) continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "expected key=value in '" + part + "'");
        const std::string key = trim(part.substr(0, eq));
        const std::string value = trim(part.substr(eq + 1));
        if (key == "p") {
            p = static_cast<std::uint32_t>(parse_uint(value, "p"));
        } else if (key == "q") {
            const auto colon = value.find(':');
            const std::string head = trim(value.substr(0, colon));
            if (head.rfind("p^", 0) == 0) {
                q_exp = parse_uint(head.substr(2), "q exponent");
            } else if (head == "p") {
                q_exp = 1;
            } else {
                if (!p) throw Error(Errc::ParseError, "p must precede a numeric q");
                std::uint64_t q = parse_uint(head, "q");
                q_exp = 0;
                std::uint64_t acc = 1;
                while (acc < q) {
                    acc *= *p;
                    ++q_exp;
                }
                if (acc != q || q_exp == 0) throw Error(Errc::ParseError, "q is not a power of p");
            }
            if (colon != std::string::npos) parse_source(trim(value.substr(colon + 1)), q_poly, q_seed);
        } else if (key == "levels") {
            for (const auto& lv : split_top(value, ',')) {
                if (lv.empty()) continue;
                const auto c1 = lv.find(':');
                const auto c2 = c1 == std::string::npos ? std::string::npos : lv.find(':', c1 + 1);
                if (c2 == std::string::npos) throw Error(Errc::ParseError, "level must be name:degree:source, got '" + lv + "'");
                LevelSpec spec;
                spec.name = trim(lv.substr(0, c1));
                spec.degree = parse_uint(lv.substr(c1 + 1, c2 - c1 - 1), "level degree");
                parse_source(trim(lv.substr(c2 + 1)), spec.polynomial, spec.seed);
                specs.push_back(std::move(spec));
            }
        } else {
            throw Error(Errc::ParseError, "unknown descriptor key '" + key + "'");
        }
    }
    if (!p) throw Error(Errc::ParseError, "descriptor lacks p");
    return build(*p, q_exp, specs, q_poly, q_seed);
}

std::string FieldTower::descriptor() const {
    std::ostringstream os;
    os << "p=" << p_ << "; q=p^" << q_exponent_;
    if (q_exponent_ > 1) os << ":" << to_string(*this, levels_[1].modulus);
    os << "; levels=";
    bool first = true;
    for (std::size_t i = q_level() + 1; i < levels_.size(); ++i) {
        if (!first) os << ",";
        first = false;
        os << levels_[i].name << ":" << levels_[i].degree << ":" << to_string(*this, levels_[i].modulus);
    }
    return os.str();
}

std::optional<std::size_t> FieldTower::find_level(std::string_view name) const {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (levels_[i].name == name) return i;
    }
    return std::nullopt;
}

std::size_t FieldTower::degree_over_q(std::size_t i) const {
    if (i < q_level()) throw Error(Errc::NotASubLevel, "level lies below the code base F_q");
    return levels_.at(i).flat_degree / q_exponent_;
}

bool FieldTower::same_field(const FieldTower& other) const noexcept {
    if (p_ != other.p_ || q_exponent_ != other.q_exponent_ || levels_.size() != other.levels_.size()) return false;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        if (levels_[i].degree != other.levels_[i].degree || !(levels_[i].modulus == other.levels_[i].modulus)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Elements

void FieldTower::check_level(const FieldElement& x) const {
    if (x.level >= levels_.size() || x.coeffs.size() != levels_[x.level].flat_degree) {
        throw Error(Errc::FieldMismatch, "element does not belong to this tower");
    }
}

void FieldTower::check_same(const FieldElement& a, const FieldElement& b) const {
    check_level(a);
    check_level(b);
    if (a.level != b.level) {
        throw Error(Errc::FieldMismatch, "operands at levels " + std::to_string(a.level) + " and " +
                                             std::to_string(b.level) + "; lift first");
    }
}

FieldElement FieldTower::zero(std::size_t level) const {
    return {level, std::vector<Coeff>(levels_.at(level).flat_degree, 0)};
}

FieldElement FieldTower::one(std::size_t level) const { return constant(level, 1); }

FieldElement FieldTower::constant(std::size_t level, std::int64_t c) const {
    FieldElement x = zero(level);
    const std::int64_t p = p_;
    x.coeffs[0] = static_cast<Coeff>(((c % p) + p) % p);
    return x;
}

FieldElement FieldTower::generator(std::size_t level) const {
    if (level == 0) return one(0);
    const Level& lv = levels_.at(level);
    if (lv.degree == 1) return lift(neg(lv.modulus.coeffs[0]), level);
    FieldElement x = zero(level);
    x.coeffs[levels_[level - 1].flat_degree] = 1;
    return x;
}

FieldElement FieldTower::element(std::size_t level, std::vector<Coeff> flat) const {
    if (level >= levels_.size()) throw Error(Errc::FieldMismatch, "no such level");
    if (flat.size() != levels_[level].flat_degree) {
        throw Error(Errc::FieldMismatch, "expected " + std::to_string(levels_[level].flat_degree) + " coefficients");
    }
    for (auto c : flat) {
        if (c >= p_) throw Error(Errc::InvalidArgument, "coefficient out of range");
    }
    return {level, std::move(flat)};
}

bool FieldTower::is_zero(const FieldElement& x) const noexcept { return all_zero(x.coeffs.data(), x.coeffs.size()); }

bool FieldTower::is_one(const FieldElement& x) const noexcept {
    return !x.coeffs.empty() && x.coeffs[0] == 1 && all_zero(x.coeffs.data() + 1, x.coeffs.size() - 1);
}

FieldElement FieldTower::add(const FieldElement& a, const FieldElement& b) const {
    check_same(a, b);
    FieldElement r = a;
    add_flat(r.coeffs.data(), b.coeffs.data(), r.coeffs.size(), p_);
    return r;
}

FieldElement FieldTower::sub(const FieldElement& a, const FieldElement& b) const {
    check_same(a, b);
    FieldElement r = a;
    sub_flat(r.coeffs.data(), b.coeffs.data(), r.coeffs.size(), p_);
    return r;
}

FieldElement FieldTower::neg(const FieldElement& a) const {
    check_level(a);
    FieldElement r = zero(a.level);
    sub_flat(r.coeffs.data(), a.coeffs.data(), r.coeffs.size(), p_);
    return r;
}

void FieldTower::mul_into(std::size_t level, const Coeff* a, const Coeff* b, Coeff* out) const {
    const Level& lv = levels_[level];
    if (lv.table) {
        const std::size_t flat = lv.flat_degree;
        const Value v = lv.table->mul(lv.table->encode({a, flat}), lv.table->encode({b, flat}));
        lv.table->decode(v, {out, flat});
        return;
    }
    const Level& pv = levels_[level - 1];
    const std::size_t d = lv.degree;
    const std::size_t w = pv.flat_degree;

    if (pv.table) {
        const SmallField& s = *pv.table;
        std::vector<Value> ae(d), be(d), prod(2 * d - 1, 0);
        for (std::size_t i = 0; i < d; ++i) {
            ae[i] = s.encode({a + i * w, w});
            be[i] = s.encode({b + i * w, w});
        }
        for (std::size_t i = 0; i < d; ++i) {
            if (ae[i] == 0) continue;
            for (std::size_t j = 0; j < d; ++j) {
                if (be[j] != 0) prod[i + j] = s.add(prod[i + j], s.mul(ae[i], be[j]));
            }
        }
        for (std::size_t j = 2 * d - 1; j-- > d;) {
            const Value c = prod[j];
            if (c == 0) continue;
            for (std::size_t t = 0; t < d; ++t) {
                const Value m = lv.modulus_encoded[t];
                if (m != 0) prod[j - d + t] = s.sub(prod[j - d + t], s.mul(c, m));
            }
        }
        for (std::size_t i = 0; i < d; ++i) s.decode(prod[i], {out + i * w, w});
        return;
    }

    std::vector<Coeff> prod((2 * d - 1) * w, 0);
    std::vector<Coeff> tmp(w);
    for (std::size_t i = 0; i < d; ++i) {
        if (all_zero(a + i * w, w)) continue;
        for (std::size_t j = 0; j < d; ++j) {
            if (all_zero(b + j * w, w)) continue;
            mul_into(level - 1, a + i * w, b + j * w, tmp.data());
            add_flat(prod.data() + (i + j) * w, tmp.data(), w, p_);
        }
    }
    std::vector<Coeff> c(w);
    for (std::size_t j = 2 * d - 1; j-- > d;) {
        if (all_zero(prod.data() + j * w, w)) continue;
        std::copy_n(prod.data() + j * w, w, c.data());
        for (std::size_t t = 0; t < d; ++t) {
            const auto& m = lv.modulus.coeffs[t].coeffs;
            if (all_zero(m.data(), w)) continue;
            mul_into(level - 1, c.data(), m.data(), tmp.data());
            sub_flat(prod.data() + (j - d + t) * w, tmp.data(), w, p_);
        }
    }
    std::copy_n(prod.data(), d * w, out);
}

FieldElement FieldTower::mul(const FieldElement& a, const FieldElement& b) const {
    check_same(a, b);
    FieldElement r = zero(a.level);
    mul_into(a.level, a.coeffs.data(), b.coeffs.data(), r.coeffs.data());
    return r;
}

FieldElement FieldTower::inv_generic(const FieldElement& a) const {
    // Extended Euclid on (modulus, a) over the previous level.
    const std::size_t level = a.level;
    const std::size_t below = level - 1;
    const Level& lv = levels_[level];
    const std::size_t w = levels_[below].flat_degree;
    PolyRing ring(*this, below);

    Polynomial pa{below, {}};
    for (std::size_t i = 0; i < lv.degree; ++i) {
        pa.coeffs.push_back({below, std::vector<Coeff>(a.coeffs.begin() + static_cast<std::ptrdiff_t>(i * w),
                                                       a.coeffs.begin() + static_cast<std::ptrdiff_t>((i + 1) * w))});
    }
    Polynomial r0 = lv.modulus;
    Polynomial r1 = ring.normalize(std::move(pa));
    Polynomial s0 = ring.zero();
    Polynomial s1 = ring.constant(one(below));
    while (r1.degree() >= 0) {
        auto [quot, rem] = ring.divmod(r0, r1);
        Polynomial s2 = ring.sub(s0, ring.mul(quot, s1));
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r0 is a nonzero constant because the modulus is irreducible.
    const FieldElement c_inv = inv(r0.coeffs.at(0));
    FieldElement out = zero(level);
    for (std::size_t i = 0; i < s0.coeffs.size(); ++i) {
        const FieldElement ci = mul(s0.coeffs[i], c_inv);
        std::copy(ci.coeffs.begin(), ci.coeffs.end(), out.coeffs.begin() + static_cast<std::ptrdiff_t>(i * w));
    }
    return out;
}

FieldElement FieldTower::inv(const FieldElement& a) const {
    check_level(a);
    if (is_zero(a)) throw Error(Errc::DivisionByZero, "inverse of zero");
    const Level& lv = levels_[a.level];
    if (lv.table) {
        FieldElement r = zero(a.level);
        lv.table->decode(lv.table->inv(lv.table->encode(a.coeffs)), r.coeffs);
        return r;
    }
    return inv_generic(a);
}

FieldElement FieldTower::pow(const FieldElement& a, std::uint64_t e) const {
    check_level(a);
    const Level& lv = levels_[a.level];
    if (lv.table) {
        FieldElement r = zero(a.level);
        lv.table->decode(lv.table->pow(lv.table->encode(a.coeffs), e), r.coeffs);
        return r;
    }
    FieldElement result = one(a.level);
    FieldElement base = a;
    while (e != 0) {
        if (e & 1U) result = mul(result, base);
        e >>= 1U;
        if (e != 0) base = mul(base, base);
    }
    return result;
}

FieldElement FieldTower::frobenius(const FieldElement& x, std::uint64_t i) const {
    check_level(x);
    if (x.level < q_level()) return x;  // F_p is fixed by every power of Frobenius
    const std::uint64_t period = degree_over_q(x.level);
    i %= period;
    if (i == 0) return x;
    const Level& lv = levels_[x.level];
    if (lv.table) {
        const std::uint64_t m = lv.table->order() - 1;
        std::uint64_t e = 1;
        for (std::uint64_t k = 0; k < i; ++k) e = (e * q()) % m;
        FieldElement r = zero(x.level);
        lv.table->decode(lv.table->pow(lv.table->encode(x.coeffs), e == 0 ? m : e), r.coeffs);
        return r;
    }
    FieldElement r = x;
    for (std::uint64_t k = 0; k < i; ++k) r = pow(r, q());
    return r;
}

FieldElement FieldTower::lift(const FieldElement& x, std::size_t target_level) const {
    check_level(x);
    if (target_level >= levels_.size() || x.level > target_level) {
        throw Error(Errc::NotASubLevel, "cannot lift level " + std::to_string(x.level) + " to level " +
                                            std::to_string(target_level));
    }
    FieldElement r = zero(target_level);
    std::copy(x.coeffs.begin(), x.coeffs.end(), r.coeffs.begin());
    return r;
}

std::vector<Value> FieldTower::coordinates(const FieldElement& x) const {
    check_level(x);
    if (x.level < q_level()) throw Error(Errc::NotASubLevel, "element lies below F_q");
    const std::size_t e = q_exponent_;
    const SmallField& b = base();
    std::vector<Value> out(x.coeffs.size() / e);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = b.encode({x.coeffs.data() + j * e, e});
    return out;
}

FieldElement FieldTower::from_coordinates(std::size_t level, std::span<const Value> coords) const {
    FieldElement x = zero(level);
    const std::size_t e = q_exponent_;
    if (coords.size() * e != x.coeffs.size()) throw Error(Errc::FieldMismatch, "coordinate count mismatch");
    const SmallField& b = base();
    for (std::size_t j = 0; j < coords.size(); ++j) b.decode(coords[j], {x.coeffs.data() + j * e, e});
    return x;
}

FieldElement FieldTower::scale(const FieldElement& x, Value lambda) const {
    auto c = coordinates(x);
    const SmallField& b = base();
    for (auto& v : c) v = b.mul(v, lambda);
    return from_coordinates(x.level, c);
}

std::vector<FieldElement> FieldTower::subfield_basis(std::size_t level, std::size_t d) const {
    const std::size_t n = degree_over_q(level);
    if (d == 0 || n % d != 0) {
        throw Error(Errc::DegreeNotDividing, std::to_string(d) + " does not divide " + std::to_string(n));
    }
    DenseMatrix images(n, n);
    std::vector<Value> unit(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(unit.begin(), unit.end(), 0);
        unit[j] = 1;
        const FieldElement b = from_coordinates(level, unit);
        const auto img = coordinates(sub(frobenius(b, d), b));
        std::copy(img.begin(), img.end(), images.row(j).begin());
    }
    const DenseMatrix kernel = left_kernel(images, base());
    std::vector<FieldElement> out;
    for (std::size_t r = 0; r < kernel.rows; ++r) out.push_back(from_coordinates(level, kernel.row(r)));
    return out;
}

bool FieldTower::in_subfield(const FieldElement& x, std::size_t d) const { return frobenius(x, d) == x; }

bool FieldTower::in_W(const FieldElement& c, std::size_t k) const {
    check_level(c);
    if (is_zero(c)) throw Error(Errc::ZeroArgument, "in_W is undefined at 0");
    if (k == 0) throw Error(Errc::InvalidArgument, "k must be positive");
    if (!in_subfield(c, k)) throw Error(Errc::NotInSubfield, "element is not in F_{q^" + std::to_string(k) + "}");
    FieldElement norm = c;
    FieldElement conj = c;
    for (std::size_t i = 1; i < k; ++i) {
        conj = frobenius(conj, 1);
        norm = mul(norm, conj);
    }
    return is_one(norm);
}

nlohmann::json FieldTower::to_json(const FieldElement& x) const {
    check_level(x);
    auto rec = [this](auto&& self, std::size_t level, const Coeff* ptr) -> nlohmann::json {
        if (level == 0) return nlohmann::json(static_cast<int>(*ptr));
        nlohmann::json arr = nlohmann::json::array();
        const std::size_t w = levels_[level - 1].flat_degree;
        for (std::size_t i = 0; i < levels_[level].degree; ++i) arr.push_back(self(self, level - 1, ptr + i * w));
        return arr;
    };
    return rec(rec, x.level, x.coeffs.data());
}

FieldElement FieldTower::element_from_json(std::size_t level, const nlohmann::json& j) const {
    std::vector<std::int64_t> flat;
    flatten_json(j, flat);
    if (level >= levels_.size()) throw Error(Errc::FieldMismatch, "no such level");
    const std::size_t want = levels_[level].flat_degree;
    if (flat.size() > want) throw Error(Errc::ParseError, "too many coefficients for level '" + levels_[level].name + "'");
    flat.resize(want, 0);
    FieldElement x = zero(level);
    const std::int64_t p = p_;
    for (std::size_t i = 0; i < want; ++i) x.coeffs[i] = static_cast<Coeff>(((flat[i] % p) + p) % p);
    return x;
}

// ---------------------------------------------------------------------------
// Polynomials

Polynomial PolyRing::normalize(Polynomial f) const {
    while (!f.coeffs.empty() && t_.is_zero(f.coeffs.back())) f.coeffs.pop_back();
    f.level = level_;
    return f;
}

Polynomial PolyRing::constant(const FieldElement& c) const { return normalize({level_, {c}}); }

Polynomial PolyRing::x() const { return {level_, {t_.zero(level_), t_.one(level_)}}; }

Polynomial PolyRing::add(const Polynomial& a, const Polynomial& b) const {
    Polynomial r{level_, {}};
    const std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= a.coeffs.size()) r.coeffs.push_back(b.coeffs[i]);
        else if (i >= b.coeffs.size()) r.coeffs.push_back(a.coeffs[i]);
        else r.coeffs.push_back(t_.add(a.coeffs[i], b.coeffs[i]));
    }
    return normalize(std::move(r));
}

Polynomial PolyRing::sub(const Polynomial& a, const Polynomial& b) const {
    Polynomial nb{level_, {}};
    for (const auto& c : b.coeffs) nb.coeffs.push_back(t_.neg(c));
    return add(a, nb);
}

Polynomial PolyRing::mul(const Polynomial& a, const Polynomial& b) const {
    if (a.coeffs.empty() || b.coeffs.empty()) return zero();
    Polynomial r{level_, std::vector<FieldElement>(a.coeffs.size() + b.coeffs.size() - 1, t_.zero(level_))};
    for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
        if (t_.is_zero(a.coeffs[i])) continue;
        for (std::size_t j = 0; j < b.coeffs.size(); ++j) {
            r.coeffs[i + j] = t_.add(r.coeffs[i + j], t_.mul(a.coeffs[i], b.coeffs[j]));
        }
    }
    return normalize(std::move(r));
}

std::pair<Polynomial, Polynomial> PolyRing::divmod(const Polynomial& a, const Polynomial& b) const {
    if (b.coeffs.empty()) throw Error(Errc::DivisionByZero, "polynomial division by zero");
    Polynomial rem = normalize(a);
    if (rem.degree() < b.degree()) return {zero(), rem};
    const FieldElement lead_inv = t_.inv(b.coeffs.back());
    Polynomial quot{level_, std::vector<FieldElement>(rem.coeffs.size() - b.coeffs.size() + 1, t_.zero(level_))};
    const std::size_t db = b.coeffs.size() - 1;
    for (std::size_t j = rem.coeffs.size(); j-- > db;) {
        if (t_.is_zero(rem.coeffs[j])) continue;
        const FieldElement c = t_.mul(rem.coeffs[j], lead_inv);
        quot.coeffs[j - db] = c;
        for (std::size_t t = 0; t <= db; ++t) {
            rem.coeffs[j - db + t] = t_.sub(rem.coeffs[j - db + t], t_.mul(c, b.coeffs[t]));
        }
    }
    return {normalize(std::move(quot)), normalize(std::move(rem))};
}

Polynomial PolyRing::make_monic(const Polynomial& f) const {
    if (f.coeffs.empty()) return f;
    const FieldElement li = t_.inv(f.coeffs.back());
    Polynomial r = f;
    for (auto& c : r.coeffs) c = t_.mul(c, li);
    return r;
}

Polynomial PolyRing::gcd(Polynomial a, Polynomial b) const {
    a = normalize(std::move(a));
    b = normalize(std::move(b));
    while (!b.coeffs.empty()) {
        Polynomial r = mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a);
}

Polynomial PolyRing::powmod(Polynomial base, std::uint64_t e, const Polynomial& modulus) const {
    Polynomial result = mod(constant(t_.one(level_)), modulus);
    base = mod(base, modulus);
    while (e != 0) {
        if (e & 1U) result = mod(mul(result, base), modulus);
        e >>= 1U;
        if (e != 0) base = mod(mul(base, base), modulus);
    }
    return result;
}

FieldElement PolyRing::eval(const Polynomial& f, const FieldElement& x) const {
    FieldElement acc = t_.zero(level_);
    for (std::size_t i = f.coeffs.size(); i-- > 0;) acc = t_.add(t_.mul(acc, x), f.coeffs[i]);
    return acc;
}

namespace {

// Candidates with a factor of degree at most this are rejected before the full
// criterion runs; most random polynomials fail here.
constexpr std::size_t kSmallFactorDegree = 16;

// Dense polynomials over the prime field, ascending, values in [0, p).
using PrimePoly = std::vector<std::uint64_t>;

void prime_trim(PrimePoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t prime_inv(std::uint64_t a, std::uint64_t p) {
    std::uint64_t r = 1, e = p - 2;
    while (e) {
        if (e & 1U) r = r * a % p;
        a = a * a % p;
        e >>= 1U;
    }
    return r;
}

// a mod f for monic f.
void prime_reduce(PrimePoly& a, const PrimePoly& f, std::uint64_t p) {
    const std::size_t d = f.size() - 1;
    for (std::size_t i = a.size(); i-- > d;) {
        const std::uint64_t c = a[i] % p;
        a[i] = 0;
        if (c == 0) continue;
        const std::uint64_t nc = p - c;
        for (std::size_t t = 0; t < d; ++t) a[i - d + t] = (a[i - d + t] + nc * f[t]) % p;
    }
    for (auto& v : a) v %= p;
    prime_trim(a);
}

PrimePoly prime_mulmod(const PrimePoly& a, const PrimePoly& b, const PrimePoly& f, std::uint64_t p) {
    if (a.empty() || b.empty()) return {};
    PrimePoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    prime_reduce(r, f, p);
    return r;
}

PrimePoly prime_powmod(PrimePoly base, std::uint64_t e, const PrimePoly& f, std::uint64_t p) {
    PrimePoly r{1};
    while (e) {
        if (e & 1U) r = prime_mulmod(r, base, f, p);
        e >>= 1U;
        if (e) base = prime_mulmod(base, base, f, p);
    }
    return r;
}

// Degree of gcd(g - x, f).
int prime_gcd_with_x(PrimePoly g, PrimePoly f, std::uint64_t p) {
    if (g.size() < 2) g.resize(2, 0);
    g[1] = (g[1] + p - 1) % p;
    prime_trim(g);
    while (!g.empty()) {
        const std::uint64_t li = prime_inv(g.back(), p);
        for (auto& v : g) v = v * li % p;
        prime_reduce(f, g, p);
        std::swap(f, g);
    }
    return static_cast<int>(f.size()) - 1;
}

bool prime_level_irreducible(const Polynomial& poly, std::uint32_t p) {
    PrimePoly f;
    for (const auto& c : poly.coeffs) f.push_back(c.coeffs.at(0));
    const std::size_t d = f.size() - 1;
    const PrimePoly x{0, 1};
    std::vector<PrimePoly> powers{x};
    for (std::size_t j = 1; j <= d; ++j) {
        powers.push_back(prime_powmod(powers.back(), p, f, p));
        if (j <= d / 2 && j <= kSmallFactorDegree && prime_gcd_with_x(powers.back(), f, p) != 0) return false;
    }
    if (powers[d] != x) return false;
    for (std::uint64_t r : prime_factors(d)) {
        if (prime_gcd_with_x(powers[d / r], f, p) != 0) return false;
    }
    return true;
}

}  // namespace

bool is_irreducible(const FieldTower& tower, const Polynomial& f) {
    const int d = f.degree();
    if (d <= 0) return false;
    if (d == 1) return true;
    const std::size_t flat = tower.level(f.level).flat_degree;
    const std::uint32_t p = tower.characteristic();
    if (flat == 1 && tower.is_one(f.coeffs.back())) return prime_level_irreducible(f, p);
    PolyRing ring(tower, f.level);
    // g -> g^Q mod f, Q = p^flat the order of the coefficient level.
    auto qpow = [&](Polynomial g) {
        for (std::size_t i = 0; i < flat; ++i) g = ring.powmod(std::move(g), p, f);
        return g;
    };
    const Polynomial x = ring.mod(ring.x(), f);
    auto coprime_to_f = [&](const Polynomial& g) { return ring.gcd(ring.sub(g, x), f).degree() == 0; };
    std::vector<Polynomial> powers{x};  // powers[j] = x^(Q^j) mod f
    for (int j = 1; j <= d; ++j) {
        powers.push_back(qpow(powers.back()));
        if (j <= d / 2 && static_cast<std::size_t>(j) <= kSmallFactorDegree && !coprime_to_f(powers.back())) {
            return false;
        }
    }
    if (!(powers[static_cast<std::size_t>(d)] == x)) return false;
    for (std::uint64_t r : prime_factors(static_cast<std::uint64_t>(d))) {
        if (!coprime_to_f(powers[static_cast<std::size_t>(d) / r])) return false;
    }
    return true;
}

Polynomial find_irreducible(const FieldTower& tower, std::size_t level, std::size_t degree, std::uint64_t seed) {
    if (degree < 1) throw Error(Errc::NoIrreducibleFound, "degree must be >= 1");
    if (level >= tower.level_count()) throw Error(Errc::NotASubLevel, "no such level");
    std::mt19937_64 rng(seed);
    const std::size_t flat = tower.level(level).flat_degree;
    const std::uint32_t p = tower.characteristic();
    PolyRing ring(tower, level);
    constexpr std::size_t kMaxAttempts = 1'000'000;
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        Polynomial f{level, {}};
        for (std::size_t i = 0; i < degree; ++i) {
            std::vector<Coeff> c(flat);
            for (auto& v : c) v = static_cast<Coeff>(rng() % p);
            f.coeffs.push_back({level, std::move(c)});
        }
        f.coeffs.push_back(tower.one(level));
        if (degree == 1 || is_irreducible(tower, f)) return f;
    }
    throw Error(Errc::NoIrreducibleFound, "search exhausted");
}

Polynomial parse_polynomial(const FieldTower& tower, std::size_t level, std::string_view text) {
    PolyRing ring(tower, level);
    const std::string s = trim(text);
    if (s.empty()) throw Error(Errc::ParseError, "empty polynomial");
    if (s.front() == '[') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(s);
        } catch (const nlohmann::json::exception& e) {
            throw Error(Errc::ParseError, std::string("bad coefficient list: ") + e.what());
        }
        if (!j.is_array()) throw Error(Errc::ParseError, "coefficient list must be an array");
        Polynomial f{level, {}};
        for (const auto& c : j) {
            if (c.is_number_integer()) f.coeffs.push_back(tower.constant(level, c.get<std::int64_t>()));
            else f.coeffs.push_back(tower.element_from_json(level, c));
        }
        return ring.normalize(std::move(f));
    }

    // Text form: sum of terms c, c*x, cx^e, x^e with optional signs.
    std::vector<std::int64_t> coeffs;
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    };
    bool first = true;
    while (true) {
        skip_ws();
        if (i >= s.size()) break;
        std::int64_t sign = 1;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1 : 1;
            ++i;
            skip_ws();
        } else if (!first) {
            throw Error(Errc::ParseError, "expected + or - in '" + s + "'");
        }
        first = false;
        std::int64_t c = 1;
        bool has_c = false;
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) {
            c = std::stoll(s.substr(start, i - start));
            has_c = true;
        }
        skip_ws();
        if (i < s.size() && s[i] == '*') {
            ++i;
            skip_ws();
        }
        std::size_t e = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            e = 1;
            skip_ws();
            if (i < s.size() && s[i] == '^') {
                ++i;
                skip_ws();
                start = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (i == start) throw Error(Errc::ParseError, "missing exponent in '" + s + "'");
                e = std::stoull(s.substr(start, i - start));
            }
        } else if (!has_c) {
            throw Error(Errc::ParseError, "unexpected character in '" + s + "'");
        }
        if (coeffs.size() <= e) coeffs.resize(e + 1, 0);
        coeffs[e] += sign * c;
    }
    Polynomial f{level, {}};
    for (auto c : coeffs) f.coeffs.push_back(tower.constant(level, c));
    return ring.normalize(std::move(f));
}

std::string to_string(const FieldTower& tower, const Polynomial& f) {
    if (f.coeffs.empty()) return "0";
    const bool prime_coeffs = std::all_of(f.coeffs.begin(), f.coeffs.end(), [](const FieldElement& c) {
        return all_zero(c.coeffs.data() + 1, c.coeffs.size() - 1);
    });
    std::ostringstream os;
    if (prime_coeffs) {
        bool first = true;
        for (std::size_t i = f.coeffs.size(); i-- > 0;) {
            const int c = f.coeffs[i].coeffs[0];
            if (c == 0) continue;
            if (!first) os << "+";
            first = false;
            if (i == 0) {
                os << c;
                continue;
            }
            if (c != 1) os << c;
            os << "x";
            if (i > 1) os << "^" << i;
        }
        return os.str();
    }
    os << "[";
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        if (i) os << ",";
        const auto& c = f.coeffs[i].coeffs;
        std::size_t len = c.size();
        while (len > 1 && c[len - 1] == 0) --len;
        if (len == 1) {
            os << c[0];
            continue;
        }
        os << "[";
        for (std::size_t k = 0; k < len; ++k) os << (k ? "," : "") << c[k];
        os << "]";
    }
    os << "]";
    (void)tower;
    return os.str();
}

}  // namespace sidon
