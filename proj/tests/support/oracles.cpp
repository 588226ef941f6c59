#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace oracle {

using Key = std::vector<sidon::Coeff>;

std::vector<FieldElement> all_elements(const FieldTower& t, std::size_t level) {
    const std::size_t f = t.level(level).flat_degree;
    const std::uint32_t p = t.characteristic();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < f; ++i) total *= p;
    std::vector<FieldElement> out;
    out.reserve(total);
    std::vector<sidon::Coeff> digits(f, 0);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t x = idx;
        for (std::size_t i = 0; i < f; ++i) {
            digits[i] = static_cast<sidon::Coeff>(x % p);
            x /= p;
        }
        out.push_back(t.element(level, digits));
    }
    return out;
}

std::vector<FieldElement> base_scalars(const FieldTower& t) {
    std::vector<FieldElement> out;
    for (auto& x : all_elements(t, t.top())) {
        if (t.pow(x, t.q()) == x) out.push_back(std::move(x));
    }
    if (out.size() != t.q()) throw std::logic_error("x^q = x has the wrong number of roots");
    return out;
}

std::vector<FieldElement> span_elements(const FieldTower& t, const std::vector<FieldElement>& basis) {
    const auto scalars = base_scalars(t);
    std::vector<FieldElement> acc{t.zero(t.top())};
    for (const auto& b : basis) {
        std::vector<FieldElement> next;
        next.reserve(acc.size() * scalars.size());
        for (const auto& s : scalars) {
            const FieldElement sb = t.mul(s, b);
            for (const auto& a : acc) next.push_back(t.add(a, sb));
        }
        acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end(), [](const auto& x, const auto& y) { return x.coeffs < y.coeffs; });
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    return acc;
}

Key projective_class(const FieldTower& t, const FieldElement& x) { return projective_class(t, x, base_scalars(t)); }

Key projective_class(const FieldTower& t, const FieldElement& x, const std::vector<FieldElement>& scalars) {
    Key best;
    for (const auto& s : scalars) {
        if (t.is_zero(s)) continue;
        Key k = t.mul(s, x).coeffs;
        if (best.empty() || k < best) best = std::move(k);
    }
    return best;
}

std::optional<DefinitionWitness> sidon_by_definition(const FieldTower& t, const std::vector<FieldElement>& basis) {
    std::vector<FieldElement> elems;
    for (auto& e : span_elements(t, basis)) {
        if (!t.is_zero(e)) elems.push_back(std::move(e));
    }
    const auto scalars = base_scalars(t);
    std::vector<Key> cls;
    cls.reserve(elems.size());
    for (const auto& e : elems) cls.push_back(projective_class(t, e, scalars));
    // product value -> (class pair, representative a, b)
    std::map<Key, std::tuple<std::pair<Key, Key>, std::size_t, std::size_t>> seen;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = 0; j < elems.size(); ++j) {
            const Key prod = t.mul(elems[i], elems[j]).coeffs;
            auto pair = std::minmax(cls[i], cls[j]);
            std::pair<Key, Key> cp{pair.first, pair.second};
            auto [it, fresh] = seen.try_emplace(prod, cp, i, j);
            if (!fresh && std::get<0>(it->second) != cp) {
                return DefinitionWitness{elems[i], elems[j], elems[std::get<1>(it->second)],
                                         elems[std::get<2>(it->second)]};
            }
        }
    }
    return std::nullopt;
}

namespace {

// Rank over F_q via greedy independence on element sets: each accepted vector
// multiplies the spanned set size by q.
std::size_t span_dim_of(const FieldTower& t, const std::vector<FieldElement>& gens) {
    const auto scalars = base_scalars(t);
    std::set<Key> spanned{t.zero(t.top()).coeffs};
    std::size_t dim = 0;
    for (const auto& g : gens) {
        if (spanned.count(g.coeffs)) continue;
        std::set<Key> next;
        for (const auto& s : scalars) {
            const FieldElement sg = t.mul(s, g);
            for (const auto& k : spanned) next.insert(t.add(t.element(t.top(), k), sg).coeffs);
        }
        spanned = std::move(next);
        ++dim;
    }
    return dim;
}

std::size_t log_q(std::uint64_t count, std::uint32_t q) {
    std::size_t d = 0;
    while (count > 1) {
        if (count % q != 0) throw std::logic_error("intersection size is not a power of q");
        count /= q;
        ++d;
    }
    return d;
}

std::vector<Key> sorted_keys(const std::vector<FieldElement>& elems) {
    std::vector<Key> out;
    out.reserve(elems.size());
    for (const auto& e : elems) out.push_back(e.coeffs);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t common(const std::vector<Key>& a, const std::vector<Key>& b) {
    std::size_t n = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else ++n, ++i, ++j;
    }
    return n;
}

}  // namespace

std::size_t product_span_dim(const FieldTower& t, const std::vector<FieldElement>& u, const std::vector<FieldElement>& v) {
    std::vector<FieldElement> prods;
    for (const auto& a : span_elements(t, u)) {
        for (const auto& b : span_elements(t, v)) prods.push_back(t.mul(a, b));
    }
    return span_dim_of(t, prods);
}

std::size_t intersection_dim(const FieldTower& t, const std::vector<FieldElement>& u_elems,
                             const std::vector<FieldElement>& v_elems) {
    return log_q(common(sorted_keys(u_elems), sorted_keys(v_elems)), t.q());
}

OrbitStats orbit_by_sets(const FieldTower& t, const std::vector<FieldElement>& basis) {
    const auto elems = span_elements(t, basis);
    const std::size_t k = basis.size();
    std::set<std::vector<Key>> words;
    for (const auto& alpha : all_elements(t, t.top())) {
        if (t.is_zero(alpha)) continue;
        std::vector<FieldElement> image;
        image.reserve(elems.size());
        for (const auto& e : elems) image.push_back(t.mul(alpha, e));
        words.insert(sorted_keys(image));
    }
    OrbitStats st;
    st.size = words.size();
    const std::vector<std::vector<Key>> list(words.begin(), words.end());
    for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) {
            const std::size_t d = 2 * k - 2 * log_q(common(list[i], list[j]), t.q());
            if (!st.min_distance || d < *st.min_distance) st.min_distance = d;
        }
    }
    return st;
}

std::size_t cross_max_dim(const FieldTower& t, const std::vector<FieldElement>& u, const std::vector<FieldElement>& v,
                          bool every_alpha) {
    const auto ue = sorted_keys(span_elements(t, u));
    const auto ve = span_elements(t, v);
    std::size_t best = 0;
    for (const auto& alpha : all_elements(t, t.top())) {
        if (t.is_zero(alpha)) continue;
        std::vector<FieldElement> image;
        for (const auto& e : ve) image.push_back(t.mul(alpha, e));
        const auto keys = sorted_keys(image);
        if (keys == ue && !every_alpha) continue;
        best = std::max(best, log_q(common(ue, keys), t.q()));
    }
    return best;
}

bool irreducible_by_trial_division(std::uint32_t p, const std::vector<std::uint32_t>& f) {
    const std::size_t deg = f.size() - 1;
    if (deg == 0) return false;
    auto divides = [&](const std::vector<std::uint32_t>& g) {
        std::vector<std::uint32_t> r = f;
        const std::size_t dg = g.size() - 1;
        for (std::size_t i = r.size(); i-- > dg;) {
            const std::uint32_t c = r[i] % p;
            if (c == 0) continue;
            for (std::size_t j = 0; j <= dg; ++j) {
                r[i - dg + j] = (r[i - dg + j] + p * p - (c * g[j]) % p) % p;
            }
        }
        for (std::size_t i = 0; i < dg; ++i) {
            if (r[i] % p != 0) return false;
        }
        return true;
    };
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        std::uint64_t total = 1;
        for (std::size_t i = 0; i < d; ++i) total *= p;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            std::vector<std::uint32_t> g(d + 1, 0);
            std::uint64_t x = idx;
            for (std::size_t i = 0; i < d; ++i) {
                g[i] = static_cast<std::uint32_t>(x % p);
                x /= p;
            }
            g[d] = 1;
            if (divides(g)) return false;
        }
    }
    return true;
}

std::uint64_t irreducible_count(std::uint32_t p, unsigned d) {
    auto mobius = [](unsigned n) {
        int m = 1;
        for (unsigned f = 2; f * f <= n; ++f) {
            if (n % f == 0) {
                n /= f;
                if (n % f == 0) return 0;
                m = -m;
            }
        }
        if (n > 1) m = -m;
        return m;
    };
    std::int64_t sum = 0;
    for (unsigned e = 1; e <= d; ++e) {
        if (d % e) continue;
        std::int64_t pw = 1;
        for (unsigned i = 0; i < d / e; ++i) pw *= p;
        sum += mobius(e) * pw;
    }
    return static_cast<std::uint64_t>(sum / d);
}

std::uint64_t gaussian_binomial_formula(std::uint64_t n, std::uint64_t k, std::uint64_t q) {
    if (k > n) return 0;
    unsigned __int128 num = 1, den = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        unsigned __int128 a = 1, b = 1;
        for (std::uint64_t j = 0; j < n - i; ++j) a *= q;
        for (std::uint64_t j = 0; j < i + 1; ++j) b *= q;
        num *= a - 1;
        den *= b - 1;
    }
    return static_cast<std::uint64_t>(num / den);
}

std::uint64_t projective_count(std::uint64_t q, std::uint64_t n) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < n; ++i) r *= q;
    return (r - 1) / (q - 1);
}

}  // namespace oracle
