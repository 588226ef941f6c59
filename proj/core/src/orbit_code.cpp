#include "sidon/orbit_code.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "sidon/errors.hpp"
#include "sidon/parallel.hpp"

namespace sidon {

using Value = SmallField::Value;

std::string_view to_string(OrbitMethod m) noexcept {
    return m == OrbitMethod::Enumerated ? "enumerated" : "implied_by_sidon";
}

std::string_view to_string(CrossMethod m) noexcept {
    return m == CrossMethod::Swept ? "swept" : "implied_by_pairwise_certificate";
}

namespace {

BigInt ipow(std::uint32_t q, std::size_t e) {
    BigInt r = 1;
    for (std::size_t i = 0; i < e; ++i) r *= q;
    return r;
}

std::uint64_t sweep_size(const Subspace& v, const Budgets& budgets) {
    const BigInt reps = (ipow(v.q(), v.n()) - 1) / (v.q() - 1);
    if (reps > budgets.orbit) throw BudgetExceeded("alpha representatives", reps.str(), budgets.orbit);
    return static_cast<std::uint64_t>(reps);
}

FieldElement alpha_at(const FieldTower& t, std::uint64_t idx, std::vector<Value>& scratch) {
    projective_vector(t.q(), idx, scratch);
    return t.from_coordinates(t.top(), scratch);
}

// Per-worker partial state of an orbit sweep.
struct OrbitPartial {
    std::unordered_set<std::string> keys;
    std::uint64_t stabilizer = 0;
    std::size_t max_dim = 0;
};

}  // namespace

OrbitReport enumerate_orbit(const Subspace& v, const Budgets& budgets) {
    const std::uint64_t reps = sweep_size(v, budgets);
    const FieldTower& t = v.tower();
    const std::string self = v.key();
    const unsigned workers = budgets.workers == 0 ? default_workers() : budgets.workers;
    std::vector<OrbitPartial> parts(workers);
    parallel_ranges(reps, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
        OrbitPartial& part = parts[w];
        std::vector<Value> scratch(v.n());
        for (std::uint64_t idx = b; idx < e; ++idx) {
            const Subspace av = scalar_mul(alpha_at(t, idx, scratch), v);
            std::string key = av.key();
            if (key == self) {
                ++part.stabilizer;
            } else {
                part.max_dim = std::max(part.max_dim, intersection_dim(v, av));
            }
            part.keys.insert(std::move(key));
        }
    });

    OrbitReport r;
    r.k = v.dim();
    r.n = v.n();
    r.q = v.q();
    r.method = OrbitMethod::Enumerated;
    r.alphas_swept = reps;
    std::unordered_set<std::string> all;
    for (auto& part : parts) {
        r.stabilizer_count += part.stabilizer;
        r.max_dim = std::max(r.max_dim, part.max_dim);
        all.merge(part.keys);
    }
    r.size = all.size();

    std::uint64_t count = 0;
    std::uint64_t power = 1;
    bool found = false;
    for (std::size_t tt = 1; tt <= r.n; ++tt) {
        count += power;
        power *= r.q;
        if (count == r.stabilizer_count) {
            r.t = tt;
            found = true;
            break;
        }
    }
    if (!found || r.size * (ipow(r.q, r.t) - 1) != ipow(r.q, r.n) - 1) {
        throw Error(Errc::InvalidArgument, "orbit-stabilizer identity failed: internal fault");
    }
    r.degenerate = r.size < 2;
    if (!r.degenerate) r.distance = 2 * r.k - 2 * r.max_dim;
    return r;
}

OrbitReport implied_orbit_report(const Subspace& v, const SidonCertificate& cert) {
    if (!cert.sidon()) throw Error(Errc::InputNotSidon, "implied orbit facts need a Sidon certificate");
    OrbitReport r;
    r.k = v.dim();
    r.n = v.n();
    r.q = v.q();
    r.method = OrbitMethod::ImpliedBySidon;
    r.size = (ipow(r.q, r.n) - 1) / (r.q - 1);
    r.t = 1;
    r.stabilizer_count = 1;
    r.max_dim = r.k >= 2 ? 1 : 0;
    r.degenerate = r.size < 2;
    if (!r.degenerate) r.distance = 2 * r.k - 2 * r.max_dim;
    return r;
}

std::vector<Subspace> orbit_codewords(const Subspace& v, const Budgets& budgets) {
    const std::uint64_t reps = sweep_size(v, budgets);
    const FieldTower& t = v.tower();
    std::map<std::string, Subspace> words;
    std::vector<Value> scratch(v.n());
    for (std::uint64_t idx = 0; idx < reps; ++idx) {
        Subspace av = scalar_mul(alpha_at(t, idx, scratch), v);
        words.emplace(av.key(), std::move(av));
    }
    std::vector<Subspace> out;
    out.reserve(words.size());
    for (auto& [k, s] : words) out.push_back(std::move(s));
    return out;
}

UnionCodeReport min_distance_union(std::span<const Subspace> generators, const Budgets& budgets) {
    if (generators.empty()) throw Error(Errc::InvalidArgument, "union of zero orbits");
    UnionCodeReport rep;
    for (const auto& g : generators) {
        if (!g.same_ambient(generators.front())) throw Error(Errc::AmbientMismatch, "mixed ambients");
        try {
            rep.orbits.push_back(enumerate_orbit(g, budgets));
        } catch (const BudgetExceeded&) {
            const SidonCertificate cert = is_sidon(g, budgets);
            if (!cert.sidon()) throw;
            rep.orbits.push_back(implied_orbit_report(g, cert));
        }
    }

    // Orbits are equal or disjoint; group equal ones.
    std::vector<std::size_t> root(generators.size());
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = i;
    auto find = [&](std::size_t x) {
        while (root[x] != x) x = root[x];
        return x;
    };

    const FieldTower& t = generators.front().tower();
    for (std::size_t i = 0; i < generators.size(); ++i) {
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            const Subspace& u = generators[i];
            const Subspace& v = generators[j];
            CrossReport c;
            c.i = i;
            c.j = j;
            try {
                const std::uint64_t reps = sweep_size(v, budgets);
                const std::string target = u.key();
                const unsigned workers = budgets.workers == 0 ? default_workers() : budgets.workers;
                std::vector<std::size_t> best(workers, 0);
                std::vector<char> hit(workers, 0);
                parallel_ranges(reps, workers, [&](std::uint64_t b, std::uint64_t e, unsigned w) {
                    std::vector<Value> scratch(v.n());
                    for (std::uint64_t idx = b; idx < e; ++idx) {
                        const Subspace av = scalar_mul(alpha_at(t, idx, scratch), v);
                        if (av.key() == target) {
                            hit[w] = 1;
                            continue;
                        }
                        best[w] = std::max(best[w], intersection_dim(u, av));
                    }
                });
                c.method = CrossMethod::Swept;
                c.max_dim = *std::max_element(best.begin(), best.end());
                c.same_orbit = std::any_of(hit.begin(), hit.end(), [](char h) { return h != 0; });
            } catch (const BudgetExceeded&) {
                c.method = CrossMethod::ImpliedByPairwise;
                if (u == v) {
                    c.same_orbit = true;
                } else {
                    const PairwiseResult pr = pairwise_condition(u, v, budgets);
                    if (!pr.holds) throw;
                    // Distinct orbits follow when the dimensions differ or both are Sidon with k >= 2.
                    c.max_dim = 1;
                    c.max_dim_is_bound = true;
                }
            }
            if (c.same_orbit) {
                root[find(j)] = find(i);
            } else {
                c.distance = u.dim() + v.dim() - 2 * c.max_dim;
            }
            rep.cross.push_back(c);
        }
    }

    for (std::size_t i = 0; i < generators.size(); ++i) {
        rep.sum_of_orbit_sizes += rep.orbits[i].size;
        if (find(i) == i) rep.size += rep.orbits[i].size;
    }
    rep.collision = rep.size != rep.sum_of_orbit_sizes;

    std::optional<std::size_t> best;
    auto consider = [&](std::size_t d) { best = best ? std::min(*best, d) : d; };
    for (const auto& o : rep.orbits) {
        if (o.distance) consider(*o.distance);
    }
    for (const auto& c : rep.cross) {
        if (c.distance) {
            consider(*c.distance);
            rep.distance_is_bound = rep.distance_is_bound || c.max_dim_is_bound;
        }
    }
    rep.distance = best;
    return rep;
}

EquivalenceRecord verify_sidon_orbit_equivalence(const Subspace& v, const Budgets& budgets) {
    if (v.dim() < 2) {
        throw Error(Errc::InvalidArgument, "the size/distance equivalence is checked for dim >= 2 only");
    }
    EquivalenceRecord rec;
    rec.sidon = is_sidon(v, budgets);
    rec.orbit = enumerate_orbit(v, budgets);
    rec.expected_size = (ipow(v.q(), v.n()) - 1) / (v.q() - 1);
    rec.expected_distance = 2 * v.dim() - 2;
    rec.orbit_matches = rec.orbit.size == rec.expected_size && rec.orbit.distance &&
                        *rec.orbit.distance == rec.expected_distance;
    rec.equivalence_holds = rec.sidon.sidon() == rec.orbit_matches;
    return rec;
}

BigInt gaussian_binomial(std::size_t n, std::size_t k, std::uint32_t q) {
    if (k > n) return 0;
    BigInt num = 1;
    BigInt den = 1;
    for (std::size_t i = 0; i < k; ++i) {
        num *= ipow(q, n - i) - 1;
        den *= ipow(q, i + 1) - 1;
    }
    return num / den;
}

GrassmannianIterator::GrassmannianIterator(TowerPtr tower, std::size_t k)
    : tower_(std::move(tower)), n_(tower_->n()), k_(k), q_(tower_->q()) {
    if (k_ > n_) {
        done_ = true;
        return;
    }
    pivots_.resize(k_);
    for (std::size_t i = 0; i < k_; ++i) pivots_[i] = i;
    load_pivots();
}

void GrassmannianIterator::load_pivots() {
    free_.clear();
    for (std::size_t r = 0; r < k_; ++r) {
        for (std::size_t c = pivots_[r] + 1; c < n_; ++c) {
            if (!std::binary_search(pivots_.begin(), pivots_.end(), c)) free_.emplace_back(r, c);
        }
    }
    digits_.assign(free_.size(), 0);
}

Subspace GrassmannianIterator::current() const {
    DenseMatrix m(k_, n_);
    for (std::size_t r = 0; r < k_; ++r) m.at(r, pivots_[r]) = 1;
    for (std::size_t f = 0; f < free_.size(); ++f) m.at(free_[f].first, free_[f].second) = digits_[f];
    return Subspace::from_rows(tower_, std::move(m));
}

void GrassmannianIterator::next() {
    if (done_) return;
    for (std::size_t f = digits_.size(); f-- > 0;) {
        if (++digits_[f] < q_) return;
        digits_[f] = 0;
    }
    // Next pivot combination in lexicographic order.
    std::size_t i = k_;
    while (i > 0 && pivots_[i - 1] == n_ - k_ + (i - 1)) --i;
    if (i == 0) {
        done_ = true;
        return;
    }
    ++pivots_[i - 1];
    for (std::size_t r = i; r < k_; ++r) pivots_[r] = pivots_[r - 1] + 1;
    load_pivots();
}

nlohmann::json big_to_json(const BigInt& v) {
    if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
    return v.str();
}

nlohmann::json to_json(const OrbitReport& r) {
    return {{"k", r.k},
            {"n", r.n},
            {"q", r.q},
            {"method", to_string(r.method)},
            {"size", big_to_json(r.size)},
            {"stabilizer_degree", r.t},
            {"stabilizer_count", r.stabilizer_count},
            {"max_intersection_dim", r.max_dim},
            {"distance", r.distance ? nlohmann::json(*r.distance) : nlohmann::json(nullptr)},
            {"degenerate", r.degenerate},
            {"counters", {{"alphas_swept", r.alphas_swept}}}};
}

nlohmann::json to_json(const UnionCodeReport& r) {
    nlohmann::json orbits = nlohmann::json::array();
    for (const auto& o : r.orbits) orbits.push_back(to_json(o));
    nlohmann::json cross = nlohmann::json::array();
    for (const auto& c : r.cross) {
        cross.push_back({{"i", c.i},
                         {"j", c.j},
                         {"method", to_string(c.method)},
                         {"same_orbit", c.same_orbit},
                         {"max_intersection_dim", c.max_dim},
                         {"max_dim_is_bound", c.max_dim_is_bound},
                         {"distance", c.distance ? nlohmann::json(*c.distance) : nlohmann::json(nullptr)}});
    }
    return {{"orbits", orbits},
            {"cross", cross},
            {"size", big_to_json(r.size)},
            {"sum_of_orbit_sizes", big_to_json(r.sum_of_orbit_sizes)},
            {"collision", r.collision},
            {"distance", r.distance ? nlohmann::json(*r.distance) : nlohmann::json(nullptr)},
            {"distance_is_bound", r.distance_is_bound}};
}

nlohmann::json to_json(const FieldTower& t, const EquivalenceRecord& r) {
    return {{"sidon", to_json(t, r.sidon)},
            {"orbit", to_json(r.orbit)},
            {"expected_size", big_to_json(r.expected_size)},
            {"expected_distance", r.expected_distance},
            {"orbit_matches", r.orbit_matches},
            {"equivalence_holds", r.equivalence_holds}};
}

}  // namespace sidon
