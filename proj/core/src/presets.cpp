#include "sidon/presets.hpp"

#include <numeric>

#include <nlohmann/json.hpp>

#include "sidon/budget.hpp"
#include "sidon/errors.hpp"
#include "sidon/orbit_code.hpp"

namespace sidon {

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "rrt_quadratic", "lemma_4_1",  "lemma_4_2",  "corollary_rrt", "thm_4_5",       "thm_4_7",
        "thm_4_7_variant", "thm_two_gen", "thm_4_13", "thm_4_14",     "thm_4_15",      "thm_4_16",
        "thm_4_17",      "thm_4_18",   "thm_4_19",   "thm_4_20",      "combined_4_21", "example_4_22",
    };
    return names;
}

std::pair<std::uint32_t, std::size_t> split_prime_power(std::uint64_t q) {
    if (q < 2) throw Error(Errc::InvalidArgument, "q must be a prime power >= 2");
    const auto factors = prime_factors(q);
    if (factors.size() != 1) throw Error(Errc::InvalidArgument, std::to_string(q) + " is not a prime power");
    std::size_t e = 0;
    for (std::uint64_t x = q; x > 1; x /= factors[0]) ++e;
    return {static_cast<std::uint32_t>(factors[0]), e};
}

namespace {

using Mono = std::map<std::string, unsigned>;

Term term(std::string coeff, std::uint64_t frob, Mono mono = {}, std::int64_t scalar = 1) {
    return Term{std::move(coeff), scalar, frob, std::move(mono)};
}

class PresetBuilder {
public:
    PresetBuilder(const std::string& name, const PresetParams& p) : p_(p) {
        res_.preset = name;
        res_.params = p;
    }

    std::size_t need(const std::optional<std::size_t>& v, const char* what) const {
        if (!v) throw Error(Errc::InvalidArgument, "preset '" + res_.preset + "' needs --" + what);
        if (*v == 0) throw Error(Errc::InvalidArgument, std::string("--") + what + " must be positive");
        return *v;
    }

    void hyp(std::string name, bool ok, std::string detail = {}, bool forcible = true) {
        res_.hypotheses.push_back({std::move(name), ok, std::move(detail), forcible});
    }

    // Records "den | num" (structural) and returns whether it holds.
    bool divides(std::size_t den, std::size_t num, const std::string& name) {
        const bool ok = num % den == 0;
        hyp(name, ok, std::to_string(den) + (ok ? " divides " : " does not divide ") + std::to_string(num), false);
        return ok;
    }

    void ratio_gt(std::size_t num, std::size_t den, std::size_t bound, const std::string& name) {
        const std::size_t ratio = num / den;
        hyp(name, ratio > bound, std::to_string(num) + "/" + std::to_string(den) + " = " + std::to_string(ratio));
    }

    void coprime(std::size_t a, std::size_t b, const std::string& name) {
        const std::size_t g = std::gcd(a, b);
        hyp(name, g == 1, "gcd = " + std::to_string(g));
    }

    // Throws for the first failed hypothesis that cannot be (or was not) forced.
    void enforce() {
        for (const auto& h : res_.hypotheses) {
            if (h.passed) continue;
            if (!h.forcible || !p_.force) {
                throw Error(Errc::HypothesisViolation, h.name + (h.detail.empty() ? "" : " (" + h.detail + ")"));
            }
            res_.unsupported = true;
        }
    }

    void warn_unit_degree(std::size_t d, const char* what) {
        if (d == 1) res_.warnings.push_back(std::string(what) + " = 1: the subfield is F_q itself");
    }

    PresetResult& result() { return res_; }
    const PresetParams& params() const { return p_; }

private:
    const PresetParams& p_;
    PresetResult res_;
};

// Frobenius exponents used for the "x" and "x^q" slots.
struct FrobPair {
    std::uint64_t lo = 0;
    std::uint64_t hi = 1;
};

}  // namespace

PresetResult run_preset(const std::string& name, const PresetParams& p) {
    const auto known = preset_names();
    if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw Error(Errc::InvalidArgument, "unknown preset '" + name + "'");
    }
    const auto [prime, q_exp] = split_prime_power(p.q);
    PresetBuilder b(name, p);
    PresetResult& res = b.result();

    std::vector<std::pair<std::string, std::size_t>> levels;  // (name, degree over previous level)
    std::vector<ConstructionSpec> specs;
    std::vector<std::string> labels;
    PolynomialFilter gamma_filter;

    FrobPair fp;
    if (p.t_exp) fp.lo = *p.t_exp;
    if (p.s_exp) fp.hi = *p.s_exp;
    const bool substituted = p.t_exp.has_value() || p.s_exp.has_value();
    auto frob_hyp = [&](std::size_t d, const char* what) {
        if (!substituted || name == "lemma_4_2") return;
        const std::size_t diff = fp.lo > fp.hi ? fp.lo - fp.hi : fp.hi - fp.lo;
        b.hyp(std::string("gcd(t-s,") + what + ")=1", std::gcd(diff, d) == 1,
              "t = " + std::to_string(fp.lo) + ", s = " + std::to_string(fp.hi));
    };

    const std::size_t n = b.need(p.n, "n");

    if (name == "rrt_quadratic" || name == "lemma_4_1" || name == "lemma_4_2" || name == "corollary_rrt" ||
        name == "thm_4_5" || name == "combined_4_21" || name == "example_4_22") {
        const std::size_t k = b.need(p.k, "k");
        if (name == "rrt_quadratic") {
            b.hyp("q >= 3", p.q >= 3, "q = " + std::to_string(p.q), false);
            b.hyp("n = 2k", n == 2 * k, "n = " + std::to_string(n) + ", k = " + std::to_string(k), false);
        } else if (name == "example_4_22") {
            b.hyp("q = 3", p.q == 3, "q = " + std::to_string(p.q), false);
        }
        if (!b.divides(k, n, "k | n")) b.enforce();
        if (name == "thm_4_5") b.ratio_gt(n, k, 4, "n/k > 4");
        else if (name != "rrt_quadratic") b.ratio_gt(n, k, 2, "n/k > 2");
        b.warn_unit_degree(k, "k");
        levels = {{"k", k}, {"gamma", n / k}};

        ConstructionSpec s;
        s.name = name;
        if (name == "lemma_4_1") {
            s.groups = {{"u", k, {term("delta", fp.lo), term("tau", fp.hi, {{"gamma", 1}})}}};
            s.coefficients = {{"delta", {k, true}}, {"tau", {k, true}}};
            frob_hyp(k, "k");
        } else if (name == "lemma_4_2") {
            const std::uint64_t t = p.t_exp.value_or(0);
            const std::uint64_t sx = p.s_exp.value_or(1);
            const std::size_t diff = t > sx ? t - sx : sx - t;
            b.hyp("gcd(t-s,k)=1", std::gcd(diff, k) == 1,
                  "t = " + std::to_string(t) + ", s = " + std::to_string(sx) + ", gcd = " +
                      std::to_string(std::gcd(diff, k)));
            s.groups = {{"u", k, {term("", t), term("", sx, {{"gamma", 1}})}}};
        } else if (name == "corollary_rrt" || name == "rrt_quadratic") {
            s.groups = {{"u", k, {term("", fp.lo), term("", fp.hi, {{"gamma", 1}})}}};
            frob_hyp(k, "k");
        } else if (name == "thm_4_5") {
            s.groups = {{"a", 1, {term("", 0)}},
                        {"u", k, {term("delta1", fp.lo, {{"gamma", 1}}), term("delta2", fp.hi, {{"gamma", 2}})}}};
            s.coefficients = {{"delta1", {k, true}}, {"delta2", {k, true}}};
            frob_hyp(k, "k");
        }
        if (name == "combined_4_21" || name == "example_4_22") {
            ConstructionSpec u;
            u.name = name + ".U";
            u.groups = {{"u", k, {term("", fp.lo), term("", fp.hi, {{"gamma", 1}})}}};
            ConstructionSpec v;
            v.name = name + ".V";
            if (name == "combined_4_21") {
                v.groups = {{"v", k, {term("delta", fp.lo), term("", fp.hi, {{"gamma", 1}})}}};
                v.coefficients = {{"delta", {k, true}}};
            } else {
                v.groups = {{"v", k, {term("", fp.lo), term("", fp.hi, {{"gamma", 1}}, -1)}}};
            }
            frob_hyp(k, "k");
            specs = {u, v};
            labels = {"U", "V"};
        } else {
            specs = {s};
            labels = {"U"};
        }
        if (name == "rrt_quadratic") {
            gamma_filter = [k](const FieldTower& t, const Polynomial& f) { return !t.in_W(f.coeffs.at(0), k); };
        }
    } else if (name == "thm_4_7" || name == "thm_4_7_variant" || name == "thm_4_15") {
        const std::size_t k = b.need(p.k, "k");
        const std::size_t l = b.need(p.l, "l");
        if (!b.divides(k * l, n, "kl | n")) b.enforce();
        b.coprime(k, l, "gcd(k,l)=1");
        const std::size_t bound = name == "thm_4_15" ? 8 : 6;
        b.ratio_gt(n, k * l, bound, "n/kl > " + std::to_string(bound));
        b.warn_unit_degree(k, "k");
        b.warn_unit_degree(l, "l");
        frob_hyp(k, "k");
        frob_hyp(l, "l");
        levels = {{"kl", k * l}, {"gamma", n / (k * l)}};
        ConstructionSpec s;
        s.name = name;
        auto g = [](unsigned e) { return Mono{{"gamma", e}}; };
        if (name == "thm_4_7") {
            s.groups = {{"a", k, {term("delta1", fp.lo), term("delta2", fp.hi, g(2))}},
                        {"u", l, {term("tau1", fp.lo, g(1)), term("tau2", fp.hi, g(3))}}};
            s.coefficients = {{"delta1", {k, true}}, {"delta2", {k, true}}, {"tau1", {l, true}}, {"tau2", {l, true}}};
        } else if (name == "thm_4_7_variant") {
            s.groups = {{"a", k, {term("delta1", fp.lo), term("delta2", fp.hi, g(1))}},
                        {"u", l, {term("tau1", fp.lo, g(2)), term("tau2", fp.hi, g(3))}}};
            s.coefficients = {{"delta1", {k, true}}, {"delta2", {k, true}}, {"tau1", {l, true}}, {"tau2", {l, true}}};
        } else {
            s.groups = {{"a", 1, {term("", 0)}},
                        {"u", l, {term("delta1", fp.lo, g(1)), term("delta2", fp.hi, g(2))}},
                        {"e", k, {term("tau1", fp.lo, g(3)), term("tau2", fp.hi, g(4))}}};
            s.coefficients = {{"delta1", {l, true}}, {"delta2", {l, true}}, {"tau1", {k, true}}, {"tau2", {k, true}}};
        }
        specs = {s};
        labels = {"U"};
    } else if (name == "thm_4_16" || name == "thm_4_17") {
        const std::size_t k = b.need(p.k, "k");
        const std::size_t l = b.need(p.l, "l");
        const std::size_t sd = b.need(p.s, "s");
        if (!b.divides(k * l * sd, n, "kls | n")) b.enforce();
        const bool pc = std::gcd(k, l) == 1 && std::gcd(k, sd) == 1 && std::gcd(l, sd) == 1;
        b.hyp("pairwise relatively prime", pc,
              "k = " + std::to_string(k) + ", l = " + std::to_string(l) + ", s = " + std::to_string(sd));
        b.ratio_gt(n, k * l * sd, 12, "n/kls > 12");
        b.warn_unit_degree(k, "k");
        b.warn_unit_degree(l, "l");
        b.warn_unit_degree(sd, "s");
        frob_hyp(k, "k");
        frob_hyp(l, "l");
        frob_hyp(sd, "s");
        levels = {{"kls", k * l * sd}, {"gamma", n / (k * l * sd)}};
        auto g = [](unsigned e) { return Mono{{"gamma", e}}; };
        const unsigned u_lo = name == "thm_4_16" ? 2 : 3;
        ConstructionSpec s;
        s.name = name;
        s.groups = {{"a", l, {term("delta1", fp.lo), term("delta2", fp.hi, g(1))}},
                    {"u", k, {term("tau1", fp.lo, g(u_lo)), term("tau2", fp.hi, g(u_lo + 1))}},
                    {"e", sd, {term("eta1", fp.lo, g(5)), term("eta2", fp.hi, g(6))}}};
        s.coefficients = {{"delta1", {l, true}}, {"delta2", {l, true}}, {"tau1", {k, true}},
                          {"tau2", {k, true}},   {"eta1", {sd, true}},   {"eta2", {sd, true}}};
        specs = {s};
        labels = {"U"};
    } else if (name == "thm_two_gen" || name == "thm_4_13" || name == "thm_4_14") {
        const std::size_t k = b.need(p.k, "k");
        const std::size_t m = b.need(p.m, "m");
        bool ok = b.divides(k, m, "k | m");
        ok = b.divides(m, n, "m | n") && ok;
        if (!ok) b.enforce();
        const std::size_t mk = name == "thm_4_14" ? 4 : 2;
        const std::size_t nm = name == "thm_4_13" ? 4 : 2;
        b.ratio_gt(m, k, mk, "m/k > " + std::to_string(mk));
        b.ratio_gt(n, m, nm, "n/m > " + std::to_string(nm));
        b.warn_unit_degree(k, "k");
        frob_hyp(k, "k");
        levels = {{"k", k}, {"gamma", m / k}, {"xi", n / m}};
        if (name != "thm_two_gen") {
            res.notes.push_back(
                "gamma is taken in F_{q^m} with degree m/k over F_{q^k} and xi with degree n/m over F_{q^m}; "
                "this tower reading is what makes the monomials gamma^i xi^j independent");
        }
        ConstructionSpec s;
        s.name = name;
        if (name == "thm_two_gen") {
            s.groups = {{"a", 1, {term("", 0)}},
                        {"u", k, {term("delta1", fp.lo, {{"gamma", 1}}), term("delta2", fp.hi, {{"xi", 1}})}}};
            s.coefficients = {{"delta1", {k, true}}, {"delta2", {k, true}}};
        } else {
            const char* first = name == "thm_4_13" ? "gamma" : "xi";
            const char* second = name == "thm_4_13" ? "xi" : "gamma";
            s.groups = {{"a", k, {term("delta1", fp.lo), term("delta2", fp.hi, {{first, 1}})}},
                        {"u", k, {term("tau1", fp.lo, {{second, 1}}), term("tau2", fp.hi, {{second, 2}})}}};
            s.coefficients = {{"delta1", {k, true}}, {"delta2", {k, true}}, {"tau1", {k, true}}, {"tau2", {k, true}}};
        }
        specs = {s};
        labels = {"U"};
    } else {  // thm_4_18, thm_4_19, thm_4_20
        const std::size_t k = b.need(p.k, "k");
        const std::size_t m = b.need(p.m, "m");
        const std::size_t r = b.need(p.r, "r");
        bool ok = b.divides(k, m, "k | m");
        ok = b.divides(m, r, "m | r") && ok;
        ok = b.divides(r, n, "r | n") && ok;
        if (!ok) b.enforce();
        std::size_t bm = 2, br = 4, bn = 4;
        if (name == "thm_4_19") bm = 4, br = 2, bn = 4;
        if (name == "thm_4_20") bm = 4, br = 4, bn = 2;
        b.ratio_gt(m, k, bm, "m/k > " + std::to_string(bm));
        b.ratio_gt(r, m, br, "r/m > " + std::to_string(br));
        b.ratio_gt(n, r, bn, "n/r > " + std::to_string(bn));
        b.warn_unit_degree(k, "k");
        frob_hyp(k, "k");
        levels = {{"k", k}, {"gamma", m / k}, {"xi", r / m}, {"zeta", n / r}};
        auto two = [&](const char* c1, const char* c2, const char* gen) {
            return std::vector<Term>{term(c1, fp.lo, {{gen, 1}}), term(c2, fp.hi, {{gen, 2}})};
        };
        ConstructionSpec s;
        s.name = name;
        if (name == "thm_4_18") {
            s.groups = {{"a", k, {term("delta1", fp.lo), term("delta2", fp.hi, {{"gamma", 1}})}},
                        {"u", k, two("tau1", "tau2", "xi")},
                        {"e", k, two("eta1", "eta2", "zeta")}};
        } else if (name == "thm_4_19") {
            s.groups = {{"a", k, {term("delta1", fp.lo), term("delta2", fp.hi, {{"xi", 1}})}},
                        {"u", k, two("tau1", "tau2", "gamma")},
                        {"e", k, two("eta1", "eta2", "zeta")}};
        } else {
            const bool verbatim = p.reading == "verbatim";
            if (!verbatim && p.reading != "xi") throw Error(Errc::InvalidArgument, "--reading must be xi or verbatim");
            s.groups = {{"a", k, {term("delta1", fp.lo), term("delta2", fp.hi, {{"zeta", 1}})}},
                        {"u", k, two("tau1", "tau2", "gamma")},
                        {"e", k, two("eta1", "eta2", verbatim ? "gamma" : "xi")}};
            res.notes.push_back(
                "the displayed set uses gamma, gamma^2 for both the u and e groups; the default reading uses "
                "xi, xi^2 for the e group");
            b.hyp("xi-reading of the e group", !verbatim,
                  verbatim ? "verbatim reading: e group uses gamma, gamma^2" : "e group uses xi, xi^2");
        }
        s.coefficients = {{"delta1", {k, true}}, {"delta2", {k, true}}, {"tau1", {k, true}},
                          {"tau2", {k, true}},   {"eta1", {k, true}},   {"eta2", {k, true}}};
        specs = {s};
        labels = {"U"};
    }

    b.enforce();

    for (const auto& [lname, deg] : levels) {
        if (deg == 1) res.warnings.push_back("level '" + lname + "' has degree 1 over the level below");
    }

    std::vector<LevelSpec> lspecs;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        LevelSpec ls;
        ls.name = levels[i].first;
        ls.degree = levels[i].second;
        ls.seed = p.seed + i;
        if (ls.name == "gamma") ls.filter = gamma_filter;
        lspecs.push_back(std::move(ls));
    }
    res.tower = std::make_shared<const FieldTower>(FieldTower::build(prime, q_exp, lspecs, std::nullopt, p.seed));
    const FieldTower& t = *res.tower;
    if (name == "rrt_quadratic") {
        const auto& gl = t.level(*t.find_level("gamma"));
        b.hyp("c not in W_{q-1}", true, "gamma is a root of " + to_string(t, gl.modulus));
    }

    // Coefficients: random draw first, explicit values override.
    std::map<std::string, CoefficientDomain> domains;
    for (const auto& s : specs) domains.insert(s.coefficients.begin(), s.coefficients.end());
    if (p.random_coeffs) {
        for (const auto& s : specs) {
            auto drawn = random_coefficients(s, t, *p.random_coeffs);
            res.coefficients.insert(drawn.begin(), drawn.end());
        }
    }
    for (auto& [sym, val] : parse_coefficients(t, p.coeffs)) {
        if (!domains.count(sym)) throw Error(Errc::InvalidArgument, "preset '" + name + "' has no coefficient '" + sym + "'");
        res.coefficients[sym] = val;
    }

    if (name == "combined_4_21") {
        const std::size_t k = *p.k;
        if (!res.coefficients.count("delta")) {
            // First element of F_{q^k}^* outside W_{q-1}, in coordinate order over the subfield basis.
            const auto basis = t.subfield_basis(t.top(), k);
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < k; ++i) total *= t.q();
            for (std::uint64_t idx = 1; idx < total; ++idx) {
                FieldElement x = t.zero(t.top());
                std::uint64_t rest = idx;
                for (const auto& bv : basis) {
                    x = t.add(x, t.scale(bv, static_cast<SmallField::Value>(rest % t.q())));
                    rest /= t.q();
                }
                if (!t.in_W(x, k)) {
                    res.coefficients["delta"] = x;
                    break;
                }
            }
        }
        const auto it = res.coefficients.find("delta");
        if (it == res.coefficients.end()) {
            b.hyp("delta not in W_{q-1}", false, "every element of F_{q^k}^* is a (q-1)-th power", false);
        } else if (t.is_zero(it->second) || !t.in_subfield(it->second, k)) {
            throw Error(Errc::CoefficientOutOfDomain, "delta must be a nonzero element of F_{q^k}");
        } else {
            b.hyp("delta not in W_{q-1}", !t.in_W(it->second, k), "checked in F_{q^k}");
        }
    } else if (name == "example_4_22") {
        const std::size_t k = *p.k;
        const bool minus_one_in_w = t.in_W(t.constant(t.top(), -1), k);
        b.hyp("-1 not in W_{q-1}", !minus_one_in_w,
              "checked in F_{q^k}; -1 is a square there iff k is even", true);
    }
    b.enforce();

    for (std::size_t i = 0; i < specs.size(); ++i) {
        res.spaces.push_back({labels[i], specs[i], realize(specs[i], res.tower, res.coefficients)});
    }

    BigInt reps = 1;
    for (std::size_t i = 0; i < n; ++i) reps *= p.q;
    reps = (reps - 1) / (p.q - 1);
    res.plan = reps <= Budgets{}.orbit ? "orbit" : "local";
    return res;
}

nlohmann::json to_json(const PresetResult& r) {
    const FieldTower& t = *r.tower;
    nlohmann::json params = {{"q", r.params.q}, {"seed", r.params.seed}, {"force", r.params.force}};
    auto opt = [&](const char* key, const std::optional<std::size_t>& v) {
        if (v) params[key] = *v;
    };
    opt("k", r.params.k);
    opt("l", r.params.l);
    opt("s", r.params.s);
    opt("m", r.params.m);
    opt("r", r.params.r);
    opt("n", r.params.n);
    if (r.params.t_exp) params["t_exp"] = *r.params.t_exp;
    if (r.params.s_exp) params["s_exp"] = *r.params.s_exp;
    if (r.params.random_coeffs) params["random_coeffs"] = *r.params.random_coeffs;
    if (r.preset == "thm_4_20") params["reading"] = r.params.reading;

    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t i = 1; i < t.level_count(); ++i) {
        const Level& lv = t.level(i);
        nlohmann::json e = {{"name", lv.name},
                            {"degree", lv.degree},
                            {"degree_over_q", i >= t.q_level() ? t.degree_over_q(i) : 0},
                            {"polynomial", to_string(t, lv.modulus)}};
        if (lv.seed) e["seed"] = *lv.seed;
        levels.push_back(e);
    }
    nlohmann::json hyps = nlohmann::json::array();
    for (const auto& h : r.hypotheses) {
        hyps.push_back({{"name", h.name}, {"passed", h.passed}, {"detail", h.detail}, {"forcible", h.forcible}});
    }
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [sym, v] : r.coefficients) coeffs[sym] = t.to_json(v);
    nlohmann::json spaces = nlohmann::json::array();
    for (const auto& s : r.spaces) {
        nlohmann::json groups = nlohmann::json::array();
        for (const auto& g : s.realized.group_spaces) groups.push_back(to_json(g));
        spaces.push_back({{"label", s.label},
                          {"spec", to_json(s.spec)},
                          {"claimed_dim", s.realized.claimed_dim},
                          {"dim", s.realized.space.dim()},
                          {"subspace", to_json(s.realized.space)},
                          {"groups", groups}});
    }
    return {{"preset", r.preset},
            {"parameters", params},
            {"tower", {{"descriptor", t.descriptor()}, {"p", t.characteristic()}, {"q", t.q()}, {"n", t.n()},
                       {"levels", levels}}},
            {"hypotheses", hyps},
            {"unsupported", r.unsupported},
            {"warnings", r.warnings},
            {"notes", r.notes},
            {"coefficients", coeffs},
            {"spaces", spaces},
            {"plan", r.plan}};
}

}  // namespace sidon
