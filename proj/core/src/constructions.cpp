#include "sidon/constructions.hpp"

#include <random>

#include <nlohmann/json.hpp>

#include "sidon/errors.hpp"

namespace sidon {

std::size_t ConstructionSpec::claimed_dim() const noexcept {
    std::size_t d = 0;
    for (const auto& g : groups) d += g.subfield_degree;
    return d;
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\n");
    return std::string(s.substr(b, e - b + 1));
}

FieldElement monomial_value(const FieldTower& t, const std::map<std::string, unsigned>& mono) {
    FieldElement acc = t.one(t.top());
    for (const auto& [name, e] : mono) {
        const auto level = t.find_level(name);
        if (!level || *level == 0) throw Error(Errc::InvalidArgument, "monomial uses unknown generator '" + name + "'");
        acc = t.mul(acc, t.pow(t.lift(t.generator(*level), t.top()), e));
    }
    return acc;
}

}  // namespace

Realization realize(const ConstructionSpec& spec, const TowerPtr& tower, const CoefficientAssignment& coefficients) {
    const FieldTower& t = *tower;
    const std::size_t top = t.top();
    const std::size_t n = t.n();

    auto coeff_of = [&](const std::string& sym) -> FieldElement {
        if (sym.empty()) return t.one(top);
        auto it = coefficients.find(sym);
        FieldElement c = it == coefficients.end() ? t.one(top) : it->second;
        if (c.level != top) c = t.lift(c, top);
        const auto dom = spec.coefficients.find(sym);
        if (dom != spec.coefficients.end()) {
            if (dom->second.nonzero && t.is_zero(c)) {
                throw Error(Errc::CoefficientOutOfDomain, "coefficient '" + sym + "' must be nonzero");
            }
            if (n % dom->second.subfield_degree != 0 || !t.in_subfield(c, dom->second.subfield_degree)) {
                throw Error(Errc::CoefficientOutOfDomain, "coefficient '" + sym + "' is not in F_{q^" +
                                                              std::to_string(dom->second.subfield_degree) + "}");
            }
        }
        return c;
    };

    std::vector<FieldElement> all;
    std::vector<Subspace> groups;
    for (const auto& g : spec.groups) {
        if (g.subfield_degree == 0 || n % g.subfield_degree != 0) {
            throw Error(Errc::DegreeNotDividing, "group '" + g.variable + "': subfield degree " +
                                                     std::to_string(g.subfield_degree) + " does not divide n = " +
                                                     std::to_string(n));
        }
        std::vector<FieldElement> factors;
        for (const auto& term : g.terms) {
            FieldElement f = t.mul(coeff_of(term.coeff), monomial_value(t, term.monomial));
            factors.push_back(t.mul(f, t.constant(top, term.scalar)));
        }
        std::vector<FieldElement> images;
        for (const auto& b : t.subfield_basis(top, g.subfield_degree)) {
            FieldElement v = t.zero(top);
            for (std::size_t i = 0; i < g.terms.size(); ++i) {
                v = t.add(v, t.mul(factors[i], t.frobenius(b, g.terms[i].frobenius)));
            }
            images.push_back(v);
        }
        groups.push_back(Subspace::span(tower, images));
        all.insert(all.end(), images.begin(), images.end());
    }
    Realization r{Subspace::span(tower, all), std::move(groups), spec.claimed_dim()};
    if (r.space.dim() != r.claimed_dim) {
        throw Error(Errc::DimensionCollapse, "'" + spec.name + "' spans dimension " + std::to_string(r.space.dim()) +
                                                 ", claimed " + std::to_string(r.claimed_dim));
    }
    return r;
}

FieldElement parse_coefficient(const FieldTower& t, std::string_view text) {
    const std::string s = trim(text);
    if (s.empty()) throw Error(Errc::ParseError, "empty coefficient");
    try {
        if (s.front() == '[') return t.element_from_json(t.top(), nlohmann::json::parse(s));
        const auto colon = s.find(':');
        if (colon != std::string::npos) {
            const std::string name = trim(s.substr(0, colon));
            const auto level = t.find_level(name);
            if (!level) throw Error(Errc::ParseError, "unknown level '" + name + "'");
            const auto j = nlohmann::json::parse(s.substr(colon + 1));
            FieldElement x = j.is_number_integer() ? t.constant(*level, j.get<std::int64_t>())
                                                   : t.element_from_json(*level, j);
            return t.lift(x, t.top());
        }
        std::size_t used = 0;
        const long long v = std::stoll(s, &used);
        if (used != s.size()) throw Error(Errc::ParseError, "bad coefficient '" + s + "'");
        return t.constant(t.top(), v);
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, "bad coefficient '" + s + "': " + e.what());
    } catch (const std::logic_error&) {
        throw Error(Errc::ParseError, "bad coefficient '" + s + "'");
    }
}

CoefficientAssignment parse_coefficients(const FieldTower& t, std::string_view text) {
    CoefficientAssignment out;
    std::string cur;
    auto flush = [&] {
        const std::string item = trim(cur);
        cur.clear();
        if (item.empty()) return;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "coefficient needs name=value: '" + item + "'");
        out[trim(item.substr(0, eq))] = parse_coefficient(t, item.substr(eq + 1));
    };
    for (char c : text) {
        if (c == ';') flush();
        else cur.push_back(c);
    }
    flush();
    return out;
}

CoefficientAssignment random_coefficients(const ConstructionSpec& spec, const FieldTower& t, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    CoefficientAssignment out;
    for (const auto& [sym, dom] : spec.coefficients) {
        const auto basis = t.subfield_basis(t.top(), dom.subfield_degree);
        FieldElement x = t.zero(t.top());
        do {
            x = t.zero(t.top());
            for (const auto& b : basis) {
                x = t.add(x, t.scale(b, static_cast<SmallField::Value>(rng() % t.q())));
            }
        } while (dom.nonzero && t.is_zero(x));
        out[sym] = x;
    }
    return out;
}

nlohmann::json to_json(const ConstructionSpec& spec) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : spec.groups) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& term : g.terms) {
            nlohmann::json mono = nlohmann::json::object();
            for (const auto& [name, e] : term.monomial) mono[name] = e;
            terms.push_back({{"coeff", term.coeff},
                             {"scalar", term.scalar},
                             {"frobenius", term.frobenius},
                             {"monomial", mono}});
        }
        groups.push_back({{"variable", g.variable}, {"subfield_degree", g.subfield_degree}, {"terms", terms}});
    }
    nlohmann::json coeffs = nlohmann::json::object();
    for (const auto& [sym, dom] : spec.coefficients) {
        coeffs[sym] = {{"subfield_degree", dom.subfield_degree}, {"nonzero", dom.nonzero}};
    }
    return {{"name", spec.name}, {"groups", groups}, {"coefficients", coeffs}};
}

ConstructionSpec spec_from_json(const nlohmann::json& j) {
    try {
        ConstructionSpec spec;
        spec.name = j.value("name", std::string("custom"));
        for (const auto& g : j.at("groups")) {
            VariableGroup group;
            group.variable = g.value("variable", std::string("x"));
            group.subfield_degree = g.at("subfield_degree").get<std::size_t>();
            for (const auto& term : g.at("terms")) {
                Term tm;
                tm.coeff = term.value("coeff", std::string());
                tm.scalar = term.value("scalar", std::int64_t{1});
                tm.frobenius = term.value("frobenius", std::uint64_t{0});
                if (term.contains("monomial")) {
                    for (const auto& [name, e] : term.at("monomial").items()) tm.monomial[name] = e.get<unsigned>();
                }
                group.terms.push_back(std::move(tm));
            }
            if (group.terms.empty()) throw Error(Errc::ParseError, "group '" + group.variable + "' has no terms");
            spec.groups.push_back(std::move(group));
        }
        if (j.contains("coefficients")) {
            for (const auto& [sym, dom] : j.at("coefficients").items()) {
                spec.coefficients[sym] = {dom.at("subfield_degree").get<std::size_t>(), dom.value("nonzero", true)};
            }
        }
        return spec;
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, std::string("construction spec: ") + e.what());
    }
}

const nlohmann::json& construction_spec_schema() {
    static const nlohmann::json schema = nlohmann::json::parse(R"({
  "$schema": "https://json-schema.org/draft/2020-12/schema",
  "title": "ConstructionSpec",
  "type": "object",
  "required": ["groups"],
  "properties": {
    "name": {"type": "string"},
    "groups": {
      "type": "array",
      "minItems": 1,
      "items": {
        "type": "object",
        "required": ["subfield_degree", "terms"],
        "properties": {
          "variable": {"type": "string"},
          "subfield_degree": {"type": "integer", "minimum": 1},
          "terms": {
            "type": "array",
            "minItems": 1,
            "items": {
              "type": "object",
              "properties": {
                "coeff": {"type": "string"},
                "scalar": {"type": "integer"},
                "frobenius": {"type": "integer", "minimum": 0},
                "monomial": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}}
              },
              "additionalProperties": false
            }
          }
        },
        "additionalProperties": false
      }
    },
    "coefficients": {
      "type": "object",
      "additionalProperties": {
        "type": "object",
        "required": ["subfield_degree"],
        "properties": {
          "subfield_degree": {"type": "integer", "minimum": 1},
          "nonzero": {"type": "boolean"}
        },
        "additionalProperties": false
      }
    }
  },
  "additionalProperties": false
})");
    return schema;
}

}  // namespace sidon
