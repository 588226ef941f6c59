#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "sidon/certify.hpp"
#include "sidon/constructions.hpp"
#include "sidon/errors.hpp"
#include "sidon/orbit_code.hpp"
#include "sidon/presets.hpp"

namespace sidon::cli {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"field", "construct", "verify", "search", "union"};

struct RunConfig {
    std::string command;
    std::string preset;
    PresetParams params;
    std::string tower;  // descriptor
    std::string input;  // report or subspace JSON
    std::string spec_file;
    std::optional<std::size_t> subfield;
    std::string level = "local";
    Budgets budgets;
    std::string out;
    std::string format = "json";
    std::uint64_t codewords = 0;  // dump orbit codewords when the orbit has at most this many
    bool print_schema = false;
};

struct InputSpace {
    std::string label;
    Subspace space;
    std::vector<Subspace> groups;
    std::optional<std::size_t> claimed_dim;
};

struct Inputs {
    TowerPtr tower;
    std::vector<InputSpace> spaces;
    json source;  // preset report or input description embedded in the output
    bool unsupported = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, path + ": " + e.what());
    }
}

json tower_json(const FieldTower& t) {
    json levels = json::array();
    for (std::size_t i = 1; i < t.level_count(); ++i) {
        const Level& lv = t.level(i);
        json e = {{"name", lv.name},
                  {"degree", lv.degree},
                  {"flat_degree", lv.flat_degree},
                  {"polynomial", to_string(t, lv.modulus)},
                  {"tabled", lv.table.has_value()}};
        if (i >= t.q_level()) e["degree_over_q"] = t.degree_over_q(i);
        if (lv.seed) e["seed"] = *lv.seed;
        levels.push_back(e);
    }
    return {{"descriptor", t.descriptor()}, {"p", t.characteristic()}, {"q", t.q()}, {"n", t.n()}, {"levels", levels}};
}

TowerPtr plain_tower(const RunConfig& c) {
    if (!c.tower.empty()) return std::make_shared<const FieldTower>(FieldTower::parse(c.tower));
    if (!c.params.n) throw Error(Errc::InvalidArgument, "need --tower, --preset or --n");
    const auto [p, e] = split_prime_power(c.params.q);
    const LevelSpec level{"L1", *c.params.n, std::nullopt, c.params.seed, {}};
    return std::make_shared<const FieldTower>(FieldTower::build(p, e, std::span(&level, 1), std::nullopt, c.params.seed));
}

InputSpace from_preset_space(const PresetSpace& s) {
    return {s.label, s.realized.space, s.realized.group_spaces, s.realized.claimed_dim};
}

// Spaces to verify: a construct report, a bare subspace, a preset run, a
// custom spec, or the subfield F_{q^d} of a plain tower.
Inputs load_inputs(const RunConfig& c) {
    Inputs in;
    if (!c.input.empty()) {
        const json j = read_json_file(c.input);
        try {
            if (j.contains("spaces")) {
                in.tower = std::make_shared<const FieldTower>(FieldTower::parse(j.at("tower").at("descriptor").get<std::string>()));
                for (const auto& s : j.at("spaces")) {
                    InputSpace is{s.value("label", std::string("V")), subspace_from_json(in.tower, s.at("subspace")), {}, {}};
                    if (s.contains("claimed_dim")) is.claimed_dim = s.at("claimed_dim").get<std::size_t>();
                    if (s.contains("groups")) {
                        for (const auto& g : s.at("groups")) is.groups.push_back(subspace_from_json(in.tower, g));
                    }
                    in.spaces.push_back(std::move(is));
                }
                in.unsupported = j.value("unsupported", false);
                in.source = {{"input", c.input}};
                if (j.contains("preset")) in.source["preset"] = j.at("preset");
            } else {
                in.tower = std::make_shared<const FieldTower>(FieldTower::parse(j.at("ambient").get<std::string>()));
                in.spaces.push_back({"V", subspace_from_json(in.tower, j), {}, {}});
                in.source = {{"input", c.input}};
            }
        } catch (const json::exception& e) {
            throw Error(Errc::ParseError, c.input + ": " + e.what());
        }
        return in;
    }
    if (!c.preset.empty()) {
        PresetResult r = run_preset(c.preset, c.params);
        in.tower = r.tower;
        for (const auto& s : r.spaces) in.spaces.push_back(from_preset_space(s));
        in.unsupported = r.unsupported;
        in.source = {{"preset", r.preset}, {"hypotheses", to_json(r)["hypotheses"]}, {"unsupported", r.unsupported}};
        return in;
    }
    in.tower = plain_tower(c);
    if (!c.spec_file.empty()) {
        const ConstructionSpec spec = spec_from_json(read_json_file(c.spec_file));
        CoefficientAssignment coeffs;
        if (c.params.random_coeffs) coeffs = random_coefficients(spec, *in.tower, *c.params.random_coeffs);
        for (auto& [k, v] : parse_coefficients(*in.tower, c.params.coeffs)) coeffs[k] = v;
        Realization r = realize(spec, in.tower, coeffs);
        in.spaces.push_back({spec.name.empty() ? "U" : spec.name, r.space, r.group_spaces, r.claimed_dim});
        in.source = {{"spec", to_json(spec)}};
        return in;
    }
    if (c.subfield) {
        const auto basis = in.tower->subfield_basis(in.tower->top(), *c.subfield);
        in.spaces.push_back({"F_{q^" + std::to_string(*c.subfield) + "}", Subspace::span(in.tower, basis), {}, {}});
        in.source = {{"subfield", *c.subfield}};
        return in;
    }
    throw Error(Errc::InvalidArgument, "nothing to verify: give --input, --preset, --spec or --subfield");
}

json space_json(const InputSpace& s) {
    json groups = json::array();
    for (const auto& g : s.groups) groups.push_back(to_json(g));
    json j = {{"label", s.label}, {"dim", s.space.dim()}, {"subspace", to_json(s.space)}, {"groups", groups}};
    if (s.claimed_dim) j["claimed_dim"] = *s.claimed_dim;
    return j;
}

std::string matrix_string(const Subspace& v) {
    const DenseMatrix& m = v.matrix();
    std::string s;
    for (std::size_t r = 0; r < m.rows; ++r) {
        if (r) s += '/';
        for (std::size_t col = 0; col < m.cols; ++col) {
            const auto x = m.at(r, col);
            if (v.q() <= 10) {
                s += static_cast<char>('0' + x);
            } else {
                if (col) s += '.';
                s += std::to_string(x);
            }
        }
    }
    return s;
}

BigInt code_size_formula(std::uint32_t q, std::size_t n) {
    BigInt r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= q;
    return (r - 1) / (q - 1);
}

// ---------------------------------------------------------------- commands

int cmd_field(const RunConfig& c, json& report) {
    TowerPtr t;
    if (!c.preset.empty()) t = run_preset(c.preset, c.params).tower;
    else t = plain_tower(c);
    report = {{"command", "field"}, {"tower", tower_json(*t)}};
    return kPass;
}

int cmd_construct(const RunConfig& c, json& report, std::ostream& err) {
    if (c.print_schema) {
        report = construction_spec_schema();
        return kPass;
    }
    if (!c.preset.empty()) {
        const PresetResult r = run_preset(c.preset, c.params);
        report = to_json(r);
        report["command"] = "construct";
        for (const auto& w : r.warnings) err << "warning: " << w << '\n';
        return kPass;
    }
    if (c.spec_file.empty()) throw Error(Errc::InvalidArgument, "construct needs --preset or --spec");
    const TowerPtr t = plain_tower(c);
    const ConstructionSpec spec = spec_from_json(read_json_file(c.spec_file));
    CoefficientAssignment coeffs;
    if (c.params.random_coeffs) coeffs = random_coefficients(spec, *t, *c.params.random_coeffs);
    for (auto& [k, v] : parse_coefficients(*t, c.params.coeffs)) coeffs[k] = v;
    const Realization r = realize(spec, t, coeffs);
    json cj = json::object();
    for (const auto& [k, v] : coeffs) cj[k] = t->to_json(v);
    json groups = json::array();
    for (const auto& g : r.group_spaces) groups.push_back(to_json(g));
    report = {{"command", "construct"},
              {"tower", tower_json(*t)},
              {"coefficients", cj},
              {"unsupported", false},
              {"spaces", json::array({{{"label", spec.name.empty() ? "U" : spec.name},
                                       {"spec", to_json(spec)},
                                       {"claimed_dim", r.claimed_dim},
                                       {"dim", r.space.dim()},
                                       {"subspace", to_json(r.space)},
                                       {"groups", groups}}})}};
    return kPass;
}

int cmd_verify(const RunConfig& c, json& report) {
    if (c.level != "local" && c.level != "orbit" && c.level != "both") {
        throw Error(Errc::InvalidArgument, "--level must be local, orbit or both");
    }
    const Inputs in = load_inputs(c);
    const FieldTower& t = *in.tower;
    json spaces = json::array();
    bool all_sidon = true;
    bool consistent = true;
    for (const auto& s : in.spaces) {
        json e = space_json(s);
        const std::size_t k = s.space.dim();
        SidonCertificate cert;
        std::optional<OrbitReport> orbit;
        if (c.level == "local") {
            cert = is_sidon(s.space, c.budgets);
            if (cert.sidon()) orbit = implied_orbit_report(s.space, cert);
        } else if (k >= 2) {
            const EquivalenceRecord rec = verify_sidon_orbit_equivalence(s.space, c.budgets);
            cert = rec.sidon;
            orbit = rec.orbit;
            e["equivalence"] = {{"expected_size", big_to_json(rec.expected_size)},
                                {"expected_distance", rec.expected_distance},
                                {"orbit_matches", rec.orbit_matches},
                                {"equivalence_holds", rec.equivalence_holds}};
            if (c.level == "both" && !rec.equivalence_holds) consistent = false;
        } else {
            cert = is_sidon(s.space, c.budgets);
            orbit = enumerate_orbit(s.space, c.budgets);
            e["equivalence"] = nullptr;
        }
        e["certificate"] = to_json(t, cert);
        if (cert.witness) e["certificate"]["witness_verified"] = witness_valid(t, *cert.witness);
        if (orbit) e["orbit"] = to_json(*orbit);
        if (orbit && c.codewords > 0 && orbit->method == OrbitMethod::Enumerated && orbit->size <= c.codewords) {
            json words = json::array();
            for (const auto& w : orbit_codewords(s.space, c.budgets)) words.push_back(matrix_string(w));
            e["codewords"] = words;
        }
        if (s.groups.size() >= 2) {
            try {
                e["sum_conditions"] = to_json(t, certify_sum(s.groups, c.budgets));
            } catch (const Error& ex) {
                if (ex.code() != Errc::InputNotSidon && ex.code() != Errc::IdenticalSubspaces) throw;
                e["sum_conditions"] = {{"verdict", "not_applicable"}, {"reason", ex.what()}};
            }
        }
        all_sidon = all_sidon && cert.sidon();
        spaces.push_back(std::move(e));
    }
    report = {{"command", "verify"},
              {"level", c.level},
              {"tower", tower_json(t)},
              {"source", in.source},
              {"spaces", spaces},
              {"verdict", all_sidon ? "sidon" : "not_sidon"},
              {"unsupported", in.unsupported}};
    if (c.level == "both") report["consistent"] = consistent;
    if (!consistent) return kInternal;
    return all_sidon ? kPass : kNegative;
}

int cmd_search(const RunConfig& c, json& report, std::string& csv, std::ostream& err) {
    if (!c.params.k) throw Error(Errc::InvalidArgument, "search needs --k");
    if (c.format != "csv" && c.format != "json") throw Error(Errc::InvalidArgument, "--format must be csv or json");
    const TowerPtr tp = plain_tower(c);
    const FieldTower& t = *tp;
    const std::size_t k = *c.params.k;
    const std::size_t n = t.n();
    if (k > n) throw Error(Errc::InvalidArgument, "k exceeds n");
    const BigInt count = gaussian_binomial(n, k, t.q());
    if (count > c.budgets.orbit) {
        throw BudgetExceeded("Grassmannian size [" + std::to_string(n) + "," + std::to_string(k) + "]_" +
                                 std::to_string(t.q()),
                             count.str(), c.budgets.orbit);
    }
    const BigInt expected_size = code_size_formula(t.q(), n);
    std::ostringstream table;
    table << "index,basis,sidon,orbit_size,stabilizer_degree,max_intersection_dim,distance,equivalence_holds\n";
    json rows = json::array();
    std::uint64_t idx = 0, sidon_count = 0, exceptions = 0, sidon_formula = 0;
    for (GrassmannianIterator it(tp, k); !it.done(); it.next(), ++idx) {
        const Subspace v = it.current();
        const SidonCertificate cert = is_sidon(v, c.budgets);
        const OrbitReport orb = enumerate_orbit(v, c.budgets);
        std::optional<bool> eq;
        if (k >= 2) {
            const bool matches = orb.size == expected_size && orb.distance == 2 * k - 2;
            eq = matches == cert.sidon();
            if (!*eq) ++exceptions;
        }
        if (cert.sidon()) {
            ++sidon_count;
            if (orb.size == expected_size && (k < 2 || orb.distance == 2 * k - 2)) ++sidon_formula;
        }
        const std::string basis = matrix_string(v);
        const std::string dist = orb.distance ? std::to_string(*orb.distance) : "";
        table << idx << ',' << basis << ',' << (cert.sidon() ? 1 : 0) << ',' << orb.size << ',' << orb.t << ','
              << orb.max_dim << ',' << dist << ',' << (eq ? (*eq ? "1" : "0") : "") << '\n';
        rows.push_back({{"index", idx},
                        {"basis", basis},
                        {"sidon", cert.sidon()},
                        {"orbit_size", big_to_json(orb.size)},
                        {"stabilizer_degree", orb.t},
                        {"max_intersection_dim", orb.max_dim},
                        {"distance", orb.distance ? json(*orb.distance) : json(nullptr)},
                        {"equivalence_holds", eq ? json(*eq) : json(nullptr)}});
    }
    report = {{"command", "search"},
              {"tower", tower_json(t)},
              {"k", k},
              {"count", idx},
              {"gaussian_binomial", big_to_json(count)},
              {"sidon", sidon_count},
              {"non_sidon", idx - sidon_count},
              {"sidon_matching_formula", sidon_formula},
              {"exceptions", exceptions},
              {"rows", rows}};
    if (c.format == "csv") {
        csv = table.str();
        err << "search: " << idx << " subspaces, " << sidon_count << " sidon, " << exceptions << " exceptions\n";
    }
    return exceptions == 0 ? kPass : kInternal;
}

int cmd_union(const RunConfig& c, json& report) {
    const Inputs in = load_inputs(c);
    if (in.spaces.size() < 2) throw Error(Errc::InvalidArgument, "union needs at least two generator spaces");
    const FieldTower& t = *in.tower;
    std::vector<Subspace> gens;
    json generators = json::array();
    bool same_dim = true;
    for (const auto& s : in.spaces) {
        gens.push_back(s.space);
        same_dim = same_dim && s.space.dim() == in.spaces[0].space.dim();
        json e = space_json(s);
        const SidonCertificate cert = is_sidon(s.space, c.budgets);
        e["certificate"] = to_json(t, cert);
        generators.push_back(std::move(e));
    }
    const UnionCodeReport u = min_distance_union(gens, c.budgets);
    const std::size_t k = in.spaces[0].space.dim();
    const BigInt claimed_size = code_size_formula(t.q(), t.n()) * gens.size();
    json claim = {{"size", big_to_json(claimed_size)}, {"distance", same_dim ? json(2 * k - 2) : json(nullptr)}};
    const bool holds = same_dim && u.size == claimed_size && u.distance == 2 * k - 2;
    claim["holds"] = holds;
    report = {{"command", "union"},
              {"tower", tower_json(t)},
              {"source", in.source},
              {"generators", generators},
              {"code", to_json(u)},
              {"claim", claim},
              {"unsupported", in.unsupported}};
    return holds ? kPass : kNegative;
}

// ---------------------------------------------------------------- argument plumbing

void add_common(CLI::App* sub, RunConfig& c) {
    auto& p = c.params;
    sub->add_option("--q", p.q, "code base field order (prime power)");
    sub->add_option("--k", p.k);
    sub->add_option("--l", p.l);
    sub->add_option("--s", p.s);
    sub->add_option("--m", p.m);
    sub->add_option("--r", p.r);
    sub->add_option("--n", p.n, "degree of the ambient field over F_q");
    sub->add_option("--t-exp", p.t_exp, "Frobenius exponent replacing u");
    sub->add_option("--s-exp", p.s_exp, "Frobenius exponent replacing u^q");
    sub->add_option("--preset", c.preset)->check(CLI::IsMember(preset_names()));
    sub->add_option("--seed", p.seed, "irreducible-polynomial search seed");
    sub->add_option("--coeffs", p.coeffs, "name=value;... coefficient assignments");
    sub->add_option("--random-coeffs", p.random_coeffs, "draw coefficients with this seed");
    sub->add_flag("--force", p.force, "run despite failed forcible hypotheses (report marked unsupported)");
    sub->add_option("--reading", p.reading, "thm_4_20 reading: xi or verbatim");
    sub->add_option("--tower", c.tower, "tower descriptor");
    sub->add_option("--budget-points", c.budgets.points);
    sub->add_option("--budget-pairs", c.budgets.pairs);
    sub->add_option("--budget-orbit", c.budgets.orbit);
    sub->add_option("--workers", c.budgets.workers, "worker threads (0 = all cores)");
    sub->add_option("--out", c.out, "report path (default stdout)");
    sub->add_option("--format", c.format, "json or csv (search only)");
}

bool is_budget_flag(const std::string& a) {
    for (const char* f : {"--budget-points", "--budget-pairs", "--budget-orbit"}) {
        const std::string s(f);
        if (a == s || a.rfind(s + "=", 0) == 0) return true;
    }
    return false;
}

std::vector<std::string> env_budget_args() {
    const char* env = std::getenv("SIDON_BUDGET_OVERRIDE");
    if (!env || !*env) return {};
    const std::string v = trim(env);
    std::vector<std::string> out;
    if (v.find('=') == std::string::npos) {
        for (const char* key : {"points", "pairs", "orbit"}) out.push_back(std::string("--budget-") + key + "=" + v);
        return out;
    }
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(Errc::ParseError, "SIDON_BUDGET_OVERRIDE: bad item '" + item + "'");
        const std::string key = trim(item.substr(0, eq));
        if (key != "points" && key != "pairs" && key != "orbit") {
            throw Error(Errc::ParseError, "SIDON_BUDGET_OVERRIDE: unknown budget '" + key + "'");
        }
        out.push_back("--budget-" + key + "=" + trim(item.substr(eq + 1)));
    }
    return out;
}

// Rewrites the argument list so that config-file values come first, then the
// environment budgets, then the command line; later values win.
std::vector<std::string> merge_sources(std::vector<std::string> args) {
    std::string config_path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    std::string command;
    std::size_t cmd_pos = rest.size();
    for (std::size_t i = 0; i < rest.size(); ++i) {
        if (std::find(kCommands.begin(), kCommands.end(), rest[i]) != kCommands.end()) {
            command = rest[i];
            cmd_pos = i;
            break;
        }
    }
    std::vector<std::string> injected;
    if (!config_path.empty()) {
        for (const auto& [key, value] : read_config_file(config_path)) {
            if (key == "command") {
                if (command.empty()) command = value;
                continue;
            }
            injected.push_back("--" + key + "=" + value);
        }
    }
    const bool flag_budget = std::any_of(rest.begin(), rest.end(), is_budget_flag);
    if (!flag_budget) {
        for (auto& a : env_budget_args()) injected.push_back(std::move(a));
    } else {
        // Flags win per budget; the environment still fills the others.
        for (auto& a : env_budget_args()) {
            const std::string name = a.substr(0, a.find('='));
            const bool given = std::any_of(rest.begin(), rest.end(), [&](const std::string& r) {
                return r == name || r.rfind(name + "=", 0) == 0;
            });
            if (!given) injected.push_back(std::move(a));
        }
    }
    std::vector<std::string> merged;
    if (cmd_pos < rest.size()) {
        merged.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(cmd_pos) + 1);
        merged.insert(merged.end(), injected.begin(), injected.end());
        merged.insert(merged.end(), rest.begin() + static_cast<std::ptrdiff_t>(cmd_pos) + 1, rest.end());
    } else if (!command.empty()) {
        merged.push_back(command);
        merged.insert(merged.end(), injected.begin(), injected.end());
        merged.insert(merged.end(), rest.begin(), rest.end());
    } else {
        merged = rest;
    }
    return merged;
}

void write_output(const RunConfig& c, const std::string& text, std::ostream& out) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw Error(Errc::InvalidArgument, "cannot write '" + c.out + "'");
    f << text;
}

int exit_code_for(Errc e) {
    switch (e) {
        case Errc::HypothesisViolation:
        case Errc::CoefficientOutOfDomain:
            return kHypothesis;
        case Errc::DimensionCollapse:
            return kCollapse;
        case Errc::BudgetExceeded:
            return kBudget;
        default:
            return kInternal;
    }
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::InvalidArgument, "cannot open config '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(Errc::ParseError, path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key.front() == '-') key.erase(0, 1);
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Sidon spaces over finite-field towers: construction, certification and orbit codes", "sidon"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    // Handled before parsing; declared so that --help lists it.
    std::string config_unused;
    app.add_option("--config", config_unused, "flat key=value file; command-line flags override it");

    auto* field = app.add_subcommand("field", "build a tower and print its polynomials");
    add_common(field, c);
    auto* construct = app.add_subcommand("construct", "realize a preset or a ConstructionSpec file");
    add_common(construct, c);
    construct->add_option("--spec", c.spec_file, "ConstructionSpec JSON file");
    construct->add_flag("--print-schema", c.print_schema, "print the ConstructionSpec JSON schema");
    auto* verify = app.add_subcommand("verify", "certify Sidon spaces and their orbit codes");
    add_common(verify, c);
    verify->add_option("--input", c.input, "construct report or subspace JSON");
    verify->add_option("--spec", c.spec_file, "ConstructionSpec JSON file");
    verify->add_option("--subfield", c.subfield, "verify the subfield F_{q^d} of a plain tower");
    verify->add_option("--level", c.level, "local, orbit or both");
    verify->add_option("--codewords", c.codewords, "list orbit codewords when the orbit has at most this many");
    auto* search = app.add_subcommand("search", "classify every k-subspace of F_{q^n}");
    add_common(search, c);
    auto* uni = app.add_subcommand("union", "union of orbit codes (combined_4_21, example_4_22 or a report)");
    add_common(uni, c);
    uni->add_option("--input", c.input, "construct report with two or more spaces");

    const auto start = std::chrono::steady_clock::now();
    try {
        std::vector<std::string> merged = merge_sources(std::move(args));
        std::reverse(merged.begin(), merged.end());  // CLI11 consumes from the back
        app.parse(merged);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        const int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code == 0 ? kPass : kInternal;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
    for (auto* sub : app.get_subcommands()) c.command = sub->get_name();

    json report;
    std::string csv;
    int code = kInternal;
    try {
        if (c.command == "field") code = cmd_field(c, report);
        else if (c.command == "construct") code = cmd_construct(c, report, err);
        else if (c.command == "verify") code = cmd_verify(c, report);
        else if (c.command == "search") code = cmd_search(c, report, csv, err);
        else code = cmd_union(c, report);
    } catch (const BudgetExceeded& e) {
        report = {{"command", c.command},
                  {"error", "BudgetExceeded"},
                  {"message", e.what()},
                  {"required", e.required()},
                  {"cap", e.cap()}};
        code = kBudget;
        err << "error: " << e.what() << '\n';
    } catch (const Error& e) {
        report = {{"command", c.command}, {"error", std::string(to_string(e.code()))}, {"message", e.what()}};
        code = exit_code_for(e.code());
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        report = {{"command", c.command}, {"error", "internal"}, {"message", e.what()}};
        code = kInternal;
        err << "error: " << e.what() << '\n';
    }
    try {
        write_output(c, csv.empty() ? report.dump(2) + "\n" : csv, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kInternal;
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "[sidon] " << c.command << " finished in " << secs << " s (exit " << code << ")\n";
    return code;
}

}  // namespace sidon::cli
