#pragma once

#include "bdcover/covering_torus.hpp"
#include "bdcover/errors.hpp"
#include "bdcover/genuine_characters.hpp"
#include "bdcover/metaplectic_dual.hpp"
#include "bdcover/quadratic.hpp"
#include "bdcover/root_datum.hpp"
#include "bdcover/tame_field.hpp"

#include <json.hpp>

#include <cctype>
#include <optional>
#include <string>
#include <vector>

namespace bdcover {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Grammar: factor ('*' factor)*, factor := '1' | '-1' | ('pi' | 'g') ('^' int)?
inline FieldElement parse_field_element(const TameField& f, const std::string& text, const std::string& where = "field element") {
    std::size_t pos = 0;
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorKind::Parse, where + ": " + msg + " at position " + std::to_string(pos) + " in '" + text + "'");
    };
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto parse_int = [&]() -> std::int64_t {
        skip();
        std::size_t start = pos;
        if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
        std::size_t digits = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == digits) fail("expected an integer exponent");
        try {
            return std::stoll(text.substr(start, pos - start));
        } catch (const std::out_of_range&) {
            fail("exponent out of range");
        }
        return 0;
    };
    FieldElement acc = f.one();
    bool first = true;
    while (true) {
        skip();
        if (!first) {
            if (pos >= text.size()) break;
            if (text[pos] != '*') fail("expected '*'");
            ++pos;
            skip();
        }
        first = false;
        if (text.compare(pos, 2, "pi") == 0) {
            pos += 2;
            std::int64_t k = 1;
            skip();
            if (pos < text.size() && text[pos] == '^') ++pos, k = parse_int();
            acc = f.mul(acc, f.make(k, 0));
        } else if (pos < text.size() && text[pos] == 'g') {
            ++pos;
            std::int64_t e = 1;
            skip();
            if (pos < text.size() && text[pos] == '^') ++pos, e = parse_int();
            acc = f.mul(acc, f.unit(e));
        } else if (text.compare(pos, 2, "-1") == 0) {
            pos += 2;
            acc = f.mul(acc, f.minus_one());
        } else if (pos < text.size() && text[pos] == '1') {
            ++pos;
        } else {
            fail(pos >= text.size() ? "unexpected end of input" : std::string("unexpected character '") + text[pos] + "'");
        }
    }
    return acc;
}

inline Rat parse_rational(const std::string& s, const std::string& where) {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rat(Int(s));
        return make_rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw Error(ErrorKind::Parse, where + ": '" + s + "' is not a rational number");
    }
}

struct ProblemSpec {
    std::optional<char> type;
    int rank = 0;
    std::string isogeny = "sc";
    std::optional<std::vector<IntVec>> simple_roots, simple_coroots;
    std::size_t rank_y = 0;
    std::vector<Int> short_values{Int(1)};
    std::optional<IntMatrix> gram;
    std::int64_t n = 2;
    std::int64_t p = 7, q = 7;
    std::optional<std::int64_t> generator = 3;
    std::vector<std::string> eta;
    std::optional<IntMatrix> bisector;
    std::string character = "trivial";
    std::vector<json> base_values;
    std::optional<int> parabolic;
    std::optional<WeylWord> word;
    bool formal_s = false;
    std::string seed_psi;
};

namespace detail {
template <class T>
T get_field(const json& j, const std::string& key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Parse, where + "." + key + ": " + e.what());
    }
}

inline IntVec int_vec(const json& j, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorKind::Parse, where + ": expected an array of integers");
    IntVec v;
    for (const auto& x : j) {
        if (x.is_number_integer()) v.emplace_back(x.get<long long>());
        else if (x.is_string()) v.emplace_back(Int(x.get<std::string>()));
        else throw Error(ErrorKind::Parse, where + ": expected an integer");
    }
    return v;
}

inline IntMatrix int_matrix(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw Error(ErrorKind::Parse, where + ": expected a non-empty array of rows");
    std::vector<IntVec> rows;
    for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(int_vec(j[i], where + "[" + std::to_string(i) + "]"));
    for (const auto& r : rows)
        if (r.size() != rows[0].size()) throw Error(ErrorKind::Parse, where + ": rows have different lengths");
    return IntMatrix::from_rows(rows, rows[0].size());
}

inline void reject_unknown(const json& j, const std::vector<std::string>& known, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw Error(ErrorKind::Parse, where + ": unknown key '" + it.key() + "'");
}
}  // namespace detail

inline ProblemSpec parse_problem(const json& j) {
    using namespace detail;
    if (!j.is_object()) throw Error(ErrorKind::Parse, "problem: expected a JSON object");
    reject_unknown(j, {"schema_version", "datum", "quadratic", "n", "field", "eta", "bisector", "character", "parabolic", "word", "formal_s", "seed_psi", "comment"}, "problem");
    ProblemSpec s;
    if (j.contains("schema_version") && get_field<int>(j, "schema_version", "problem") != kSchemaVersion)
        throw Error(ErrorKind::Parse, "problem.schema_version: unsupported version");
    if (!j.contains("datum")) throw Error(ErrorKind::Parse, "problem.datum: missing");
    const json& d = j.at("datum");
    reject_unknown(d, {"type", "rank", "isogeny", "simple_roots", "simple_coroots", "rank_y"}, "datum");
    if (d.contains("type")) {
        auto t = get_field<std::string>(d, "type", "datum");
        if (t.size() != 1) throw Error(ErrorKind::Parse, "datum.type: expected one letter A-G");
        s.type = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0])));
        s.rank = get_field<int>(d, "rank", "datum");
        if (d.contains("isogeny")) s.isogeny = get_field<std::string>(d, "isogeny", "datum");
    } else {
        s.simple_roots = int_matrix(d.at("simple_roots"), "datum.simple_roots").rows;
        s.simple_coroots = int_matrix(d.at("simple_coroots"), "datum.simple_coroots").rows;
        s.rank_y = d.contains("rank_y") ? get_field<std::size_t>(d, "rank_y", "datum") : s.simple_roots->at(0).size();
    }
    if (j.contains("quadratic")) {
        const json& qj = j.at("quadratic");
        reject_unknown(qj, {"short_coroot_values", "gram"}, "quadratic");
        if (qj.contains("short_coroot_values")) s.short_values = int_vec(qj.at("short_coroot_values"), "quadratic.short_coroot_values");
        if (qj.contains("gram")) s.gram = int_matrix(qj.at("gram"), "quadratic.gram");
    }
    if (j.contains("n")) s.n = get_field<std::int64_t>(j, "n", "problem");
    if (j.contains("field")) {
        const json& f = j.at("field");
        reject_unknown(f, {"p", "q", "generator"}, "field");
        s.p = get_field<std::int64_t>(f, "p", "field");
        s.q = f.contains("q") ? get_field<std::int64_t>(f, "q", "field") : s.p;
        s.generator = f.contains("generator") ? std::optional<std::int64_t>(get_field<std::int64_t>(f, "generator", "field")) : std::nullopt;
    }
    if (j.contains("eta")) s.eta = get_field<std::vector<std::string>>(j, "eta", "problem");
    if (j.contains("bisector")) {
        const json& b = j.at("bisector");
        if (b.is_string()) {
            if (b.get<std::string>() != "fair-default") throw Error(ErrorKind::Parse, "bisector: expected \"fair-default\" or a matrix");
        } else {
            s.bisector = int_matrix(b, "bisector");
        }
    }
    if (j.contains("character")) {
        const json& c = j.at("character");
        if (c.is_string()) {
            s.character = c.get<std::string>();
        } else {
            reject_unknown(c, {"kind", "base_values"}, "character");
            s.character = get_field<std::string>(c, "kind", "character");
            if (c.contains("base_values")) s.base_values = get_field<std::vector<json>>(c, "base_values", "character");
        }
        if (s.character != "trivial" && s.character != "distinguished" && s.character != "unramified")
            throw Error(ErrorKind::Parse, "character.kind: expected trivial, distinguished or unramified");
    }
    if (j.contains("parabolic")) s.parabolic = get_field<int>(j, "parabolic", "problem");
    if (j.contains("word")) s.word = get_field<std::vector<int>>(j, "word", "problem");
    if (j.contains("formal_s")) s.formal_s = get_field<bool>(j, "formal_s", "problem");
    if (j.contains("seed_psi")) s.seed_psi = get_field<std::string>(j, "seed_psi", "problem");
    return s;
}

inline ProblemSpec parse_problem_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("malformed JSON: ") + e.what());
    }
    return parse_problem(j);
}

// Canonical serialization; parse_problem(to_json(s)) reproduces s.
inline json to_json(const ProblemSpec& s) {
    auto vec = [](const IntVec& v) {
        json a = json::array();
        for (const auto& x : v) a.push_back(to_i64(x));
        return a;
    };
    auto mat = [&](const std::vector<IntVec>& rows) {
        json a = json::array();
        for (const auto& r : rows) a.push_back(vec(r));
        return a;
    };
    json j;
    j["schema_version"] = kSchemaVersion;
    if (s.type) j["datum"] = {{"type", std::string(1, *s.type)}, {"rank", s.rank}, {"isogeny", s.isogeny}};
    else j["datum"] = {{"simple_roots", mat(*s.simple_roots)}, {"simple_coroots", mat(*s.simple_coroots)}, {"rank_y", s.rank_y}};
    j["quadratic"]["short_coroot_values"] = vec(s.short_values);
    if (s.gram) j["quadratic"]["gram"] = mat(s.gram->rows);
    j["n"] = s.n;
    j["field"] = {{"p", s.p}, {"q", s.q}};
    if (s.generator) j["field"]["generator"] = *s.generator;
    if (!s.eta.empty()) j["eta"] = s.eta;
    j["bisector"] = s.bisector ? mat(s.bisector->rows) : json("fair-default");
    j["character"] = {{"kind", s.character}};
    if (!s.base_values.empty()) j["character"]["base_values"] = s.base_values;
    if (s.parabolic) j["parabolic"] = *s.parabolic;
    if (s.word) j["word"] = *s.word;
    j["formal_s"] = s.formal_s;
    if (!s.seed_psi.empty()) j["seed_psi"] = s.seed_psi;
    return j;
}

// Everything derived from a spec, validated.
struct Problem {
    ProblemSpec spec;
    MetaplecticData md;
    TameField field;
    Bisector bisector;
    std::string bisector_construction;
    bool fair = false;
    EtaMap eta;
    CoveringTorus torus;
};

inline RootDatum build_datum(const ProblemSpec& s) {
    if (s.type) return RootDatum::build(*s.type, s.rank, s.isogeny);
    return RootDatum::from_simple(s.rank_y, *s.simple_roots, *s.simple_coroots);
}

inline Problem build_problem(const ProblemSpec& s) {
    RootDatum rd = build_datum(s);
    QuadraticForm qf = q_from_short_coroots(rd, s.short_values, s.gram);
    TameField f(s.p, s.q, s.n, s.generator);
    MetaplecticData md = compute_metaplectic(rd, qf, s.n);
    Bisector b;
    std::string how;
    if (s.bisector) {
        b = Bisector{*s.bisector};
        validate_bisector(qf, b);
        how = "explicit";
    } else {
        auto fr = fair_bisector_auto(rd, qf);
        b = fr.d;
        how = fr.construction;
    }
    EtaMap eta = EtaMap::trivial(rd.ss_rank);
    if (!s.eta.empty()) {
        if (s.eta.size() != rd.ss_rank)
            throw Error(ErrorKind::Validation, "eta has " + std::to_string(s.eta.size()) + " values, expected " + std::to_string(rd.ss_rank));
        for (std::size_t i = 0; i < s.eta.size(); ++i)
            eta.values[i] = parse_field_element(f, s.eta[i], "eta[" + std::to_string(i) + "]");
    }
    bool fair = is_fair(rd, b, qf);
    CoveringTorus t(md, f, b, eta);
    return Problem{s, md, f, b, how, fair, eta, t};
}

inline Monomial parse_monomial(const json& j, const std::string& where) {
    if (!j.is_object()) throw Error(ErrorKind::Parse, where + ": expected an object with zeta, q_const, q_s");
    detail::reject_unknown(j, {"zeta", "q_const", "q_s"}, where);
    Monomial m;
    if (j.contains("zeta")) {
        Rat z = parse_rational(detail::get_field<std::string>(j, "zeta", where), where + ".zeta");
        m = Monomial::root(to_i64(numerator(z)), to_i64(denominator(z)));
    }
    Rat c = j.contains("q_const") ? parse_rational(detail::get_field<std::string>(j, "q_const", where), where + ".q_const") : Rat(0);
    Rat sv = j.contains("q_s") ? parse_rational(detail::get_field<std::string>(j, "q_s", where), where + ".q_s") : Rat(0);
    return m * Monomial::q_power(c, sv);
}

inline GenuineCharacter unramified_from_spec(const Problem& p) {
    const std::size_t r = p.md.y_qn.rank();
    if (p.spec.character == "trivial" || p.spec.base_values.empty()) {
        if (p.spec.character == "unramified" && p.spec.base_values.empty())
            throw Error(ErrorKind::Validation, "unramified character needs base_values");
        return trivial_unramified(p.torus);
    }
    if (p.spec.base_values.size() != r)
        throw Error(ErrorKind::Validation, "character.base_values has " + std::to_string(p.spec.base_values.size()) +
                                               " entries, expected " + std::to_string(r) + " (rank of Y_{Q,n})");
    std::vector<Monomial> base;
    for (std::size_t k = 0; k < r; ++k) base.push_back(parse_monomial(p.spec.base_values[k], "character.base_values[" + std::to_string(k) + "]"));
    return make_unramified(p.torus, base);
}

}  // namespace bdcover
