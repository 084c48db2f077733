#pragma once

#include "bdcover/checks.hpp"
#include "bdcover/gk_lfunctions.hpp"
#include "bdcover/problem.hpp"

#include <random>
#include <string>
#include <vector>

namespace bdcover {

namespace report {

inline json int_json(const Int& x) {
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
        return static_cast<std::int64_t>(x);
    return x.str();
}

inline json vec(const IntVec& v) {
    json a = json::array();
    for (const auto& x : v) a.push_back(int_json(x));
    return a;
}

inline json mat(const IntMatrix& m) {
    json a = json::array();
    for (const auto& r : m.rows) a.push_back(vec(r));
    return a;
}

inline json monomial(const Monomial& m) {
    return {{"zeta", std::to_string(m.k) + "/" + std::to_string(m.m)}, {"q_const", rat_str(m.q_const)}, {"q_s", rat_str(m.q_s)}, {"text", m.str()}};
}

// Linear combination of simple symbols, e.g. "a1+2a2" or "a1^v+a3^v".
inline std::string combo(const IntVec& c, const std::string& sym, const std::string& suffix = "") {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        Int a = abs(c[i]);
        if (c[i] < 0) s += "-";
        else if (!s.empty()) s += "+";
        if (a != 1) s += a.str();
        s += sym + std::to_string(i + 1) + suffix;
    }
    return s.empty() ? "0" : s;
}

inline std::string root_name(const RootDatum& rd, std::size_t r) { return combo(rd.delta_coords[r], "a"); }

inline json predicate(const PredicateReport& p) { return {{"ok", p.ok}, {"witnesses", p.witnesses}}; }

inline json word(const WeylWord& w) { return json(w); }

}  // namespace report

inline json header(const Problem& p, const std::string& command) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["datum"] = {{"type", p.md.rd.label}, {"rank_y", p.md.rd.rank_y}, {"semisimple_rank", p.md.rd.ss_rank}, {"num_roots", p.md.rd.num_roots()}};
    j["n"] = p.md.n;
    j["field"] = {{"p", p.field.p()}, {"q", p.field.q()}, {"generator", p.field.g()}};
    return j;
}

inline json cmd_lattices(const Problem& p) {
    const auto& md = p.md;
    const auto& rd = md.rd;
    json j = header(p, "lattices");
    json qv = json::object(), na = json::object();
    for (std::size_t i = 0; i < rd.ss_rank; ++i) {
        const std::string key = "alpha" + std::to_string(i + 1);
        qv[key] = report::int_json(md.q.Q(rd.coroots[i]));
        na[key] = report::int_json(md.n_alpha[i]);
    }
    j["Q_simple_coroots"] = qv;
    j["n_alpha"] = na;
    j["gram"] = report::mat(md.q.gram);
    j["lattices"] = {{"Y_Qn", report::mat(md.y_qn.basis)},
                     {"Y_Qn_sc", report::mat(md.y_qn_sc.basis)},
                     {"nY", report::mat(md.ny.basis)},
                     {"J", report::mat(md.j.basis)}};
    json inv = json::array();
    for (const auto& x : coset_structure(md)) inv.push_back(report::int_json(x));
    j["index_Y_Qn_over_J"] = report::int_json(lattice_index(md.y_qn, md.j));
    j["invariants_Y_Qn_over_J"] = inv;
    j["index_Y_Qn_over_Y_Qn_sc"] = report::int_json(lattice_index(md.y_qn, md.y_qn_sc));
    j["Y_Qn_equals_Y_Qn_sc"] = (md.y_qn == md.y_qn_sc);
    j["Y_Qn_equals_Y"] = (md.y_qn == md.y);
    try {
        json om = json::array();
        for (const auto& s : omega_subsets(rd)) {
            if (s.empty()) continue;
            IntVec c(rd.ss_rank, 0);
            for (int i : s) c[static_cast<std::size_t>(i - 1)] = 1;
            om.push_back({{"simples", s}, {"e_Omega", report::combo(c, "alpha", "^vee")}, {"size", s.size()},
                          {"Q_e_Omega", report::int_json(md.q.Q(omega_vector(rd, s)))}});
        }
        j["omega_subsets"] = om;
    } catch (const Error& e) {
        j["omega_subsets"] = nullptr;
        j["omega_note"] = e.what();
    }
    j["bisector"] = {{"matrix", report::mat(p.bisector.d)}, {"construction", p.bisector_construction}, {"fair", p.fair}};
    return j;
}

inline json cmd_dual(const Problem& p) {
    const auto& md = p.md;
    auto dd = dual_datum(md);
    json j = header(p, "dual");
    j["dual_type"] = dd.type;
    j["Y_Qn_basis"] = report::mat(dd.basis);
    json cart = json::array();
    for (const auto& row : dd.rd.cartan) {
        json r = json::array();
        for (const auto& x : row) r.push_back(report::int_json(x));
        cart.push_back(r);
    }
    j["dual_cartan"] = cart;
    json simples = json::array();
    for (std::size_t i = 0; i < md.rd.ss_rank; ++i)
        simples.push_back({{"alpha", i + 1},
                           {"n_alpha", report::int_json(md.n_alpha[i])},
                           {"modified_coroot_Y", report::vec(md.modified_coroot(i))},
                           {"dual_root_coords", report::vec(dd.rd.roots[i])},
                           {"dual_coroot_coords", report::vec(dd.rd.coroots[i])}});
    j["simple"] = simples;
    j["Y_Qn_equals_Y_Qn_sc"] = (md.y_qn == md.y_qn_sc);
    json inv = json::array();
    for (const auto& x : coset_structure(md)) inv.push_back(report::int_json(x));
    j["center_dual_J_invariants"] = inv;
    return j;
}

struct NamedGenerator {
    std::string name;
    IntVec y;
    std::int64_t gamma_power = 0;
    std::string formula;
};

// The generators whose values the case tables list, by Cartan type.
inline std::vector<NamedGenerator> named_generators(const RootDatum& rd) {
    std::vector<NamedGenerator> out;
    const std::string& lab = rd.label;
    if (lab.find('x') != std::string::npos || lab.empty()) return out;
    const char type = lab[0];
    const int r = std::stoi(lab.substr(1));
    auto sum_of = [&](const std::vector<int>& idx) {
        IntVec c(rd.ss_rank, 0);
        for (int i : idx) c[static_cast<std::size_t>(i - 1)] = 1;
        IntVec y(rd.rank_y, 0);
        for (int i : idx) y = add(y, rd.coroots[static_cast<std::size_t>(i - 1)]);
        return std::make_pair(report::combo(c, "alpha", "^vee"), y);
    };
    if (type == 'A' || type == 'D' || type == 'E') {
        for (const auto& s : omega_subsets(rd)) {
            if (s.empty()) continue;
            auto [name, y] = sum_of(s);
            out.push_back({"e_Omega = " + name, y, static_cast<std::int64_t>(s.size()),
                           "gamma_psi(a)^|Omega|, |Omega| = " + std::to_string(s.size())});
        }
    } else if (type == 'C') {
        out.push_back({"alpha1^vee", rd.coroots[0], 1, "gamma_psi(a)"});
        for (std::size_t i = 1; i < rd.ss_rank; ++i)
            out.push_back({"alpha" + std::to_string(i + 1) + "^vee", rd.coroots[i], 0, "1"});
    } else if (type == 'B' && r % 2 == 0) {
        std::vector<int> idx;
        for (int i = 1; i < r; i += 2) idx.push_back(i);
        auto [name, y] = sum_of(idx);
        out.push_back({name, y, r / 2, "gamma_psi(a)^(r/2), r/2 = " + std::to_string(r / 2)});
    }
    return out;
}

// Compares chi(1, y (x) a) with gamma(a)^k over val in [0, 3] and every unit class.
inline std::pair<bool, std::size_t> check_named(const Problem& p, const FormulaCharacter& fc, const NamedGenerator& g) {
    const auto& f = p.field;
    WeilIndex gamma(f, fc.seed);
    std::size_t count = 0;
    bool ok = true;
    for (std::int64_t v = 0; v <= 3; ++v)
        for (std::int64_t e = 0; e < f.q() - 1; ++e) {
            auto a = f.make(v, e);
            ++count;
            ok &= fc.chi.eval_pure(g.y, a) == from_root(f, f.rpow(gamma(a), g.gamma_power));
            ok &= from_root(f, eval_formula(p.torus, fc, g.y, a)) == fc.chi.eval_pure(g.y, a);
        }
    return {ok, count};
}

inline RootOfUnity resolve_seed(const Problem& p, const std::string& override_seed) {
    const std::string& s = !override_seed.empty() ? override_seed : p.spec.seed_psi;
    return s.empty() ? WeilIndex::default_seed(p.field) : WeilIndex::seed(p.field, s);
}

inline json obstruction_json(const ObstructionReport& r) {
    return {{"obs1", report::predicate(r.obs1)}, {"obs2", report::predicate(r.obs2)}, {"ok", r.ok()}};
}

inline json cmd_distinguished(const Problem& p, const std::string& seed_override = {}) {
    json j = header(p, "distinguished");
    auto obs = check_obstructions(p.torus);
    j["obstructions"] = obstruction_json(obs);
    if (!obs.ok()) {
        std::string w = !obs.obs1.ok ? "obs1: " + obs.obs1.witnesses.front() : "obs2: " + obs.obs2.witnesses.front();
        throw Error(ErrorKind::ObstructionPresent, "obstruction to a distinguished character", w);
    }
    auto seed = resolve_seed(p, seed_override);
    auto fc = construct_distinguished(p.torus, seed);
    j["seed_psi_exponent"] = std::to_string(seed.exp) + "/" + std::to_string(p.field.M());
    json rows = json::array();
    for (std::size_t i = 0; i < fc.k.size(); ++i)
        rows.push_back({{"e", report::vec(fc.aligned.rows[i])}, {"k", report::int_json(fc.k[i])},
                        {"A", report::int_json(fc.a[i])}, {"f", report::int_json(fc.f[i])}});
    j["aligned_basis"] = rows;
    j["predicates"] = {{"C0", report::predicate(check_c0(p.torus, fc.chi))},
                       {"C0_plus", report::predicate(check_c0_plus(p.torus, fc.chi))},
                       {"C1", report::predicate(check_c1(p.torus, fc.chi))},
                       {"weyl_invariant", report::predicate(weyl_invariance_check(p.torus, fc.chi))}};
    j["distinguished"] = is_distinguished(p.torus, fc.chi);
    j["qualified"] = is_qualified(p.torus, fc.chi);
    json table = json::array();
    for (const auto& g : named_generators(p.md.rd)) {
        if (!p.md.y_qn.contains(g.y)) continue;
        auto [ok, count] = check_named(p, fc, g);
        table.push_back({{"generator", g.name}, {"value", g.formula}, {"gamma_power", g.gamma_power},
                         {"matches", ok}, {"classes_checked", count}});
    }
    j["table"] = table;
    return j;
}

inline GenuineCharacter character_for(const Problem& p, const std::string& seed_override) {
    if (p.spec.character == "distinguished") return construct_distinguished(p.torus, resolve_seed(p, seed_override)).chi;
    return unramified_from_spec(p);
}

struct GkOptions {
    std::optional<WeylWord> word;
    std::optional<int> parabolic;
    bool formal_s = false;
    std::string seed_psi;
};

inline json factors_json(const RootDatum& rd, const std::vector<GKFactor>& fs) {
    json a = json::array();
    for (const auto& f : fs) a.push_back({{"root", report::root_name(rd, f.root)}, {"tau", report::monomial(f.tau)}});
    return a;
}

inline json cmd_gk(const Problem& p, const GkOptions& opt) {
    const auto& rd = p.md.rd;
    json j = header(p, "gk");
    auto parabolic = opt.parabolic ? opt.parabolic : p.spec.parabolic;
    WeylWord w;
    std::string source;
    if (opt.word || p.spec.word) {
        w = opt.word ? *opt.word : *p.spec.word;
        source = "word";
    } else if (parabolic) {
        w = rd.parabolic(*parabolic).unique_w;
        source = "parabolic";
    } else {
        w = rd.longest_word();
        source = "longest";
    }
    auto chi = character_for(p, opt.seed_psi);
    if (opt.formal_s || p.spec.formal_s) {
        if (!parabolic) throw Error(ErrorKind::Validation, "formal s needs a parabolic to define delta^s");
        chi = chi.twisted(p.torus, rd.parabolic(*parabolic).beta_p);
        j["twisted_by_delta_s"] = true;
    }
    j["word_source"] = source;
    j["word"] = report::word(w);
    const bool reduced = rd.is_reduced(w);
    j["word_reduced"] = reduced;
    if (!reduced) j["reduced_word"] = report::word(rd.reduced_word(w));
    auto fs = gk_coefficient(p.torus, chi, w);
    j["factors"] = factors_json(rd, fs);
    j["factor_shape"] = "(1 - q^-1 tau) / (1 - tau)";
    if (reduced) {
        auto a = fs, b = gk_via_cocycle(p.torus, chi, w);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        j["cocycle_relation_holds"] = (a == b);
    }
    return j;
}

inline json pieces_json(const RootDatum& rd, const std::vector<LPiece>& ps) {
    json a = json::array();
    for (const auto& p : ps) {
        json roots = json::array(), eig = json::array();
        for (auto r : p.roots) roots.push_back(report::root_name(rd, r));
        for (const auto& e : p.eigenvalues) eig.push_back(report::monomial(e));
        a.push_back({{"i", p.level}, {"argument", rat_str(p.argument) + "*s"}, {"dim", p.roots.size()}, {"roots", roots}, {"eigenvalues", eig}});
    }
    return a;
}

inline json cmd_constant_term(const Problem& p, std::optional<int> parabolic_override, const std::string& seed_override = {}) {
    const auto& rd = p.md.rd;
    auto par = parabolic_override ? parabolic_override : p.spec.parabolic;
    if (!par) throw Error(ErrorKind::Validation, "constant term needs a parabolic (omitted simple root)");
    auto pd = rd.parabolic(*par);
    auto chi = character_for(p, seed_override);
    auto ct = constant_term(p.torus, pd, chi);
    json j = header(p, "constant_term");
    j["parabolic"] = {{"omitted_simple", *par}, {"levi_simples", pd.levi_simples}, {"unique_w", report::word(pd.unique_w)},
                      {"self_associated", pd.self_associated}};
    json bp = json::array();
    for (const auto& x : pd.beta_p) bp.push_back(rat_str(x));
    j["parabolic"]["beta_P"] = bp;
    j["n_beta"] = report::int_json(p.md.n_alpha[static_cast<std::size_t>(*par - 1)]);
    j["numerator"] = pieces_json(rd, ct.numerator);
    j["denominator"] = pieces_json(rd, ct.denominator);
    j["m"] = ct.numerator.size();
    json poles = json::array();
    for (const auto& pl : ct.poles) poles.push_back({{"s", rat_str(pl.s)}, {"piece", pl.level}, {"condition", pl.condition}});
    j["predicted_poles"] = poles;
    if (rd.ss_rank == 1) {
        auto sc = chi_sc(p.torus, chi, 0);
        j["chi_sc"] = {{"tau", report::monomial(sc.tau)}, {"unit_value", report::monomial(sc.unit_value)}, {"trivial", sc.trivial()}};
    }
    return j;
}

inline json suite_json(const SuiteResult& r) {
    return {{"name", r.name}, {"checks", r.checks}, {"violations", r.violations}, {"examples", r.examples}};
}

// Property suites restricted to the problem's own datum, field and cover.
inline json cmd_check(const Problem& p, std::uint64_t seed = 11) {
    json j = header(p, "check");
    std::vector<SuiteResult> suites;
    suites.push_back(hilbert_suite({p.field.q()}));
    SuiteResult laws{"torus group laws", 0, 0, {}};
    torus_laws_on(p.torus, laws);
    suites.push_back(laws);
    std::mt19937_64 rng(seed);
    SuiteResult mult{"unramified multiplicativity", 0, 0, {}};
    multiplicativity_on(p.torus, rng, 200, mult);
    suites.push_back(mult);

    SuiteResult ids{"root datum identities", 0, 0, {}};
    const auto& md = p.md;
    ids.checks += md.rd.num_roots() * md.rd.rank_y;
    ids.violations += count_bq_violations(md.rd, md.q);
    ids.checks += md.rd.num_roots() * md.rd.num_roots();
    ids.violations += count_weighted_pairing_violations(md);
    if (q_divides_n(md)) {
        ids.checks += md.rd.num_roots() * md.rd.num_roots();
        ids.violations += count_n_pairing_violations(md);
    }
    ids.record(p.torus.phi_path_defects(p.field.uniformizer()) == 0, "Phi propagation is path dependent");
    dual_datum(md);
    ids.record(true, "");
    suites.push_back(ids);

    SuiteResult coc{"cocycle relation", 0, 0, {}};
    std::vector<WeylWord> elems;
    try {
        elems = md.rd.enumerate_weyl(5000);
    } catch (const Error&) {
        // Too large to enumerate: the longest element plus random reduced words.
        elems.push_back(md.rd.longest_word());
        std::uniform_int_distribution<int> pick(1, static_cast<int>(md.rd.ss_rank));
        for (int k = 0; k < 40; ++k) {
            WeylWord w(static_cast<std::size_t>(4 + k), 0);
            for (auto& x : w) x = pick(rng);
            elems.push_back(md.rd.reduced_word(w));
        }
    }
    for (int k = 0; k < 3; ++k) {
        auto chi = random_unramified(p.torus, rng);
        for (const auto& w : elems) {
            auto a = gk_coefficient(p.torus, chi, w), b = gk_via_cocycle(p.torus, chi, w);
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            coc.record(a == b, [&] { return "word " + json(w).dump(); });
        }
    }
    suites.push_back(coc);

    if (p.eta.is_trivial() && check_obstructions(p.torus).ok()) {
        SuiteResult dist{"distinguished character", 0, 0, {}};
        auto fc = construct_distinguished(p.torus, WeilIndex::default_seed(p.field));
        dist.record(check_c0(p.torus, fc.chi).ok, "C0");
        dist.record(check_c0_plus(p.torus, fc.chi).ok, "C0_plus");
        dist.record(check_c1(p.torus, fc.chi).ok, "C1");
        dist.record(weyl_invariance_check(p.torus, fc.chi).ok, "Weyl invariance");
        suites.push_back(dist);
    }

    json arr = json::array();
    std::size_t passed = 0;
    for (const auto& s : suites) {
        arr.push_back(suite_json(s));
        passed += s.ok();
    }
    j["suites"] = arr;
    j["suites_passed"] = passed;
    j["suites_total"] = suites.size();
    j["ok"] = passed == suites.size();
    return j;
}

namespace report {
inline bool is_monomial(const json& v) { return v.is_object() && v.contains("text") && v.contains("zeta"); }

// One-line form of a table cell; monomials print as their text.
inline std::string cell(const json& v) {
    if (is_monomial(v)) return v["text"].get<std::string>();
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + cell(v[i]);
        return s + "]";
    }
    return v.dump();
}
}  // namespace report

// Indented key: value rendering of a report.
inline void render_table(const json& j, std::string& out, int indent = 0) {
    const std::string pad(static_cast<std::size_t>(indent), ' ');
    auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    auto flat = [&](const json& v) {
        if (!v.is_array()) return false;
        for (const auto& x : v)
            if (x.is_object()) return false;
            else if (x.is_array())
                for (const auto& y : x)
                    if (y.is_structured()) return false;
        return true;
    };
    if (j.is_object()) {
        if (j.contains("text") && j.contains("zeta")) {
            out += pad + j["text"].get<std::string>() + "\n";
            return;
        }
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& v = it.value();
            if (v.is_object() && v.contains("text") && v.contains("zeta")) out += pad + it.key() + ": " + v["text"].get<std::string>() + "\n";
            else if (!v.is_structured() || flat(v)) out += pad + it.key() + ": " + scalar(v) + "\n";
            else {
                out += pad + it.key() + ":\n";
                render_table(v, out, indent + 2);
            }
        }
    } else if (j.is_array()) {
        for (const auto& v : j) {
            if (v.is_object()) {
                std::string line;
                for (auto it = v.begin(); it != v.end(); ++it) {
                    line += (line.empty() ? "" : " | ") + it.key() + "=" + report::cell(it.value());
                }
                out += pad + "- " + line + "\n";
            } else {
                out += pad + "- " + scalar(v) + "\n";
            }
        }
    } else {
        out += pad + scalar(j) + "\n";
    }
}

inline std::string render_table(const json& j) {
    std::string out;
    render_table(j, out);
    return out;
}

inline json error_json(const Error& e) {
    return {{"schema_version", kSchemaVersion},
            {"error", {{"kind", kind_name(e.kind())}, {"message", e.what()}, {"witness", e.witness()}}}};
}

}  // namespace bdcover
