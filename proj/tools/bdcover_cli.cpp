#include "bdcover/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace bdcover;

struct Options {
    std::string input;
    std::string format = "table";
    std::string word;
    std::optional<int> parabolic;
    bool formal_s = false;
    std::string seed_psi;
    bool check = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Parse, "cannot open input file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

WeylWord parse_word(const std::string& s) {
    WeylWord w;
    if (s.empty()) return w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            int v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            w.push_back(v);
        } catch (const std::exception&) {
            throw Error(ErrorKind::Parse, "--word: '" + tok + "' is not an integer");
        }
    }
    return w;
}

json run(const std::string& command, const Options& o) {
    auto spec = parse_problem_text(read_file(o.input));
    if (!o.seed_psi.empty()) spec.seed_psi = o.seed_psi;
    auto p = build_problem(spec);
    json out;
    if (command == "lattices") out = cmd_lattices(p);
    else if (command == "dual") out = cmd_dual(p);
    else if (command == "distinguished") out = cmd_distinguished(p);
    else if (command == "gk") {
        GkOptions g;
        if (!o.word.empty()) g.word = parse_word(o.word);
        g.parabolic = o.parabolic;
        g.formal_s = o.formal_s;
        out = cmd_gk(p, g);
    } else if (command == "constant-term") out = cmd_constant_term(p, o.parabolic);
    else out = cmd_check(p);
    if (o.check && command != "check") out["check"] = cmd_check(p);
    return out;
}

void emit(const json& j, const std::string& format, std::ostream& os) {
    if (format == "json") os << j.dump(2) << "\n";
    else os << render_table(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariants of covering groups over tame local fields"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"lattices", "n_alpha table, Y_{Q,n} and related lattices, Omega subsets"},
        {"dual", "modified root datum and its type"},
        {"distinguished", "distinguished genuine character and its value table"},
        {"gk", "Gindikin-Karpelevich factors for a Weyl element"},
        {"constant-term", "L-function factorization of a constant term"},
        {"check", "property suites on the problem's datum"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--input", o.input, "problem file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--word", o.word, "Weyl word as a comma list of simple indices");
        sub->add_option("--parabolic", o.parabolic, "omitted simple root index");
        sub->add_flag("--formal-s", o.formal_s, "twist by delta_P^s");
        sub->add_option("--seed-psi", o.seed_psi, "Weil index seed")->check(CLI::IsMember({"+i", "-i", "+1", "-1"}));
        sub->add_flag("--check", o.check, "append the property suites");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    std::string command;
    for (auto* s : app.get_subcommands()) command = s->get_name();
    try {
        json out = run(command, o);
        emit(out, o.format, std::cout);
        if (command == "check" && !out.value("ok", false)) return 3;
        return 0;
    } catch (const Error& e) {
        emit(error_json(e), o.format, std::cerr);
        return e.exit_code();
    } catch (const json::exception& e) {
        emit(error_json(Error(ErrorKind::Parse, e.what())), o.format, std::cerr);
        return 2;
    }
}
