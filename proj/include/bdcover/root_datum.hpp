#pragma once

#include "bdcover/errors.hpp"
#include "bdcover/integer.hpp"
#include "bdcover/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace bdcover {

// Letters are 1-based simple indices; [i_k, ..., i_1] acts as s_{i_k} o ... o s_{i_1}.
using WeylWord = std::vector<int>;

// A Weyl element as the permutation it induces on the root list.
using RootPerm = std::vector<std::size_t>;

struct Edge {
    int a, b;  // 1-based; for a multiple edge, a is the long root
    int mult;
};

// Dynkin edges in the labelings used throughout: see README for the pictures.
inline std::vector<Edge> dynkin_edges(char type, int rank) {
    std::vector<Edge> e;
    auto chain = [&](int from, int to) {
        for (int i = from; i < to; ++i) e.push_back({i, i + 1, 1});
    };
    switch (type) {
        case 'A':
            if (rank < 1) break;
            chain(1, rank);
            return e;
        case 'B':
            if (rank < 2) break;
            chain(1, rank - 1);
            e.push_back({rank - 1, rank, 2});
            return e;
        case 'C':
            if (rank < 2) break;
            e.push_back({1, 2, 2});
            chain(2, rank);
            return e;
        case 'D':
            if (rank < 3) break;
            e.push_back({1, 3, 1});
            e.push_back({2, 3, 1});
            chain(3, rank);
            return e;
        case 'E':
            if (rank < 6 || rank > 8) break;
            chain(1, rank - 1);
            e.push_back({3, rank, 1});
            return e;
        case 'F':
            if (rank != 4) break;
            e.push_back({1, 2, 1});
            e.push_back({2, 3, 2});
            e.push_back({3, 4, 1});
            return e;
        case 'G':
            if (rank != 2) break;
            e.push_back({1, 2, 3});
            return e;
        default:
            break;
    }
    throw Error(ErrorKind::InvalidCartan, std::string("no Cartan type ") + type + std::to_string(rank));
}

// A[i][j] = <alpha_i, alpha_j^vee>.
inline std::vector<std::vector<Int>> cartan_matrix(char type, int rank) {
    auto edges = dynkin_edges(type, rank);
    std::vector<std::vector<Int>> a(static_cast<std::size_t>(rank), std::vector<Int>(static_cast<std::size_t>(rank), 0));
    for (int i = 0; i < rank; ++i) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 2;
    for (const auto& ed : edges) {
        auto l = static_cast<std::size_t>(ed.a - 1), s = static_cast<std::size_t>(ed.b - 1);
        a[l][s] = -ed.mult;
        a[s][l] = -1;
    }
    return a;
}

// Names each connected component of a Cartan matrix, e.g. "C2", "E7", "A1xA1".
inline std::string classify_cartan(const std::vector<std::vector<Int>>& a) {
    const std::size_t l = a.size();
    if (l == 0) return "T";
    std::vector<int> comp(l, -1);
    int nc = 0;
    for (std::size_t s = 0; s < l; ++s) {
        if (comp[s] >= 0) continue;
        std::deque<std::size_t> dq{s};
        comp[s] = nc;
        while (!dq.empty()) {
            auto i = dq.front();
            dq.pop_front();
            for (std::size_t j = 0; j < l; ++j)
                if (j != i && a[i][j] != 0 && comp[j] < 0) comp[j] = nc, dq.push_back(j);
        }
        ++nc;
    }
    std::vector<std::string> names;
    for (int c = 0; c < nc; ++c) {
        std::vector<std::size_t> nodes;
        for (std::size_t i = 0; i < l; ++i)
            if (comp[i] == c) nodes.push_back(i);
        const std::size_t sz = nodes.size();
        auto deg = [&](std::size_t i) {
            int d = 0;
            for (auto j : nodes)
                if (j != i && a[i][j] != 0) ++d;
            return d;
        };
        std::string name;
        std::optional<std::pair<std::size_t, std::size_t>> multi;
        bool triple = false;
        for (auto i : nodes)
            for (auto j : nodes) {
                if (i == j) continue;
                Int m = a[i][j] * a[j][i];
                if (m == 3) triple = true;
                if (m == 2 && a[i][j] == -2) multi = std::make_pair(i, j);  // i long
            }
        if (triple) {
            name = "G2";
        } else if (multi) {
            auto [lg, sh] = *multi;
            if (sz == 2)
                name = "C2";
            else if (deg(sh) == 1)
                name = "B" + std::to_string(sz);
            else if (deg(lg) == 1)
                name = "C" + std::to_string(sz);
            else
                name = "F4";
        } else {
            std::optional<std::size_t> branch;
            for (auto i : nodes)
                if (deg(i) == 3) branch = i;
            if (!branch) {
                name = "A" + std::to_string(sz);
            } else {
                std::vector<int> arms;
                for (auto j : nodes) {
                    if (j == *branch || a[*branch][j] == 0) continue;
                    int len = 1;
                    std::size_t prev = *branch, cur = j;
                    while (true) {
                        std::optional<std::size_t> nxt;
                        for (auto k : nodes)
                            if (k != cur && k != prev && a[cur][k] != 0) nxt = k;
                        if (!nxt) break;
                        prev = cur, cur = *nxt, ++len;
                    }
                    arms.push_back(len);
                }
                std::sort(arms.begin(), arms.end());
                if (arms[0] == 1 && arms[1] == 1)
                    name = "D" + std::to_string(sz);
                else if (arms[0] == 1 && arms[1] == 2 && arms[2] <= 4)
                    name = "E" + std::to_string(sz);
                else
                    throw Error(ErrorKind::InvalidCartan, "branched diagram is not of finite type");
            }
        }
        names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    std::string out;
    for (const auto& n : names) out += (out.empty() ? "" : "x") + n;
    return out;
}

struct ParabolicDatum {
    int omitted_simple = 0;  // 1-based
    std::vector<int> levi_simples;
    RatVec beta_p;
    WeylWord unique_w;
    bool self_associated = false;
};

class RootDatum {
public:
    std::string label;
    std::size_t rank_y = 0;
    std::size_t ss_rank = 0;  // number of simple roots
    std::vector<IntVec> roots;  // X coordinates; roots[i] simple for i < ss_rank
    std::vector<IntVec> coroots;  // Y coordinates
    std::vector<IntVec> delta_coords;  // root in the simple-root basis
    std::vector<std::vector<Int>> cartan;

    // Builds all roots from the simple ones and checks the axioms.
    static RootDatum from_simple(std::size_t rank_y, const std::vector<IntVec>& simple_roots,
                                 const std::vector<IntVec>& simple_coroots, std::string label = {}) {
        RootDatum rd;
        rd.rank_y = rank_y;
        rd.ss_rank = simple_roots.size();
        if (simple_coroots.size() != rd.ss_rank)
            throw Error(ErrorKind::InvalidCartan, "simple roots and coroots differ in number");
        for (const auto& v : simple_roots)
            if (v.size() != rank_y) throw Error(ErrorKind::InvalidCartan, "simple root has wrong length");
        for (const auto& v : simple_coroots)
            if (v.size() != rank_y) throw Error(ErrorKind::InvalidCartan, "simple coroot has wrong length");
        const std::size_t l = rd.ss_rank;
        rd.cartan.assign(l, std::vector<Int>(l, 0));
        for (std::size_t i = 0; i < l; ++i)
            for (std::size_t j = 0; j < l; ++j) rd.cartan[i][j] = dot(simple_roots[i], simple_coroots[j]);
        for (std::size_t i = 0; i < l; ++i) {
            if (rd.cartan[i][i] != 2)
                throw Error(ErrorKind::AxiomViolation, "<alpha, alpha^vee> != 2 for simple index " + std::to_string(i + 1));
            for (std::size_t j = 0; j < l; ++j)
                if (i != j && (rd.cartan[i][j] > 0 || ((rd.cartan[i][j] == 0) != (rd.cartan[j][i] == 0))))
                    throw Error(ErrorKind::InvalidCartan, "not a generalized Cartan matrix at (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
        if (hnf(IntMatrix::from_rows(simple_roots, rank_y)).nrows() != l ||
            hnf(IntMatrix::from_rows(simple_coroots, rank_y)).nrows() != l)
            throw Error(ErrorKind::AxiomViolation, "simple roots or coroots are linearly dependent");

        std::map<IntVec, std::size_t> seen;
        std::deque<std::size_t> dq;
        for (std::size_t i = 0; i < l; ++i) {
            rd.roots.push_back(simple_roots[i]);
            rd.coroots.push_back(simple_coroots[i]);
            rd.delta_coords.push_back(unit_vec(l, i));
            seen[simple_roots[i]] = i;
            dq.push_back(i);
        }
        constexpr std::size_t kMaxRoots = 2000;
        while (!dq.empty()) {
            auto r = dq.front();
            dq.pop_front();
            for (std::size_t i = 0; i < l; ++i) {
                IntVec nr = rd.reflect_x_raw(i, rd.roots[r]);
                if (seen.count(nr)) continue;
                IntVec nc = rd.reflect_y_raw(i, rd.coroots[r]);
                IntVec nd = rd.delta_coords[r];
                nd[i] -= dot(rd.roots[r], simple_coroots[i]);
                seen[nr] = rd.roots.size();
                rd.roots.push_back(nr);
                rd.coroots.push_back(nc);
                rd.delta_coords.push_back(nd);
                dq.push_back(rd.roots.size() - 1);
                if (rd.roots.size() > kMaxRoots) throw Error(ErrorKind::InvalidCartan, "root system is not finite");
            }
        }
        rd.index_ = seen;
        for (std::size_t i = 0; i < l; ++i) rd.perms_.push_back(rd.simple_perm(i));
        rd.label = label.empty() ? classify_cartan(rd.cartan) : label;
        rd.validate();
        return rd;
    }

    static RootDatum build(char type, int rank, const std::string& isogeny) {
        auto a = cartan_matrix(type, rank);
        const auto l = static_cast<std::size_t>(rank);
        std::vector<IntVec> sr(l, IntVec(l, 0)), sc(l, IntVec(l, 0));
        if (isogeny == "sc" || isogeny == "simply-connected") {
            for (std::size_t i = 0; i < l; ++i) {
                sc[i] = unit_vec(l, i);
                for (std::size_t j = 0; j < l; ++j) sr[i][j] = a[i][j];
            }
        } else if (isogeny == "adjoint" || isogeny == "ad") {
            for (std::size_t i = 0; i < l; ++i) {
                sr[i] = unit_vec(l, i);
                for (std::size_t j = 0; j < l; ++j) sc[i][j] = a[j][i];
            }
        } else {
            throw Error(ErrorKind::InvalidCartan, "unknown isogeny '" + isogeny + "'");
        }
        return from_simple(l, sr, sc, std::string(1, type) + std::to_string(rank));
    }

    std::size_t num_roots() const { return roots.size(); }
    bool is_positive(std::size_t r) const {
        for (const auto& c : delta_coords[r])
            if (c != 0) return c > 0;
        return false;
    }
    std::vector<std::size_t> positive_roots() const {
        std::vector<std::size_t> out;
        for (std::size_t r = 0; r < roots.size(); ++r)
            if (is_positive(r)) out.push_back(r);
        return out;
    }
    std::optional<std::size_t> root_index(const IntVec& x) const {
        auto it = index_.find(x);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t negative_of(std::size_t r) const { return *root_index(scale(-1, roots[r])); }
    Int pairing(const IntVec& x, const IntVec& y) const { return dot(x, y); }

    // s_i on Y and X, i 1-based.
    IntVec reflect_y(int i, const IntVec& y) const { return reflect_y_raw(static_cast<std::size_t>(i - 1), y); }
    IntVec reflect_x(int i, const IntVec& x) const { return reflect_x_raw(static_cast<std::size_t>(i - 1), x); }

    IntVec apply_y(const WeylWord& w, IntVec y) const {
        check_word(w);
        for (auto it = w.rbegin(); it != w.rend(); ++it) y = reflect_y(*it, y);
        return y;
    }
    IntVec apply_x(const WeylWord& w, IntVec x) const {
        check_word(w);
        for (auto it = w.rbegin(); it != w.rend(); ++it) x = reflect_x(*it, x);
        return x;
    }
    RatVec apply_x(const WeylWord& w, RatVec x) const {
        check_word(w);
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            auto i = static_cast<std::size_t>(*it - 1);
            Rat c = dot(x, coroots[i]);
            for (std::size_t k = 0; k < x.size(); ++k) x[k] -= c * Rat(roots[i][k]);
        }
        return x;
    }

    RootPerm simple_perm(std::size_t i) const {
        RootPerm p(roots.size());
        for (std::size_t r = 0; r < roots.size(); ++r) p[r] = *root_index(reflect_x_raw(i, roots[r]));
        return p;
    }
    RootPerm identity_perm() const {
        RootPerm p(roots.size());
        for (std::size_t r = 0; r < p.size(); ++r) p[r] = r;
        return p;
    }
    // (a o b)(r) = a(b(r))
    static RootPerm compose(const RootPerm& a, const RootPerm& b) {
        RootPerm c(a.size());
        for (std::size_t r = 0; r < a.size(); ++r) c[r] = a[b[r]];
        return c;
    }
    RootPerm perm_of(const WeylWord& w) const {
        check_word(w);
        RootPerm p = identity_perm();
        for (int letter : w) p = compose(p, simple_perms()[static_cast<std::size_t>(letter - 1)]);
        return p;
    }

    std::vector<std::size_t> inversion_set(const WeylWord& w) const {
        auto p = perm_of(w);
        std::vector<std::size_t> out;
        for (auto r : positive_roots())
            if (!is_positive(p[r])) out.push_back(r);
        return out;
    }

    WeylWord reduced_word_of(RootPerm p) const {
        WeylWord rev;
        while (true) {
            std::optional<std::size_t> d;
            for (std::size_t i = 0; i < ss_rank && !d; ++i)
                if (!is_positive(p[i])) d = i;
            if (!d) break;
            rev.push_back(static_cast<int>(*d + 1));
            p = compose(p, simple_perms()[*d]);
        }
        return WeylWord(rev.rbegin(), rev.rend());
    }
    WeylWord reduced_word(const WeylWord& w) const { return reduced_word_of(perm_of(w)); }
    bool is_reduced(const WeylWord& w) const { return inversion_set(w).size() == w.size(); }

    // Longest element of the parabolic subgroup generated by J (1-based).
    WeylWord longest_word(const std::vector<int>& j) const {
        RootPerm g = identity_perm();
        WeylWord word;
        while (true) {
            std::optional<int> step;
            for (int s : j)
                if (is_positive(g[static_cast<std::size_t>(s - 1)])) {
                    step = s;
                    break;
                }
            if (!step) break;
            g = compose(g, simple_perms()[static_cast<std::size_t>(*step - 1)]);
            word.push_back(*step);
        }
        return word;
    }
    WeylWord longest_word() const {
        std::vector<int> all;
        for (std::size_t i = 0; i < ss_rank; ++i) all.push_back(static_cast<int>(i + 1));
        return longest_word(all);
    }

    ParabolicDatum parabolic(int beta) const {
        if (beta < 1 || static_cast<std::size_t>(beta) > ss_rank)
            throw Error(ErrorKind::Validation, "parabolic index " + std::to_string(beta) + " is not a simple root");
        ParabolicDatum pd;
        pd.omitted_simple = beta;
        for (std::size_t i = 0; i < ss_rank; ++i)
            if (static_cast<int>(i + 1) != beta) pd.levi_simples.push_back(static_cast<int>(i + 1));
        const auto b = static_cast<std::size_t>(beta - 1);
        IntVec two_rho(rank_y, 0);
        for (auto r : positive_roots())
            if (delta_coords[r][b] != 0) two_rho = add(two_rho, roots[r]);
        Int denom = dot(two_rho, coroots[b]);
        pd.beta_p.resize(rank_y);
        for (std::size_t k = 0; k < rank_y; ++k) pd.beta_p[k] = make_rat(two_rho[k], denom);
        WeylWord wg = longest_word(), wm = longest_word(pd.levi_simples);
        WeylWord w = wg;
        w.insert(w.end(), wm.begin(), wm.end());
        pd.unique_w = reduced_word(w);
        auto p = perm_of(pd.unique_w);
        std::set<std::size_t> levi, image;
        for (int s : pd.levi_simples) {
            levi.insert(static_cast<std::size_t>(s - 1));
            image.insert(p[static_cast<std::size_t>(s - 1)]);
        }
        pd.self_associated = (levi == image);
        return pd;
    }

    // All elements as reduced words, breadth first; throws past the limit.
    std::vector<WeylWord> enumerate_weyl(std::size_t limit = 100000) const {
        std::map<RootPerm, WeylWord> seen;
        std::deque<RootPerm> dq;
        seen[identity_perm()] = {};
        dq.push_back(identity_perm());
        std::vector<WeylWord> out{{}};
        while (!dq.empty()) {
            auto p = dq.front();
            dq.pop_front();
            const auto w = seen[p];
            for (std::size_t i = 0; i < ss_rank; ++i) {
                auto np = compose(simple_perms()[i], p);
                if (seen.count(np)) continue;
                WeylWord nw{static_cast<int>(i + 1)};
                nw.insert(nw.end(), w.begin(), w.end());
                seen[np] = nw;
                out.push_back(nw);
                dq.push_back(np);
                if (out.size() > limit) throw Error(ErrorKind::Validation, "Weyl group exceeds enumeration limit");
            }
        }
        return out;
    }

    void validate() const {
        for (std::size_t r = 0; r < roots.size(); ++r) {
            if (dot(roots[r], coroots[r]) != 2)
                throw Error(ErrorKind::AxiomViolation, "<alpha, alpha^vee> != 2", "root " + std::to_string(r));
            bool pos = false, neg = false;
            for (const auto& c : delta_coords[r]) pos |= c > 0, neg |= c < 0;
            if (pos == neg) throw Error(ErrorKind::AxiomViolation, "root is neither positive nor negative");
        }
        for (std::size_t a = 0; a < roots.size(); ++a)
            for (std::size_t b = 0; b < roots.size(); ++b) {
                Int c = dot(roots[b], coroots[a]);
                IntVec x = sub(roots[b], scale(c, roots[a]));
                IntVec y = sub(coroots[b], scale(dot(roots[a], coroots[b]), coroots[a]));
                auto idx = root_index(x);
                if (!idx || coroots[*idx] != y)
                    throw Error(ErrorKind::AxiomViolation, "reflection does not preserve the (co)root system",
                                "pair (" + std::to_string(a) + "," + std::to_string(b) + ")");
            }
    }

private:
    IntVec reflect_y_raw(std::size_t i, const IntVec& y) const {
        return sub(y, scale(dot(roots[i], y), coroots[i]));
    }
    IntVec reflect_x_raw(std::size_t i, const IntVec& x) const {
        return sub(x, scale(dot(x, coroots[i]), roots[i]));
    }
    void check_word(const WeylWord& w) const {
        for (int s : w)
            if (s < 1 || static_cast<std::size_t>(s) > ss_rank)
                throw Error(ErrorKind::Validation, "Weyl letter " + std::to_string(s) + " out of range");
    }
    const std::vector<RootPerm>& simple_perms() const { return perms_; }

    std::map<IntVec, std::size_t> index_;
    std::vector<RootPerm> perms_;
};

}  // namespace bdcover
