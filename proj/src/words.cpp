#include "fbc/words.hpp"
#include "fbc/error.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fbc {

namespace {

void push_reduced(std::vector<int>& out, int l) {
    if (!out.empty() && out.back() == -l)
        out.pop_back();
    else
        out.push_back(l);
}

}  // namespace

Word::Word(std::vector<int> l) {
    letters.reserve(l.size());
    for (int x : l) push_reduced(letters, x);
}

int Word::max_generator() const {
    int m = 0;
    for (int l : letters) m = std::max(m, std::abs(l));
    return m;
}

bool operator<(const Word& a, const Word& b) {
    if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
    return a.letters < b.letters;
}

Word generator(int k) {
    Word w;
    w.letters.push_back(k);
    return w;
}

Word multiply(const Word& u, const Word& v) {
    Word r;
    size_t cancel = 0;
    size_t nu = u.letters.size(), nv = v.letters.size();
    while (cancel < nu && cancel < nv && u.letters[nu - 1 - cancel] == -v.letters[cancel]) ++cancel;
    r.letters.reserve(nu + nv - 2 * cancel);
    r.letters.insert(r.letters.end(), u.letters.begin(), u.letters.end() - cancel);
    r.letters.insert(r.letters.end(), v.letters.begin() + cancel, v.letters.end());
    return r;
}

Word multiply_checked(const Word& u, const Word& v, int rank) {
    if (u.max_generator() > rank || v.max_generator() > rank)
        throw InputError("rank mismatch: word uses a generator beyond rank " + std::to_string(rank));
    return multiply(u, v);
}

Word inverse(const Word& w) {
    Word r;
    r.letters.reserve(w.size());
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) r.letters.push_back(-*it);
    return r;
}

Word power(const Word& w, long long k) {
    Word base = k < 0 ? inverse(w) : w;
    Word r;
    for (long long i = 0; i < std::llabs(k); ++i) r = multiply(r, base);
    return r;
}

Word conjugate(const Word& c, const Word& w) { return multiply(multiply(c, w), inverse(c)); }

Word common_prefix(const Word& u, const Word& v) {
    Word r;
    for (size_t i = 0; i < u.size() && i < v.size() && u.letters[i] == v.letters[i]; ++i)
        r.letters.push_back(u.letters[i]);
    return r;
}

std::vector<long long> abelian(const Word& w, int rank) {
    std::vector<long long> e(rank, 0);
    for (int l : w.letters) e[std::abs(l) - 1] += l > 0 ? 1 : -1;
    return e;
}

char letter_name(int l) {
    return l > 0 ? static_cast<char>('a' + l - 1) : static_cast<char>('A' + (-l) - 1);
}

Word parse_word(const std::string& text, int rank) {
    std::vector<int> raw;
    size_t i = 0;
    while (i < text.size()) {
        unsigned char c = text[i];
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string tok = text.substr(start, i - start);
        if (tok == "1") continue;
        for (size_t k = 0; k < tok.size(); ++k) {
            unsigned char ch = tok[k];
            int g;
            if (ch >= 'a' && ch <= 'z')
                g = ch - 'a' + 1;
            else if (ch >= 'A' && ch <= 'Z')
                g = -(ch - 'A' + 1);
            else
                throw InputError("syntax error at position " + std::to_string(start + k) + ": unexpected '" +
                                 std::string(1, static_cast<char>(ch)) + "'");
            if (std::abs(g) > rank)
                throw InputError("generator out of range at position " + std::to_string(start + k) + ": '" +
                                 std::string(1, static_cast<char>(ch)) + "' with rank " + std::to_string(rank));
            raw.push_back(g);
        }
    }
    return Word(raw);
}

std::string to_string(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) s += ' ';
        s += letter_name(w.letters[i]);
    }
    return s;
}

std::string to_compact(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (int l : w.letters) s += letter_name(l);
    return s;
}

void fr_add_term(FreeRingElem& x, const Word& w, const Int& c) {
    if (c == 0) return;
    auto it = x.find(w);
    if (it == x.end()) {
        x.emplace(w, c);
        return;
    }
    it->second += c;
    if (it->second == 0) x.erase(it);
}

FreeRingElem fr_add(const FreeRingElem& x, const FreeRingElem& y) {
    FreeRingElem r = x;
    for (const auto& [w, c] : y) fr_add_term(r, w, c);
    return r;
}

FreeRingElem fr_sub(const FreeRingElem& x, const FreeRingElem& y) {
    FreeRingElem r = x;
    for (const auto& [w, c] : y) fr_add_term(r, w, -c);
    return r;
}

FreeRingElem fr_mul(const FreeRingElem& x, const FreeRingElem& y) {
    FreeRingElem r;
    for (const auto& [u, a] : x)
        for (const auto& [v, b] : y) fr_add_term(r, multiply(u, v), a * b);
    return r;
}

FreeRingElem fr_word(const Word& w, const Int& c) {
    FreeRingElem r;
    fr_add_term(r, w, c);
    return r;
}

std::string to_string(const FreeRingElem& x) {
    if (x.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : x) {
        Int a = c;
        if (first) {
            if (a < 0) os << "-";
        } else {
            os << (a < 0 ? " - " : " + ");
        }
        if (a < 0) a = -a;
        if (a != 1) os << a << "*";
        os << to_compact(w);
        first = false;
    }
    return os.str();
}

FreeRingElem fox_derivative(const Word& w, int i) {
    FreeRingElem d;
    Word prefix;
    for (int l : w.letters) {
        if (l == i) fr_add_term(d, prefix, 1);
        Word next = multiply(prefix, generator(l));
        if (l == -i) fr_add_term(d, next, -1);
        prefix = std::move(next);
    }
    return d;
}

bool fundamental_formula_check(const Word& w, int rank) {
    FreeRingElem lhs;
    for (int i = 1; i <= rank; ++i) {
        FreeRingElem one_minus_s;
        fr_add_term(one_minus_s, Word(), 1);
        fr_add_term(one_minus_s, generator(i), -1);
        lhs = fr_add(lhs, fr_mul(fox_derivative(w, i), one_minus_s));
    }
    FreeRingElem rhs;
    fr_add_term(rhs, Word(), 1);
    fr_add_term(rhs, w, -1);
    return lhs == rhs;
}

Endomorphism Endomorphism::identity(int n) {
    Endomorphism g;
    g.rank = n;
    for (int i = 1; i <= n; ++i) g.images.push_back(generator(i));
    return g;
}

Word Endomorphism::apply(const Word& w) const {
    std::vector<int> out;
    for (int l : w.letters) {
        const Word& img = images[std::abs(l) - 1];
        if (l > 0)
            for (int x : img.letters) push_reduced(out, x);
        else
            for (auto it = img.letters.rbegin(); it != img.letters.rend(); ++it) push_reduced(out, -*it);
    }
    Word r;
    r.letters = std::move(out);
    return r;
}

Endomorphism Endomorphism::compose(const Endomorphism& other) const {
    Endomorphism r;
    r.rank = rank;
    for (const auto& img : other.images) r.images.push_back(apply(img));
    return r;
}

Endomorphism parse_endomorphism(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int rank = -1;
    std::vector<std::optional<Word>> imgs;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string trimmed;
        {
            size_t a = line.find_first_not_of(" \t\r");
            size_t b = line.find_last_not_of(" \t\r");
            if (a == std::string::npos) continue;
            trimmed = line.substr(a, b - a + 1);
        }
        auto where = "line " + std::to_string(lineno) + ": ";
        if (rank < 0) {
            if (trimmed.rfind("rank:", 0) != 0) throw InputError(where + "expected 'rank: n'");
            std::string num = trimmed.substr(5);
            try {
                size_t used = 0;
                rank = std::stoi(num, &used);
                if (num.find_first_not_of(" \t", used) != std::string::npos) throw InputError("");
            } catch (...) {
                throw InputError(where + "bad rank '" + num + "'");
            }
            if (rank < 1 || rank > 26) throw InputError(where + "rank must be in 1..26");
            imgs.assign(rank, std::nullopt);
            continue;
        }
        auto arrow = trimmed.find("->");
        if (arrow == std::string::npos) throw InputError(where + "expected '<generator> -> <word>'");
        std::string lhs = trimmed.substr(0, arrow);
        lhs.erase(std::remove_if(lhs.begin(), lhs.end(), [](unsigned char c) { return std::isspace(c); }),
                  lhs.end());
        if (lhs.size() != 1 || lhs[0] < 'a' || lhs[0] > 'z')
            throw InputError(where + "left side must be a single lowercase generator");
        int g = lhs[0] - 'a';
        if (g >= rank) throw InputError(where + "generator '" + lhs + "' out of range");
        if (imgs[g]) throw InputError(where + "generator '" + lhs + "' defined twice");
        try {
            imgs[g] = parse_word(trimmed.substr(arrow + 2), rank);
        } catch (const InputError& e) {
            throw InputError(where + e.what());
        }
    }
    if (rank < 0) throw InputError("missing 'rank: n' line");
    Endomorphism e;
    e.rank = rank;
    for (int i = 0; i < rank; ++i) {
        if (!imgs[i]) throw InputError(std::string("missing image of generator '") + letter_name(i + 1) + "'");
        e.images.push_back(*imgs[i]);
    }
    return e;
}

std::string to_text(const Endomorphism& g) {
    std::ostringstream os;
    os << "rank: " << g.rank << "\n";
    for (int i = 0; i < g.rank; ++i) os << letter_name(i + 1) << " -> " << to_string(g.images[i]) << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Folding

FoldedGraph::FoldedGraph(const std::vector<Word>& gens, int rank) : n_(rank) {
    struct E {
        int from, to, label;
        Word mem;
        bool alive = true;
    };
    std::vector<E> es;
    std::vector<std::vector<int>> inc(1);
    int nv = 1;
    int nonempty = 0;
    auto new_vertex = [&]() {
        inc.emplace_back();
        return nv++;
    };
    auto add_edge = [&](int from, int to, int label, Word mem) {
        es.push_back({from, to, label, std::move(mem)});
        int id = static_cast<int>(es.size()) - 1;
        inc[from].push_back(id);
        if (to != from) inc[to].push_back(id);
    };
    for (size_t gi = 0; gi < gens.size(); ++gi) {
        const Word& w = gens[gi];
        if (w.empty()) continue;
        ++nonempty;
        int cur = 0;
        for (size_t j = 0; j < w.size(); ++j) {
            int l = w.letters[j];
            bool last = j + 1 == w.size();
            int next = last ? 0 : new_vertex();
            Word mem;
            if (last) mem = generator(static_cast<int>(gi) + 1);
            if (l > 0)
                add_edge(cur, next, l, mem);
            else
                add_edge(next, cur, -l, inverse(mem));
            cur = next;
        }
    }

    std::vector<bool> vertex_alive(nv, true);
    std::vector<int> stack;
    for (int v = 0; v < nv; ++v) stack.push_back(v);
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (!vertex_alive[v]) continue;
        bool changed = true;
        while (changed) {
            changed = false;
            std::map<int, int> seen;
            // drop dead edge ids lazily
            auto& lst = inc[v];
            lst.erase(std::remove_if(lst.begin(), lst.end(), [&](int id) { return !es[id].alive; }), lst.end());
            for (int id : lst) {
                const E& e = es[id];
                std::vector<int> keys;
                if (e.from == v) keys.push_back(e.label);
                if (e.to == v) keys.push_back(-e.label);
                for (int key : keys) {
                    auto it = seen.find(key);
                    if (it == seen.end()) {
                        seen.emplace(key, id);
                        continue;
                    }
                    int e1 = it->second, e2 = id;
                    if (e1 == e2) continue;
                    int w1 = key > 0 ? es[e1].to : es[e1].from;
                    int w2 = key > 0 ? es[e2].to : es[e2].from;
                    if (w1 == w2) {
                        if (es[e1].mem != es[e2].mem) basis_ = false;
                        es[e2].alive = false;
                        changed = true;
                        break;
                    }
                    if (w2 == 0) {
                        std::swap(e1, e2);
                        std::swap(w1, w2);
                    }
                    int keep = w1, rem = w2;
                    const Word m1 = es[e1].mem, m2 = es[e2].mem;
                    Word gamma = key > 0 ? multiply(inverse(m1), m2) : multiply(m1, inverse(m2));
                    Word gamma_inv = inverse(gamma);
                    for (int fid : inc[rem]) {
                        E& f = es[fid];
                        if (!f.alive) continue;
                        if (f.from == rem) f.mem = multiply(gamma, f.mem);
                        if (f.to == rem) f.mem = multiply(f.mem, gamma_inv);
                    }
                    for (int fid : inc[rem]) {
                        E& f = es[fid];
                        if (!f.alive) continue;
                        bool touches_keep = f.from == keep || f.to == keep;
                        if (f.from == rem) f.from = keep;
                        if (f.to == rem) f.to = keep;
                        if (!touches_keep) inc[keep].push_back(fid);
                    }
                    inc[rem].clear();
                    vertex_alive[rem] = false;
                    es[e2].alive = false;
                    stack.push_back(keep);
                    for (int fid : inc[keep]) {
                        if (!es[fid].alive) continue;
                        stack.push_back(es[fid].from);
                        stack.push_back(es[fid].to);
                    }
                    changed = true;
                    break;
                }
                if (changed) break;
            }
            if (!vertex_alive[v]) break;
        }
    }

    // compact
    std::vector<int> remap(nv, -1);
    for (int v = 0; v < nv; ++v)
        if (vertex_alive[v]) remap[v] = vertices_++;
    step_.assign(vertices_, {});
    for (const auto& e : es) {
        if (!e.alive) continue;
        Edge ne{remap[e.from], remap[e.to], e.label, e.mem};
        edges_.push_back(ne);
        int id = static_cast<int>(edges_.size()) - 1;
        step_[ne.from][ne.label] = id;
        step_[ne.to][-ne.label] = id;
    }
    rank_ = static_cast<int>(edges_.size()) - vertices_ + 1;
    if (rank_ != nonempty || nonempty != static_cast<int>(gens.size())) basis_ = false;
}

bool FoldedGraph::read(const Word& w, Word* mem) const {
    int cur = 0;
    std::vector<int> acc;
    for (int l : w.letters) {
        auto it = step_[cur].find(l);
        if (it == step_[cur].end()) return false;
        const Edge& e = edges_[it->second];
        if (l > 0) {
            if (mem) acc.insert(acc.end(), e.mem.letters.begin(), e.mem.letters.end());
            cur = e.to;
        } else {
            if (mem)
                for (auto r = e.mem.letters.rbegin(); r != e.mem.letters.rend(); ++r) acc.push_back(-*r);
            cur = e.from;
        }
    }
    if (cur != 0) return false;
    if (mem) *mem = Word(acc);
    return true;
}

bool FoldedGraph::contains(const Word& w) const { return read(w, nullptr); }

std::optional<Word> FoldedGraph::try_preimage(const Word& w) const {
    Word m;
    if (!read(w, &m)) return std::nullopt;
    return m;
}

Word FoldedGraph::preimage(const Word& w) const {
    auto r = try_preimage(w);
    if (!r) throw InputError("preimage requested for non-member " + to_string(w));
    return *r;
}

bool FoldedGraph::is_whole_group() const {
    if (vertices_ != 1) return false;
    for (int i = 1; i <= n_; ++i)
        if (!step_[0].count(i)) return false;
    return true;
}

FoldedGraph fold_subgroup(const std::vector<Word>& gens, int rank) { return FoldedGraph(gens, rank); }

bool is_injective(const Endomorphism& g) {
    for (const auto& w : g.images)
        if (w.empty()) return false;
    return fold_subgroup(g.images, g.rank).rank() == g.rank;
}

bool is_automorphism(const Endomorphism& g) {
    if (!is_injective(g)) return false;
    return fold_subgroup(g.images, g.rank).is_whole_group();
}

Endomorphism inverse(const Endomorphism& g) {
    FoldedGraph fg(g.images, g.rank);
    if (!fg.is_basis() || !fg.is_whole_group()) throw MathError("endomorphism is not an automorphism");
    Endomorphism r;
    r.rank = g.rank;
    for (int i = 1; i <= g.rank; ++i) r.images.push_back(fg.preimage(generator(i)));
    return r;
}

}  // namespace fbc
