#include "fbc/upg.hpp"
#include "fbc/error.hpp"

#include <map>
#include <sstream>

namespace fbc {

namespace {

using NodePtr = std::shared_ptr<CertNode>;

struct Parser {
    std::vector<std::string> tokens;
    size_t pos = 0;
    int rank;

    const std::string& peek() const {
        static const std::string end;
        return pos < tokens.size() ? tokens[pos] : end;
    }
    std::string next() {
        if (pos >= tokens.size()) throw InputError("certificate: unexpected end of input");
        return tokens[pos++];
    }
    void expect(const std::string& t) {
        std::string got = next();
        if (got != t) throw InputError("certificate: expected '" + t + "', got '" + got + "'");
    }
    Word word(const std::string& tok) {
        if (tok == "(" || tok == ")") throw InputError("certificate: expected a word, got '" + tok + "'");
        return parse_word(tok, rank);
    }
    Word field(const std::string& key) {
        std::string tok = next();
        if (tok.rfind(key + "=", 0) != 0) throw InputError("certificate: expected '" + key + "=<word>', got '" + tok + "'");
        return word(tok.substr(key.size() + 1));
    }

    NodePtr node() {
        expect("(");
        auto n = std::make_shared<CertNode>();
        std::string head = next();
        if (head == "leaf") {
            n->kind = CertNode::Kind::leaf;
            n->word = word(next());
        } else if (head == "case1") {
            n->kind = CertNode::Kind::case1;
            n->children.push_back(node());
            n->children.push_back(node());
        } else if (head == "case2") {
            n->kind = CertNode::Kind::case2;
            n->children.push_back(node());
            n->word = field("x");
            n->u = field("u");
        } else if (head == "conj") {
            n->kind = CertNode::Kind::conj;
            n->word = word(next());
            n->children.push_back(node());
        } else {
            throw InputError("certificate: unknown node '" + head + "'");
        }
        expect(")");
        return n;
    }
};

void write(const CertNode& n, std::ostream& os) {
    switch (n.kind) {
    case CertNode::Kind::leaf:
        os << "(leaf " << to_compact(n.word) << ")";
        break;
    case CertNode::Kind::case1:
        os << "(case1 ";
        write(*n.children[0], os);
        os << " ";
        write(*n.children[1], os);
        os << ")";
        break;
    case CertNode::Kind::case2:
        os << "(case2 ";
        write(*n.children[0], os);
        os << " x=" << to_compact(n.word) << " u=" << to_compact(n.u) << ")";
        break;
    case CertNode::Kind::conj:
        os << "(conj " << to_compact(n.word) << " ";
        write(*n.children[0], os);
        os << ")";
        break;
    }
}

void collect_basis(const CertNode& n, std::vector<Word>& out) {
    if (n.kind == CertNode::Kind::leaf) out.push_back(n.word);
    for (const auto& c : n.children) collect_basis(*c, out);
    if (n.kind == CertNode::Kind::case2) out.push_back(n.word);
}

// Images of the node's basis elements under the map the tree describes.
std::map<Word, Word> reconstruct(const CertNode& n, int rank, std::vector<std::string>& problems) {
    std::map<Word, Word> m;
    switch (n.kind) {
    case CertNode::Kind::leaf:
        m[n.word] = n.word;
        break;
    case CertNode::Kind::case1:
        for (const auto& c : n.children)
            for (auto& kv : reconstruct(*c, rank, problems)) m.insert(kv);
        break;
    case CertNode::Kind::case2: {
        m = reconstruct(*n.children[0], rank, problems);
        std::vector<Word> base;
        collect_basis(*n.children[0], base);
        if (!fold_subgroup(base, rank).contains(n.u))
            problems.push_back("case2: u=" + to_compact(n.u) + " is not in the invariant factor");
        m[n.word] = multiply(n.word, n.u);
        break;
    }
    case CertNode::Kind::conj: {
        auto inner = reconstruct(*n.children[0], rank, problems);
        std::vector<Word> base;
        collect_basis(*n.children[0], base);
        if (!fold_subgroup(base, rank).contains(n.word))
            problems.push_back("conj: " + to_compact(n.word) + " is not in its factor");
        for (auto& [y, img] : inner) m[y] = multiply(multiply(inverse(n.word), img), n.word);
        break;
    }
    }
    return m;
}

void collect_t(const HnnGroup& G, const CertNode& n, const HnnElement& T, std::vector<HnnElement>& out) {
    switch (n.kind) {
    case CertNode::Kind::leaf:
        break;
    case CertNode::Kind::case1:
        collect_t(G, *n.children[0], T, out);
        collect_t(G, *n.children[1], T, out);
        out.push_back(T);
        break;
    case CertNode::Kind::case2:
        collect_t(G, *n.children[0], T, out);
        out.push_back(T);
        break;
    case CertNode::Kind::conj:
        collect_t(G, *n.children[0], G.multiply(T, G.element(inverse(n.word))), out);
        break;
    }
}

}  // namespace

SplittingCertificate parse_certificate(const std::string& text, int rank) {
    SplittingCertificate c;
    std::string tree;
    std::istringstream in(text);
    std::string line;
    bool have_conj = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        if (line.compare(a, 5, "conj:") == 0) {
            if (have_conj) throw InputError("certificate: repeated 'conj:' line");
            c.conj = parse_word(line.substr(a + 5), rank);
            have_conj = true;
            continue;
        }
        tree += line + "\n";
    }
    Parser p;
    p.rank = rank;
    std::string cur;
    for (char ch : tree) {
        if (ch == '(' || ch == ')' || std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) p.tokens.push_back(cur);
            cur.clear();
            if (ch == '(' || ch == ')') p.tokens.emplace_back(1, ch);
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) p.tokens.push_back(cur);
    if (p.tokens.empty()) throw InputError("certificate: empty tree");
    c.root = p.node();
    if (p.pos != p.tokens.size()) throw InputError("certificate: trailing input '" + p.peek() + "'");
    return c;
}

std::string to_text(const SplittingCertificate& c) {
    std::ostringstream os;
    write(*c.root, os);
    os << "\nconj: " << to_string(c.conj) << "\n";
    return os.str();
}

bool is_unipotent(const Endomorphism& g) {
    int n = g.rank;
    std::vector<std::vector<Int>> N(n, std::vector<Int>(n));
    for (int i = 0; i < n; ++i) {
        auto row = abelian(g.images[i], n);
        for (int j = 0; j < n; ++j) N[i][j] = (i == j ? 1 : 0) - row[j];
    }
    auto P = N;
    for (int k = 1; k < n; ++k) {
        std::vector<std::vector<Int>> Q(n, std::vector<Int>(n));
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < n; ++l)
                if (P[i][l] != 0)
                    for (int j = 0; j < n; ++j) Q[i][j] += P[i][l] * N[l][j];
        P = std::move(Q);
    }
    for (const auto& row : P)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

CertificateCheck verify_certificate(const Endomorphism& g, const SplittingCertificate& c) {
    CertificateCheck res;
    int n = g.rank;
    if (!c.root) {
        res.problems.push_back("empty certificate");
        return res;
    }
    if (!is_unipotent(g)) res.problems.push_back("abelianization is not unipotent");
    collect_basis(*c.root, res.basis);
    if (static_cast<int>(res.basis.size()) != n) {
        res.problems.push_back("tree has " + std::to_string(res.basis.size()) + " basis elements, rank is " +
                               std::to_string(n));
    } else {
        FoldedGraph fg = fold_subgroup(res.basis, n);
        if (!fg.is_basis() || !fg.is_whole_group()) res.problems.push_back("tree elements are not a free basis");
    }
    auto recon = reconstruct(*c.root, n, res.problems);
    for (const auto& y : res.basis) {
        Word h = conjugate(c.conj, g.apply(y));
        auto it = recon.find(y);
        if (it == recon.end()) continue;
        if (it->second != h)
            res.problems.push_back("image of " + to_compact(y) + ": certificate gives " + to_compact(it->second) +
                                   ", conj o g gives " + to_compact(h));
    }
    res.ok = res.problems.empty();
    return res;
}

UpgTorsion upg_torsion_polytope(const HnnGroup& G, const Abelianization& ab, const SplittingCertificate& c) {
    CertificateCheck chk = verify_certificate(G.endomorphism(), c);
    if (!chk.ok) throw MathError("certificate does not verify: " + chk.problems.front());
    UpgTorsion res;
    HnnElement T = G.multiply(G.stable_letter(), G.element(inverse(c.conj)));
    collect_t(G, *c.root, T, res.t);
    int r = ab.r();
    res.polytope = IntPolytope::origin(r);
    for (const auto& x : res.t) {
        HVec p = ab.coords.of(x);
        res.points.push_back(p);
        res.polytope = minkowski_sum(res.polytope, IntPolytope::segment(HVec(r, 0), p));
    }
    return res;
}

UpgSigma upg_sigma(const UpgTorsion& tor, const HVec& phi) {
    UpgSigma s;
    s.in = true;
    for (const auto& p : tor.points) {
        s.values.push_back(dot(p, phi));
        s.in &= s.values.back() != 0;
        s.hyperplanes.push_back(p);
    }
    s.face_is_point = face_min(tor.polytope, phi).vertices().size() == 1;
    return s;
}

}  // namespace fbc
