#include "chaintr/oracle/wick.hpp"

#include "chaintr/errors.hpp"

#include <numeric>
#include <string>

namespace chaintr {

namespace {

struct Graph {
    std::vector<int> vertex;  // vertex of each half-edge
    std::vector<int> matrix;  // matrix index of each half-edge
    std::vector<int> next;    // sigma: next half-edge around its vertex
    int vertices = 0;
};

Graph make_graph(const std::vector<TraceWord>& words) {
    Graph g;
    g.vertices = static_cast<int>(words.size());
    for (int v = 0; v < g.vertices; ++v) {
        int first = static_cast<int>(g.vertex.size());
        int p = words[v].power;
        if (p < 1) throw SchemaError("trace powers must be positive");
        for (int j = 0; j < p; ++j) {
            g.vertex.push_back(v);
            g.matrix.push_back(words[v].matrix);
            g.next.push_back(first + (j + 1) % p);
        }
    }
    if (static_cast<int>(g.vertex.size()) > kMaxHalfEdges)
        throw ChainError("Wick enumeration limited to " + std::to_string(kMaxHalfEdges) + " half-edges");
    return g;
}

// faces are the cycles of sigma o alpha
int count_faces(const Graph& g, const std::vector<int>& match) {
    const int h = static_cast<int>(match.size());
    std::vector<char> seen(h, 0);
    int faces = 0;
    for (int s = 0; s < h; ++s) {
        if (seen[s]) continue;
        ++faces;
        for (int e = s; !seen[e]; e = g.next[match[e]]) seen[e] = 1;
    }
    return faces;
}

bool is_connected(const Graph& g, const std::vector<int>& match) {
    std::vector<int> parent(g.vertices);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    };
    int comps = g.vertices;
    for (size_t e = 0; e < match.size(); ++e) {
        int a = find(g.vertex[e]), b = find(g.vertex[match[e]]);
        if (a != b) {
            parent[a] = b;
            --comps;
        }
    }
    return comps == 1;
}

// Visit every perfect matching whose pairs pass the filter.
template <class Allow, class Visit>
void for_each_matching(const Graph& g, Allow allow, Visit visit) {
    const int h = static_cast<int>(g.vertex.size());
    if (h % 2) return;
    std::vector<int> match(h, -1);
    auto rec = [&](auto&& self) -> void {
        int a = 0;
        while (a < h && match[a] >= 0) ++a;
        if (a == h) {
            visit(match);
            return;
        }
        for (int b = a + 1; b < h; ++b) {
            if (match[b] >= 0 || !allow(a, b)) continue;
            match[a] = b;
            match[b] = a;
            self(self);
            match[a] = match[b] = -1;
        }
    };
    rec(rec);
}

int genus_of(const Graph& g, int faces) {
    int chi = g.vertices - static_cast<int>(g.vertex.size()) / 2 + faces;
    return (2 - chi) / 2;
}

}  // namespace

std::vector<PairingDiagram> pairing_diagrams(const std::vector<TraceWord>& words) {
    Graph g = make_graph(words);
    std::vector<PairingDiagram> out;
    for_each_matching(g, [](int, int) { return true; }, [&](const std::vector<int>& match) {
        PairingDiagram d;
        d.words = words;
        d.match = match;
        d.faces = count_faces(g, match);
        d.connected = is_connected(g, match);
        d.genus = d.connected ? genus_of(g, d.faces) : -1;
        out.push_back(std::move(d));
    });
    return out;
}

std::map<int, std::uint64_t> genus_counts(const std::vector<TraceWord>& words) {
    Graph g = make_graph(words);
    std::map<int, std::uint64_t> counts;
    for_each_matching(g, [](int, int) { return true; }, [&](const std::vector<int>& match) {
        if (is_connected(g, match)) ++counts[genus_of(g, count_faces(g, match))];
    });
    return counts;
}

Rational WickExpansion::total() const {
    Rational s(0);
    for (const auto& v : by_order) s += v;
    return s;
}

std::vector<std::vector<Rational>> chain_propagator(const ChainModel& model) {
    const int n = model.n;
    std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n, Rational(0)));
    for (int i = 0; i < n; ++i) {
        a[i][i] = model.g(i + 1, 2);
        if (i + 1 < n) a[i][i + 1] = a[i + 1][i] = -model.c(i + 1);
        a[i][n + i] = Rational(1);
    }
    // Gauss-Jordan on [C | 1]
    for (int col = 0; col < n; ++col) {
        int piv = col;
        while (piv < n && a[piv][col].is_zero()) ++piv;
        if (piv == n) throw SchemaError("the quadratic part of the chain is degenerate");
        std::swap(a[col], a[piv]);
        Rational inv = a[col][col].inverse();
        for (auto& v : a[col]) v *= inv;
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            Rational f = a[r][col];
            for (int k = 0; k < 2 * n; ++k) a[r][k] -= f * a[col][k];
        }
    }
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
    return inv;
}

WickExpansion wick_expansion(const ChainModel& model, const std::vector<TraceWord>& traces, int genus,
                             int max_insertions) {
    if (!model.external.empty()) throw UnsupportedError("the Wick oracle has no external field");
    if (max_insertions < 0 || max_insertions > kMaxInsertions)
        throw ChainError("at most " + std::to_string(kMaxInsertions) + " vertex insertions");
    for (const auto& w : traces)
        if (w.matrix < 1 || w.matrix > model.n) throw SchemaError("trace matrix index out of range");

    const int n = model.n;
    auto prop = chain_propagator(model);

    struct Insertion {
        TraceWord word;
        Rational weight;  // -(g_k / k), the 1/T is applied per vertex below
    };
    std::vector<Insertion> kinds;
    for (int i = 1; i <= n; ++i)
        for (int k = 1; k <= model.degree(i) + 1; ++k)
            if (k != 2 && !model.g(i, k).is_zero()) kinds.push_back({{i, k}, -model.g(i, k) / Rational(k)});

    WickExpansion out;
    Rational fact(1);
    for (int m = 0; m <= max_insertions; ++m) {
        if (m > 0) fact *= Rational(m);
        Rational order_sum(0);
        // ordered choices of m labelled insertion vertices, weighted by 1/m!
        std::vector<int> pick(m, 0);
        if (m > 0 && kinds.empty()) {
            out.by_order.push_back(Rational(0));
            continue;
        }
        while (true) {
            std::vector<TraceWord> words = traces;
            Rational w(1);
            int extra = 0;
            for (int j = 0; j < m; ++j) {
                words.push_back(kinds[pick[j]].word);
                w *= kinds[pick[j]].weight;
                extra += kinds[pick[j]].word.power;
            }
            int half = extra;
            for (const auto& t : traces) half += t.power;
            if (half % 2 == 0) {
                Graph g = make_graph(words);
                // histogram of propagator types -> count, for the requested genus
                std::map<std::vector<std::uint8_t>, std::uint64_t> hist;
                for_each_matching(
                    g, [&](int a, int b) { return !prop[g.matrix[a] - 1][g.matrix[b] - 1].is_zero(); },
                    [&](const std::vector<int>& match) {
                        if (!is_connected(g, match)) return;
                        if (genus_of(g, count_faces(g, match)) != genus) return;
                        std::vector<std::uint8_t> key(n * n, 0);
                        for (size_t e = 0; e < match.size(); ++e)
                            if (static_cast<int>(e) < match[e]) {
                                int a = g.matrix[e] - 1, b = g.matrix[match[e]] - 1;
                                if (a > b) std::swap(a, b);
                                ++key[a * n + b];
                            }
                        ++hist[key];
                    });
                int edges = half / 2;
                Rational tpow = model.T.pow(edges - m);
                for (const auto& [key, count] : hist) {
                    Rational v(mpz_class(static_cast<unsigned long>(count)));
                    for (int a = 0; a < n; ++a)
                        for (int b = a; b < n; ++b)
                            if (key[a * n + b]) v *= prop[a][b].pow(key[a * n + b]);
                    order_sum += v * w * tpow;
                }
            }
            int j = 0;
            while (j < m && ++pick[j] == static_cast<int>(kinds.size())) pick[j++] = 0;
            if (j == m) break;
        }
        out.by_order.push_back(order_sum / fact);
    }
    return out;
}

Rational wick_moments(const ChainModel& model, const std::vector<TraceWord>& traces, int genus, int max_insertions) {
    return wick_expansion(model, traces, genus, max_insertions).total();
}

}  // namespace chaintr
