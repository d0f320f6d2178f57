#include "pspark/generators.hpp"

#include "pspark/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <sstream>
#include <stdexcept>

namespace pspark {

const char* kind_name(GraphKind k) {
    switch (k) {
        case GraphKind::complete: return "complete";
        case GraphKind::disjoint_cliques: return "disjoint-cliques";
        case GraphKind::random_regular: return "random-regular";
        case GraphKind::erdos_renyi: return "erdos-renyi";
        case GraphKind::star_union: return "star-union";
        case GraphKind::matching_plus_clique: return "matching-plus-clique";
        case GraphKind::file: return "file";
    }
    return "?";
}

namespace {

GraphKind kind_from_name(const std::string& s) {
    for (GraphKind k : {GraphKind::complete, GraphKind::disjoint_cliques, GraphKind::random_regular,
                        GraphKind::erdos_renyi, GraphKind::star_union,
                        GraphKind::matching_plus_clique, GraphKind::file}) {
        if (s == kind_name(k)) return k;
    }
    throw std::invalid_argument("unknown graph kind: " + s);
}

class ParamReader {
public:
    ParamReader(const GeneratorSpec& spec) : spec_(spec) {}

    long long require_int(const std::string& key) const {
        auto it = spec_.params.find(key);
        if (it == spec_.params.end()) {
            throw std::invalid_argument(std::string("graph spec ") + kind_name(spec_.kind) +
                                        ": missing parameter '" + key + "'");
        }
        double v = it->second;
        if (v != std::floor(v)) {
            throw std::invalid_argument("graph spec: parameter '" + key + "' must be an integer");
        }
        return static_cast<long long>(v);
    }

    long long int_or(const std::string& key, long long dflt) const {
        auto it = spec_.params.find(key);
        return it == spec_.params.end() ? dflt : static_cast<long long>(it->second);
    }

    double real_or(const std::string& key, double dflt) const {
        auto it = spec_.params.find(key);
        return it == spec_.params.end() ? dflt : it->second;
    }

    bool has(const std::string& key) const { return spec_.params.count(key) != 0; }

private:
    const GeneratorSpec& spec_;
};

Graph complete_graph(Vertex n) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
    }
    return Graph::from_edges(n, edges);
}

Graph disjoint_cliques(Vertex copies, Vertex size) {
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex c = 0; c < copies; ++c) {
        const Vertex base = c * size;
        for (Vertex u = 0; u < size; ++u) {
            for (Vertex v = u + 1; v < size; ++v) edges.emplace_back(base + u, base + v);
        }
    }
    return Graph::from_edges(copies * size, edges);
}

// Configuration (pairing) model. For small degrees offending pairings are
// rejected wholesale, which samples exactly uniformly among simple outcomes.
// The acceptance probability decays like exp(-D^2/4), so for larger D the
// pairing is repaired by degree-preserving double-edge switches instead
// (still exactly D-regular, approximately uniform).
Graph random_regular(Vertex n, Vertex d, std::uint64_t seed) {
    if (d < 0 || d >= n) throw std::invalid_argument("random-regular: need 0 <= d < n");
    if ((static_cast<long long>(n) * d) % 2 != 0) {
        throw std::invalid_argument("random-regular: n*d must be even");
    }
    if (d == 0) return Graph::from_edges(n, {});

    RngStream rng(seed, 0x7265670ULL);
    const std::size_t stubs_n = static_cast<std::size_t>(n) * static_cast<std::size_t>(d);
    // Wholesale rejection accepts with probability about exp(-(d*d-1)/4),
    // workable only for small d; beyond that, repair by switches.
    const bool full_restart = d <= 6;
    const int max_restarts = full_restart ? 200000 : 1;

    auto key = [](Vertex a, Vertex b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    };

    for (int attempt = 0; attempt < max_restarts; ++attempt) {
        std::vector<std::pair<Vertex, Vertex>> pairs(stubs_n / 2);
        {
            std::vector<Vertex> stubs(stubs_n);
            for (std::size_t i = 0; i < stubs_n; ++i) stubs[i] = static_cast<Vertex>(i / d);
            rng.shuffle(stubs);
            for (std::size_t i = 0; i < stubs_n / 2; ++i) {
                pairs[i] = {stubs[2 * i], stubs[2 * i + 1]};
            }
        }

        std::unordered_map<std::uint64_t, int> count;
        count.reserve(pairs.size() * 2);
        std::vector<std::size_t> offenders;  // loops plus surplus duplicate slots
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (pairs[i].first == pairs[i].second) {
                offenders.push_back(i);
                continue;
            }
            if (++count[key(pairs[i].first, pairs[i].second)] > 1) offenders.push_back(i);
        }
        if (offenders.empty()) return Graph::from_edges(n, pairs);
        if (full_restart) continue;

        auto present = [&](std::uint64_t k) {
            auto it = count.find(k);
            return it != count.end() && it->second > 0;
        };
        std::size_t stalls = 0;
        const std::size_t stall_max = 200 * offenders.size() + 100000;
        while (!offenders.empty() && stalls < stall_max) {
            const std::size_t oi = offenders.back();
            const std::size_t pj = static_cast<std::size_t>(rng.below(pairs.size()));
            if (pj == oi) {
                ++stalls;
                continue;
            }
            const auto [a, b] = pairs[oi];
            const auto [x, y] = pairs[pj];
            const std::pair<Vertex, Vertex> e1{a, y}, e2{x, b};
            const std::uint64_t k1 = key(e1.first, e1.second);
            const std::uint64_t k2 = key(e2.first, e2.second);
            if (e1.first == e1.second || e2.first == e2.second || k1 == k2 || present(k1) ||
                present(k2)) {
                ++stalls;
                continue;
            }
            if (a != b) count[key(a, b)]--;
            if (x != y) count[key(x, y)]--;
            count[k1]++;
            count[k2]++;
            pairs[oi] = e1;
            pairs[pj] = e2;
            offenders.pop_back();
            // The partner slot now holds a clean edge; drop any stale flag on it.
            for (std::size_t i = 0; i < offenders.size(); ++i) {
                if (offenders[i] == pj) {
                    offenders.erase(offenders.begin() + static_cast<std::ptrdiff_t>(i));
                    break;
                }
            }
        }
        if (offenders.empty()) return Graph::from_edges(n, pairs);
    }
    throw std::runtime_error("random-regular: generation did not converge");
}

Graph erdos_renyi(Vertex n, double p, long long m, std::uint64_t seed) {
    RngStream rng(seed, 0x65720ULL);
    std::vector<std::pair<Vertex, Vertex>> edges;
    if (m >= 0) {
        // G(n, m): sample distinct pairs by rejection.
        const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        if (static_cast<std::uint64_t>(m) > total) {
            throw std::invalid_argument("erdos-renyi: m exceeds pair count");
        }
        std::vector<std::uint64_t> picked;
        picked.reserve(static_cast<std::size_t>(m));
        while (picked.size() < static_cast<std::size_t>(m)) {
            Vertex u = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
            Vertex v = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
            if (u == v) continue;
            if (u > v) std::swap(u, v);
            std::uint64_t k = (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
            if (std::find(picked.begin(), picked.end(), k) != picked.end()) continue;
            picked.push_back(k);
        }
        for (std::uint64_t k : picked) {
            edges.emplace_back(static_cast<Vertex>(k >> 32), static_cast<Vertex>(k & 0xffffffffULL));
        }
    } else {
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("erdos-renyi: p outside [0,1]");
        // Geometric skipping over the upper-triangle pair order.
        if (p > 0.0) {
            const double logq = std::log1p(-p);
            std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
            std::uint64_t idx = 0;
            while (true) {
                double u = rng.unit();
                std::uint64_t skip =
                    p >= 1.0 ? 0 : static_cast<std::uint64_t>(std::floor(std::log(1.0 - u) / logq));
                idx += skip;
                if (idx >= total) break;
                // Decode pair index -> (u, v).
                std::uint64_t lo = 0, hi = static_cast<std::uint64_t>(n) - 1;
                while (lo < hi) {
                    std::uint64_t mid = (lo + hi) / 2;
                    std::uint64_t before =
                        mid * (2 * static_cast<std::uint64_t>(n) - mid - 1) / 2;
                    if (before + (static_cast<std::uint64_t>(n) - 1 - mid) > idx) {
                        hi = mid;
                    } else {
                        lo = mid + 1;
                    }
                }
                std::uint64_t row = lo;
                std::uint64_t before = row * (2 * static_cast<std::uint64_t>(n) - row - 1) / 2;
                Vertex uu = static_cast<Vertex>(row);
                Vertex vv = static_cast<Vertex>(row + 1 + (idx - before));
                edges.emplace_back(uu, vv);
                idx += 1;
            }
        }
    }
    return Graph::from_edges(n, edges);
}

// Clique on n vertices minus a disjoint union of stars: the cluster's
// non-edge graph is exactly the star forest.
Graph star_union(Vertex n, Vertex stars, Vertex star_size) {
    if (stars < 0 || star_size < 0) throw std::invalid_argument("star-union: negative parameter");
    if (static_cast<long long>(stars) * (star_size + 1) > n) {
        throw std::invalid_argument("star-union: stars*(star_size+1) exceeds n");
    }
    std::vector<std::pair<Vertex, Vertex>> nonedges;
    for (Vertex s = 0; s < stars; ++s) {
        const Vertex center = s * (star_size + 1);
        for (Vertex l = 1; l <= star_size; ++l) nonedges.emplace_back(center, center + l);
    }
    std::vector<std::pair<Vertex, Vertex>> edges;
    auto is_nonedge = [&](Vertex u, Vertex v) {
        for (auto [a, b] : nonedges) {
            if ((a == u && b == v) || (a == v && b == u)) return true;
        }
        return false;
    };
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (!is_nonedge(u, v)) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, edges);
}

// Clique on n vertices minus a matching of rm disjoint non-edges.
Graph matching_plus_clique(Vertex n, Vertex rm) {
    if (rm < 0 || 2LL * rm > n) throw std::invalid_argument("matching-plus-clique: need 2*rm <= n");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            const bool removed = (v == u + 1) && (u % 2 == 0) && (u / 2 < rm);
            if (!removed) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(n, edges);
}

// Havel-Hakimi construction; ties broken toward the highest-index vertex.
std::vector<std::pair<Vertex, Vertex>> havel_hakimi(std::vector<int> deg) {
    const std::size_t m = deg.size();
    std::vector<std::pair<Vertex, Vertex>> edges;
    std::vector<std::size_t> order(m);
    for (;;) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (deg[a] != deg[b]) return deg[a] > deg[b];
            return a > b;  // highest index first
        });
        const std::size_t h = order[0];
        const int d = deg[h];
        if (d == 0) break;
        if (static_cast<std::size_t>(d) >= m) {
            throw std::runtime_error("havel-hakimi: degree sequence not graphical");
        }
        for (int i = 1; i <= d; ++i) {
            const std::size_t t = order[static_cast<std::size_t>(i)];
            if (deg[t] == 0) throw std::runtime_error("havel-hakimi: degree sequence not graphical");
            deg[t]--;
            edges.emplace_back(static_cast<Vertex>(h), static_cast<Vertex>(t));
        }
        deg[h] = 0;
    }
    return edges;
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
    GeneratorSpec spec;
    const std::size_t colon = text.find(':');
    const std::string kind_str = colon == std::string::npos ? text : text.substr(0, colon);
    spec.kind = kind_from_name(kind_str);
    if (spec.kind == GraphKind::file) {
        if (colon == std::string::npos || colon + 1 >= text.size()) {
            throw std::invalid_argument("graph spec: file:PATH requires a path");
        }
        spec.path = text.substr(colon + 1);
        return spec;
    }
    if (colon == std::string::npos) return spec;
    std::stringstream rest(text.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("graph spec: expected key=value, got '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            if (key == "seed") {
                spec.seed = std::stoull(val);
            } else {
                spec.params[key] = std::stod(val);
            }
        } catch (const std::exception&) {
            throw std::invalid_argument("graph spec: bad value for '" + key + "'");
        }
    }
    return spec;
}

std::string GeneratorSpec::describe() const {
    std::ostringstream out;
    out << kind_name(kind);
    if (kind == GraphKind::file) {
        out << ':' << path;
        return out.str();
    }
    char sep = ':';
    for (const auto& [k, v] : params) {
        out << sep << k << '=' << v;
        sep = ',';
    }
    if (seed != 0) {
        out << sep << "seed=" << seed;
    }
    return out.str();
}

Graph generate(const GeneratorSpec& spec) {
    ParamReader pr(spec);
    switch (spec.kind) {
        case GraphKind::complete: {
            const long long n = pr.require_int("n");
            if (n < 0) throw std::invalid_argument("complete: n < 0");
            return complete_graph(static_cast<Vertex>(n));
        }
        case GraphKind::disjoint_cliques: {
            const long long copies = pr.require_int("copies");
            const long long size = pr.require_int("size");
            if (copies < 0 || size < 0) throw std::invalid_argument("disjoint-cliques: negative parameter");
            return disjoint_cliques(static_cast<Vertex>(copies), static_cast<Vertex>(size));
        }
        case GraphKind::random_regular: {
            const long long n = pr.require_int("n");
            const long long d = pr.require_int("d");
            return random_regular(static_cast<Vertex>(n), static_cast<Vertex>(d), spec.seed);
        }
        case GraphKind::erdos_renyi: {
            const long long n = pr.require_int("n");
            if (pr.has("m")) {
                return erdos_renyi(static_cast<Vertex>(n), -1.0, pr.require_int("m"), spec.seed);
            }
            const double p = pr.real_or("p", -1.0);
            if (p < 0.0) throw std::invalid_argument("erdos-renyi: need p or m");
            return erdos_renyi(static_cast<Vertex>(n), p, -1, spec.seed);
        }
        case GraphKind::star_union: {
            const long long n = pr.require_int("n");
            const long long stars = pr.require_int("stars");
            const long long star_size = pr.require_int("star_size");
            return star_union(static_cast<Vertex>(n), static_cast<Vertex>(stars),
                              static_cast<Vertex>(star_size));
        }
        case GraphKind::matching_plus_clique: {
            const long long n = pr.require_int("n");
            const long long rm = pr.require_int("rm");
            return matching_plus_clique(static_cast<Vertex>(n), static_cast<Vertex>(rm));
        }
        case GraphKind::file:
            return read_edge_list_file(spec.path);
    }
    throw std::invalid_argument("generate: unknown kind");
}

Graph regularize(const Graph& g, Vertex target_degree) {
    const Vertex n = g.vertex_count();
    const Vertex D = target_degree;
    if (g.max_degree() > D) throw std::invalid_argument("regularize: max degree exceeds target");

    std::vector<int> deg(static_cast<std::size_t>(n));
    bool already_regular = true;
    for (Vertex v = 0; v < n; ++v) {
        deg[static_cast<std::size_t>(v)] = g.degree(v);
        if (g.degree(v) != D) already_regular = false;
    }
    if (already_regular) return g;

    std::vector<std::pair<Vertex, Vertex>> edges = g.edges();

    // Saturate inside V: repeatedly add the lowest-id non-adjacent pair of
    // deficient vertices, until the deficient set spans a clique.
    std::vector<std::vector<char>> adj;
    const bool dense_ok = n <= 4096;
    if (dense_ok) {
        adj.assign(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
        for (const auto& [u, v] : edges) {
            adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
            adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
        }
    }
    auto adjacent = [&](Vertex u, Vertex v) {
        if (dense_ok) return adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] != 0;
        return g.adjacent(u, v) ||
               std::find(edges.begin(), edges.end(), std::make_pair(std::min(u, v), std::max(u, v))) !=
                   edges.end();
    };
    for (;;) {
        bool added = false;
        for (Vertex u = 0; u < n && !added; ++u) {
            if (deg[static_cast<std::size_t>(u)] >= D) continue;
            for (Vertex v = u + 1; v < n && !added; ++v) {
                if (deg[static_cast<std::size_t>(v)] >= D) continue;
                if (adjacent(u, v)) continue;
                edges.emplace_back(u, v);
                if (dense_ok) {
                    adj[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = 1;
                    adj[static_cast<std::size_t>(v)][static_cast<std::size_t>(u)] = 1;
                }
                deg[static_cast<std::size_t>(u)]++;
                deg[static_cast<std::size_t>(v)]++;
                added = true;
            }
        }
        if (!added) break;
    }

    std::vector<Vertex> deficient;
    for (Vertex v = 0; v < n; ++v) {
        if (deg[static_cast<std::size_t>(v)] < D) deficient.push_back(v);
    }
    if (deficient.empty()) {
        return Graph::from_edges(n, edges);
    }

    // Pad with X, |X| in {D+1, D+2}, |X| = n (mod 2).
    Vertex xsize = D + 1;
    if ((xsize % 2) != (n % 2)) xsize = D + 2;
    const Vertex total = n + xsize;

    // Bipartite K on deficient x X: round-robin over X.
    std::vector<int> dk(static_cast<std::size_t>(xsize), 0);
    Vertex ptr = 0;
    for (Vertex w : deficient) {
        const int need = D - deg[static_cast<std::size_t>(w)];
        for (int i = 0; i < need; ++i) {
            edges.emplace_back(w, n + ptr);
            dk[static_cast<std::size_t>(ptr)]++;
            ptr = (ptr + 1) % xsize;
        }
    }

    // F on X with degree D - d_K(x) each.
    std::vector<int> f(static_cast<std::size_t>(xsize));
    for (Vertex x = 0; x < xsize; ++x) f[static_cast<std::size_t>(x)] = D - dk[static_cast<std::size_t>(x)];
    for (const auto& [a, b] : havel_hakimi(f)) {
        edges.emplace_back(n + a, n + b);
    }

    return Graph::from_edges(total, edges);
}

}  // namespace pspark
