#include "pspark/decomposition.hpp"

#include "pspark/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace pspark {
namespace {

// Integer threshold for "count >= x" with real x.
Vertex at_least(double x) { return static_cast<Vertex>(std::ceil(x - 1e-9)); }

// Scratch bitset over vertex ids with chunked membership counting.
class NeighborhoodBits {
public:
    explicit NeighborhoodBits(Vertex n) : words_(static_cast<std::size_t>(n + 63) / 64, 0) {}

    void set_all(std::span<const Vertex> vs) {
        for (Vertex v : vs) words_[static_cast<std::size_t>(v) >> 6] |= 1ULL << (v & 63);
    }
    void clear_all(std::span<const Vertex> vs) {
        for (Vertex v : vs) words_[static_cast<std::size_t>(v) >> 6] &= ~(1ULL << (v & 63));
    }
    bool test(Vertex v) const {
        return ((words_[static_cast<std::size_t>(v) >> 6] >> (v & 63)) & 1ULL) != 0;
    }

    // Exact |marked ∩ ids|.
    std::size_t count(std::span<const Vertex> ids) const {
        return kernels::active().count_members(words_.data(), ids.data(), ids.size());
    }

    // Decides count(ids) >= threshold without always scanning everything.
    bool count_reaches(std::span<const Vertex> ids, Vertex threshold) const {
        if (threshold <= 0) return true;
        const auto& k = kernels::active();
        std::size_t cnt = 0;
        std::size_t i = 0;
        const std::size_t total = ids.size();
        constexpr std::size_t kChunk = 32;
        while (i < total) {
            const std::size_t step = std::min(kChunk, total - i);
            cnt += k.count_members(words_.data(), ids.data() + i, step);
            i += step;
            if (cnt >= static_cast<std::size_t>(threshold)) return true;
            if (cnt + (total - i) < static_cast<std::size_t>(threshold)) return false;
        }
        return cnt >= static_cast<std::size_t>(threshold);
    }

private:
    std::vector<std::uint64_t> words_;
};

}  // namespace

bool Decomposition::is_partition(const Graph& g) const {
    const auto n = static_cast<std::size_t>(g.vertex_count());
    std::vector<char> seen(n, 0);
    std::size_t total = 0;
    auto absorb = [&](const std::vector<Vertex>& vs) {
        for (Vertex v : vs) {
            if (v < 0 || static_cast<std::size_t>(v) >= n) return false;
            if (seen[static_cast<std::size_t>(v)]) return false;
            seen[static_cast<std::size_t>(v)] = 1;
            ++total;
        }
        return true;
    };
    if (!absorb(sparse)) return false;
    for (const auto& c : clusters) {
        if (c.empty()) return false;
        if (!absorb(c)) return false;
    }
    return total == n;
}

Decomposition decompose(const Graph& g, Vertex degree_bound, double eps) {
    const Vertex n = g.vertex_count();
    const Vertex D = degree_bound;
    if (g.max_degree() > D) throw std::invalid_argument("decompose: max degree exceeds bound");

    const Vertex friend_codegree = at_least((1.0 - eps) * D);
    const Vertex dense_friends = at_least((1.0 - eps) * D);
    const Vertex min_cluster = at_least((1.0 - eps) * D);
    const Vertex augment_threshold = at_least((1.0 - 3.0 * eps) * D);

    Decomposition out;
    out.epsilon = eps;
    if (n == 0) return out;

    // Per-edge friend decision (codegree >= (1-eps)D), stored aligned with
    // the CSR adjacency.
    const auto& off = g.offsets();
    const auto& adj = g.adjacency_flat();
    std::vector<char> friend_edge(adj.size(), 0);
    std::vector<Vertex> friend_count(static_cast<std::size_t>(n), 0);
    {
        NeighborhoodBits bits(n);
        for (Vertex u = 0; u < n; ++u) {
            auto nu = g.neighbors(u);
            bits.set_all(nu);
            for (std::size_t e = off[static_cast<std::size_t>(u)];
                 e < off[static_cast<std::size_t>(u) + 1]; ++e) {
                const Vertex v = adj[e];
                if (v <= u) continue;
                if (bits.count_reaches(g.neighbors(v), friend_codegree)) {
                    friend_edge[e] = 1;
                    friend_count[static_cast<std::size_t>(u)]++;
                    friend_count[static_cast<std::size_t>(v)]++;
                    // mirror edge index in v's row
                    auto nv = g.neighbors(v);
                    const std::size_t pos = static_cast<std::size_t>(
                        std::lower_bound(nv.begin(), nv.end(), u) - nv.begin());
                    friend_edge[off[static_cast<std::size_t>(v)] + pos] = 1;
                }
            }
            bits.clear_all(nu);
        }
    }

    std::vector<char> dense(static_cast<std::size_t>(n), 0);
    for (Vertex v = 0; v < n; ++v) {
        dense[static_cast<std::size_t>(v)] = friend_count[static_cast<std::size_t>(v)] >= dense_friends;
    }

    // Components of the friend graph restricted to dense vertices,
    // discovered in vertex order so they come out keyed by smallest member.
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<Vertex>> components;
    for (Vertex s = 0; s < n; ++s) {
        if (!dense[static_cast<std::size_t>(s)] || comp[static_cast<std::size_t>(s)] >= 0) continue;
        const int id = static_cast<int>(components.size());
        components.emplace_back();
        std::queue<Vertex> q;
        q.push(s);
        comp[static_cast<std::size_t>(s)] = id;
        while (!q.empty()) {
            const Vertex u = q.front();
            q.pop();
            components[static_cast<std::size_t>(id)].push_back(u);
            for (std::size_t e = off[static_cast<std::size_t>(u)];
                 e < off[static_cast<std::size_t>(u) + 1]; ++e) {
                const Vertex w = adj[e];
                if (!friend_edge[e] || !dense[static_cast<std::size_t>(w)]) continue;
                if (comp[static_cast<std::size_t>(w)] >= 0) continue;
                comp[static_cast<std::size_t>(w)] = id;
                q.push(w);
            }
        }
    }

    // Drop undersized components.
    std::vector<int> keep_id(components.size(), -1);
    std::vector<std::vector<Vertex>> clusters;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].size() >= static_cast<std::size_t>(min_cluster)) {
            keep_id[i] = static_cast<int>(clusters.size());
            clusters.push_back(components[i]);
        }
    }
    std::vector<int> in_cluster(static_cast<std::size_t>(n), -1);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (Vertex v : clusters[c]) in_cluster[static_cast<std::size_t>(v)] = static_cast<int>(c);
    }

    // Single augmentation pass: attach an unassigned vertex to the first
    // cluster whose core component holds >= (1-3eps)D of its neighbors.
    // in_cluster keeps core membership only, so joins do not cascade.
    if (!clusters.empty()) {
        std::vector<std::vector<Vertex>> joined(clusters.size());
        std::vector<Vertex> hits(clusters.size(), 0);
        for (Vertex v = 0; v < n; ++v) {
            if (in_cluster[static_cast<std::size_t>(v)] >= 0) continue;
            std::fill(hits.begin(), hits.end(), 0);
            for (Vertex w : g.neighbors(v)) {
                const int c = in_cluster[static_cast<std::size_t>(w)];
                if (c >= 0) hits[static_cast<std::size_t>(c)]++;
            }
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                if (hits[c] >= augment_threshold) {
                    joined[c].push_back(v);
                    break;
                }
            }
        }
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            clusters[c].insert(clusters[c].end(), joined[c].begin(), joined[c].end());
            std::sort(clusters[c].begin(), clusters[c].end());
        }
    }

    std::vector<char> clustered(static_cast<std::size_t>(n), 0);
    for (const auto& c : clusters) {
        for (Vertex v : c) clustered[static_cast<std::size_t>(v)] = 1;
    }
    for (Vertex v = 0; v < n; ++v) {
        if (!clustered[static_cast<std::size_t>(v)]) out.sparse.push_back(v);
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    out.clusters = std::move(clusters);
    return out;
}

DecompositionReport verify(const Graph& g, const Decomposition& d, Vertex degree_bound,
                           double eps, bool sparse_side) {
    if (!d.is_partition(g)) throw std::invalid_argument("verify: not a partition of V");
    const Vertex n = g.vertex_count();
    const Vertex D = degree_bound;
    const Vertex low_codegree_below = at_least((1.0 - eps) * D);  // codegree < (1-eps)D
    const double clause_a_min = eps * D;                          // count must exceed this
    const double nonedge_min = 0.5 * eps * eps * static_cast<double>(D) * D;

    DecompositionReport rep;

    // Cluster side.
    std::vector<int> in_cluster(static_cast<std::size_t>(n), -1);
    for (std::size_t c = 0; c < d.clusters.size(); ++c) {
        for (Vertex v : d.clusters[c]) in_cluster[static_cast<std::size_t>(v)] = static_cast<int>(c);
    }
    const double size_lo = (1.0 - eps) * D;
    const double size_hi = (1.0 + 6.0 * eps) * D;
    const double ext_max = 7.0 * eps * D;
    const double nondeg_max = 6.0 * eps * D;
    for (std::size_t c = 0; c < d.clusters.size(); ++c) {
        const auto& cluster = d.clusters[c];
        ClusterCheck chk;
        chk.size = cluster.size();
        const double sz = static_cast<double>(cluster.size());
        chk.size_ok = sz >= size_lo - 1e-9 && sz <= size_hi + 1e-9;
        for (Vertex v : cluster) {
            Vertex internal = 0;
            for (Vertex w : g.neighbors(v)) {
                if (in_cluster[static_cast<std::size_t>(w)] == static_cast<int>(c)) internal++;
            }
            const Vertex external = g.degree(v) - internal;
            const Vertex nondeg = static_cast<Vertex>(cluster.size()) - 1 - internal;
            chk.max_external_degree = std::max(chk.max_external_degree, external);
            chk.max_internal_nondegree = std::max(chk.max_internal_nondegree, nondeg);
            if (!(static_cast<double>(external) < ext_max)) chk.external_violators.push_back(v);
            if (!(static_cast<double>(nondeg) < nondeg_max)) chk.internal_violators.push_back(v);
        }
        rep.clusters.push_back(std::move(chk));
    }

    if (sparse_side) {
        rep.sparse_side_evaluated = true;
        rep.low_codegree_counts.reserve(d.sparse.size());
        rep.sparse_nonedges.reserve(d.sparse.size());
        NeighborhoodBits bits(n);
        for (Vertex v : d.sparse) {
            auto nv = g.neighbors(v);
            bits.set_all(nv);
            Vertex low = 0;
            std::uint64_t inside_edges = 0;
            for (Vertex w : nv) {
                // inside_edges double-counts; every probe is exact.
                inside_edges += bits.count(g.neighbors(w));
                if (!bits.count_reaches(g.neighbors(w), low_codegree_below)) low++;
            }
            bits.clear_all(nv);
            inside_edges /= 2;
            const std::uint64_t dv = static_cast<std::uint64_t>(nv.size());
            const std::uint64_t nonedges = dv * (dv - (dv > 0 ? 1 : 0)) / 2 - inside_edges;
            rep.low_codegree_counts.push_back(low);
            rep.sparse_nonedges.push_back(nonedges);
            if (!(static_cast<double>(low) > clause_a_min)) rep.clause_a_violators.push_back(v);
            if (!(static_cast<double>(nonedges) > nonedge_min)) rep.nonedge_bound_violators.push_back(v);
        }
    }
    return rep;
}

bool DecompositionReport::clusters_ok() const {
    for (const auto& c : clusters) {
        if (!c.ok()) return false;
    }
    return true;
}

bool DecompositionReport::all_ok() const {
    if (!clusters_ok()) return false;
    if (sparse_side_evaluated) {
        return clause_a_violators.empty() && nonedge_bound_violators.empty();
    }
    return true;
}

int dissolve_violating_clusters(Decomposition& d, const DecompositionReport& report) {
    if (report.clusters.size() != d.clusters.size()) {
        throw std::invalid_argument("dissolve: report does not match decomposition");
    }
    int dissolved = 0;
    std::vector<std::vector<Vertex>> kept;
    for (std::size_t c = 0; c < d.clusters.size(); ++c) {
        if (report.clusters[c].ok()) {
            kept.push_back(std::move(d.clusters[c]));
        } else {
            for (Vertex v : d.clusters[c]) d.sparse.push_back(v);
            dissolved++;
        }
    }
    d.clusters = std::move(kept);
    if (dissolved > 0) std::sort(d.sparse.begin(), d.sparse.end());
    return dissolved;
}

}  // namespace pspark
