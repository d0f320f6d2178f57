#include "pspark/matching.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace pspark {

Bigraph Bigraph::create(int x_size, int y_size) {
    Bigraph b;
    b.x_size = x_size;
    b.y_size = y_size;
    b.adj.resize(static_cast<std::size_t>(x_size));
    return b;
}

void Bigraph::add_edge(int x, int y) {
    if (x < 0 || x >= x_size || y < 0 || y >= y_size) {
        throw std::invalid_argument("bigraph: edge out of range");
    }
    adj[static_cast<std::size_t>(x)].push_back(y);
}

void Bigraph::finish() {
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
}

bool Bigraph::has_edge(int x, int y) const {
    const auto& row = adj[static_cast<std::size_t>(x)];
    return std::binary_search(row.begin(), row.end(), y);
}

std::size_t Bigraph::edge_count() const {
    std::size_t c = 0;
    for (const auto& row : adj) c += row.size();
    return c;
}

namespace {

constexpr int kInf = 1 << 30;

// Hopcroft-Karp.
MatchingResult hopcroft_karp(const Bigraph& b) {
    MatchingResult r;
    r.pair_of_x.assign(static_cast<std::size_t>(b.x_size), -1);
    r.pair_of_y.assign(static_cast<std::size_t>(b.y_size), -1);
    std::vector<int> dist(static_cast<std::size_t>(b.x_size), 0);

    auto bfs = [&]() {
        std::queue<int> q;
        bool found = false;
        for (int x = 0; x < b.x_size; ++x) {
            if (r.pair_of_x[static_cast<std::size_t>(x)] < 0) {
                dist[static_cast<std::size_t>(x)] = 0;
                q.push(x);
            } else {
                dist[static_cast<std::size_t>(x)] = kInf;
            }
        }
        while (!q.empty()) {
            const int x = q.front();
            q.pop();
            for (int y : b.adj[static_cast<std::size_t>(x)]) {
                const int nx = r.pair_of_y[static_cast<std::size_t>(y)];
                if (nx < 0) {
                    found = true;
                } else if (dist[static_cast<std::size_t>(nx)] == kInf) {
                    dist[static_cast<std::size_t>(nx)] = dist[static_cast<std::size_t>(x)] + 1;
                    q.push(nx);
                }
            }
        }
        return found;
    };

    std::vector<std::size_t> it(static_cast<std::size_t>(b.x_size), 0);
    auto dfs = [&](auto&& self, int x) -> bool {
        const auto& row = b.adj[static_cast<std::size_t>(x)];
        for (std::size_t& i = it[static_cast<std::size_t>(x)]; i < row.size(); ++i) {
            const int y = row[i];
            const int nx = r.pair_of_y[static_cast<std::size_t>(y)];
            if (nx < 0 ||
                (dist[static_cast<std::size_t>(nx)] == dist[static_cast<std::size_t>(x)] + 1 &&
                 self(self, nx))) {
                r.pair_of_x[static_cast<std::size_t>(x)] = y;
                r.pair_of_y[static_cast<std::size_t>(y)] = x;
                return true;
            }
        }
        dist[static_cast<std::size_t>(x)] = kInf;
        return false;
    };

    while (bfs()) {
        std::fill(it.begin(), it.end(), 0);
        for (int x = 0; x < b.x_size; ++x) {
            if (r.pair_of_x[static_cast<std::size_t>(x)] < 0 && dfs(dfs, x)) r.size++;
        }
    }
    return r;
}

// Plain Kuhn augmentation for tiny instances.
MatchingResult kuhn(const Bigraph& b) {
    MatchingResult r;
    r.pair_of_x.assign(static_cast<std::size_t>(b.x_size), -1);
    r.pair_of_y.assign(static_cast<std::size_t>(b.y_size), -1);
    std::vector<char> used(static_cast<std::size_t>(b.y_size), 0);
    auto aug = [&](auto&& self, int x) -> bool {
        for (int y : b.adj[static_cast<std::size_t>(x)]) {
            if (used[static_cast<std::size_t>(y)]) continue;
            used[static_cast<std::size_t>(y)] = 1;
            const int nx = r.pair_of_y[static_cast<std::size_t>(y)];
            if (nx < 0 || self(self, nx)) {
                r.pair_of_x[static_cast<std::size_t>(x)] = y;
                r.pair_of_y[static_cast<std::size_t>(y)] = x;
                return true;
            }
        }
        return false;
    };
    for (int x = 0; x < b.x_size; ++x) {
        std::fill(used.begin(), used.end(), 0);
        if (aug(aug, x)) r.size++;
    }
    return r;
}

}  // namespace

MatchingResult max_matching(const Bigraph& b) {
    MatchingResult r = (b.x_size <= 8) ? kuhn(b) : hopcroft_karp(b);
    r.saturates_x = r.size == b.x_size;
    r.deficiency = b.x_size - r.size;
    return r;
}

std::optional<std::vector<int>> hall_violator(const Bigraph& b, const MatchingResult& m) {
    if (m.saturates_x) return std::nullopt;
    // Alternating reachability from an unmatched X vertex: X -> Y over any
    // edge, Y -> X over matched edges. Every reached Y is matched (otherwise
    // the matching would not be maximum), so |N(S)| = |reached Y| < |S|.
    std::vector<char> x_seen(static_cast<std::size_t>(b.x_size), 0);
    std::vector<char> y_seen(static_cast<std::size_t>(b.y_size), 0);
    std::queue<int> q;
    int start = -1;
    for (int x = 0; x < b.x_size; ++x) {
        if (m.pair_of_x[static_cast<std::size_t>(x)] < 0) {
            start = x;
            break;
        }
    }
    q.push(start);
    x_seen[static_cast<std::size_t>(start)] = 1;
    while (!q.empty()) {
        const int x = q.front();
        q.pop();
        for (int y : b.adj[static_cast<std::size_t>(x)]) {
            if (y_seen[static_cast<std::size_t>(y)]) continue;
            y_seen[static_cast<std::size_t>(y)] = 1;
            const int nx = m.pair_of_y[static_cast<std::size_t>(y)];
            if (nx >= 0 && !x_seen[static_cast<std::size_t>(nx)]) {
                x_seen[static_cast<std::size_t>(nx)] = 1;
                q.push(nx);
            }
        }
    }
    std::vector<int> s;
    for (int x = 0; x < b.x_size; ++x) {
        if (x_seen[static_cast<std::size_t>(x)]) s.push_back(x);
    }
    return s;
}

Bigraph neighborhood_switch(const Bigraph& f, int u, int v) {
    if (u == v) throw std::invalid_argument("neighborhood_switch: u == v");
    if (u < 0 || u >= f.y_size || v < 0 || v >= f.y_size) {
        throw std::invalid_argument("neighborhood_switch: vertex out of range");
    }
    Bigraph out = Bigraph::create(f.x_size, f.y_size);
    for (int x = 0; x < f.x_size; ++x) {
        const bool au = f.has_edge(x, u);
        const bool av = f.has_edge(x, v);
        for (int y : f.adj[static_cast<std::size_t>(x)]) {
            if (y == u || y == v) continue;
            out.add_edge(x, y);
        }
        if (au || av) out.add_edge(x, u);
        if (au && av) out.add_edge(x, v);
    }
    out.finish();
    return out;
}

Bigraph canonical_minimizer(std::span<const int> degrees, int y_size) {
    Bigraph out = Bigraph::create(static_cast<int>(degrees.size()), y_size);
    for (std::size_t x = 0; x < degrees.size(); ++x) {
        if (degrees[x] < 0 || degrees[x] > y_size) {
            throw std::invalid_argument("canonical_minimizer: bad degree");
        }
        for (int y = 0; y < degrees[x]; ++y) out.add_edge(static_cast<int>(x), y);
    }
    out.finish();
    return out;
}

Rational Rational::make(std::int64_t n, std::int64_t d) {
    if (d <= 0) throw std::invalid_argument("rational: non-positive denominator");
    const std::int64_t g = std::gcd(n, d);
    return Rational{g == 0 ? 0 : n / g, g == 0 ? 1 : d / g};
}

namespace {

std::int64_t binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Incremental matcher over bitmask neighborhoods (|Y| <= 7).
struct MaskMatcher {
    std::vector<std::uint32_t> rows;
    std::vector<int> match_of_y;  // y -> row index

    bool augment(int row_idx, std::uint32_t row, std::uint32_t& visited) {
        std::uint32_t cand = row & ~visited;
        while (cand != 0) {
            const int y = std::countr_zero(cand);
            cand &= cand - 1;
            visited |= 1u << y;
            if (match_of_y[static_cast<std::size_t>(y)] < 0 ||
                augment(match_of_y[static_cast<std::size_t>(y)],
                        rows[static_cast<std::size_t>(match_of_y[static_cast<std::size_t>(y)])],
                        visited)) {
                match_of_y[static_cast<std::size_t>(y)] = row_idx;
                return true;
            }
        }
        return false;
    }
};

// Depth-first sum over per-vertex effective neighborhoods E_x = L_x ∩ N_F(x),
// weighted by the number of s-subsets realizing each E_x. Branches whose
// partial assignment already fails Hall are pruned: an unmatched prefix
// vertex can never be repaired by later rows.
struct PmEnumerator {
    int k = 0;
    int y = 0;
    int s = 0;
    std::vector<std::uint32_t> f_rows;  // N_F(x) as masks
    std::vector<int> f_deg;
    std::int64_t total = 0;

    std::int64_t run(int i, std::int64_t weight, MaskMatcher& matcher) {
        if (i == k) return weight;
        std::int64_t acc = 0;
        const std::uint32_t frow = f_rows[static_cast<std::size_t>(i)];
        const int df = f_deg[static_cast<std::size_t>(i)];
        // Enumerate E ⊆ N_F(x_i) with |E| <= s.
        std::uint32_t e = 0;
        for (;;) {
            const int esz = std::popcount(e);
            const std::int64_t ways = binom(y - df, s - esz);
            if (ways > 0) {
                matcher.rows.push_back(e);
                std::vector<int> saved = matcher.match_of_y;
                std::uint32_t visited = 0;
                if (matcher.augment(i, e, visited)) {
                    acc += run(i + 1, weight * ways, matcher);
                }
                matcher.match_of_y = std::move(saved);
                matcher.rows.pop_back();
            }
            // next subset of frow
            if (e == frow) break;
            e = (e - frow) & frow;
        }
        return acc;
    }
};

}  // namespace

Rational pm_probability_exact(const Bigraph& f, int s) {
    if (f.x_size > 7 || f.y_size > 7) {
        throw std::invalid_argument("pm_probability_exact: instance too large (|X|,|Y| <= 7)");
    }
    if (s < 0 || s > f.y_size) {
        throw std::invalid_argument("pm_probability_exact: s outside [0, |Y|]");
    }
    if (f.x_size == 0) return Rational::make(1, 1);

    PmEnumerator en;
    en.k = f.x_size;
    en.y = f.y_size;
    en.s = s;
    en.f_rows.resize(static_cast<std::size_t>(f.x_size));
    en.f_deg.resize(static_cast<std::size_t>(f.x_size));
    for (int x = 0; x < f.x_size; ++x) {
        std::uint32_t m = 0;
        for (int yy : f.adj[static_cast<std::size_t>(x)]) m |= 1u << yy;
        en.f_rows[static_cast<std::size_t>(x)] = m;
        en.f_deg[static_cast<std::size_t>(x)] = std::popcount(m);
    }
    MaskMatcher matcher;
    matcher.match_of_y.assign(static_cast<std::size_t>(f.y_size), -1);
    const std::int64_t num = en.run(0, 1, matcher);

    const std::int64_t per_x = binom(f.y_size, s);
    std::int64_t den = 1;
    for (int i = 0; i < f.x_size; ++i) den *= per_x;
    return Rational::make(num, den);
}

}  // namespace pspark
