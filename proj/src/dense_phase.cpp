#include "pspark/dense_phase.hpp"

#include "pspark/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pspark {

ClusterParams cluster_params(double zeta, double eps, Vertex degree_bound, int ell) {
    const double D = static_cast<double>(degree_bound);
    ClusterParams p;
    p.zeta = zeta;
    p.zeta0 = std::sqrt(eps) / D;
    p.small_zeta = zeta < p.zeta0;
    if (p.small_zeta) return p;

    const double lower = std::max(zeta, 1.0 / D);
    const double upper = zeta / eps;
    p.eta = std::sqrt(lower * upper);
    const double eta_cap = zeta / (4.0 * eps);
    if (p.eta > eta_cap) {
        p.eta = eta_cap;
        p.clamped = true;
    }
    p.q = 1.0 - std::exp(-(zeta * static_cast<double>(ell)) / (8.0 * p.b * eps));

    const double k_lo = 2.0;
    const double k_hi = p.q / (2.0 * p.eta);
    double K = std::sqrt(p.q / p.eta);
    if (k_hi < k_lo) {
        K = k_hi;
        p.clamped = true;
    } else if (K < k_lo) {
        K = k_lo;
        p.clamped = true;
    } else if (K > k_hi) {
        K = k_hi;
        p.clamped = true;
    }
    p.K = K;

    const int budget = degree_bound / 10;
    int m = static_cast<int>(std::ceil(K * p.eta * D / p.q));
    if (m < 1) m = 1;
    if (m > budget) {
        m = budget;
        p.clamped = true;
    }
    p.m = m;  // 0 when D < 10: no color budget, the process is skipped
    return p;
}

ClusterState build_cluster_state(const Graph& g, std::span<const Vertex> cluster,
                                 Vertex degree_bound, double eps, int ell) {
    ClusterState st;
    st.members.assign(cluster.begin(), cluster.end());
    std::sort(st.members.begin(), st.members.end());
    const int c = st.size();
    st.words = static_cast<std::size_t>((c + 63) / 64);
    st.h_rows.assign(static_cast<std::size_t>(c) * st.words, 0);
    st.d_h.assign(static_cast<std::size_t>(c), 0);

    std::vector<int> local_of(static_cast<std::size_t>(g.vertex_count()), -1);
    for (int i = 0; i < c; ++i) local_of[static_cast<std::size_t>(st.members[i])] = i;

    // H = complement of G inside the cluster.
    for (int i = 0; i < c; ++i) {
        std::uint64_t* row = st.h_rows.data() + static_cast<std::size_t>(i) * st.words;
        for (int j = 0; j < c; ++j) {
            if (j != i) row[j >> 6] |= 1ULL << (j & 63);
        }
        for (Vertex w : g.neighbors(st.members[static_cast<std::size_t>(i)])) {
            const int j = local_of[static_cast<std::size_t>(w)];
            if (j >= 0) row[j >> 6] &= ~(1ULL << (j & 63));
        }
        st.d_h[static_cast<std::size_t>(i)] =
            static_cast<int>(kernels::active().popcount(row, st.words));
        st.nonedges += static_cast<std::uint64_t>(st.d_h[static_cast<std::size_t>(i)]);
    }
    st.nonedges /= 2;

    const double zeta = static_cast<double>(st.nonedges) /
                        (static_cast<double>(degree_bound) * static_cast<double>(degree_bound));
    st.params = cluster_params(zeta, eps, degree_bound, ell);
    return st;
}

namespace {

std::vector<double> color_weights(const ClusterState& state, const Graph& g,
                                  const PartialColoring& sigma, Color gamma_size,
                                  Vertex degree_bound) {
    const double zd = state.params.zeta * static_cast<double>(degree_bound);
    std::vector<double> f(static_cast<std::size_t>(gamma_size), 0.0);
    // One contribution of zeta*D + d_H(v) per cluster vertex v and distinct
    // color appearing on v's already-colored neighbors.
    std::vector<char> seen(static_cast<std::size_t>(gamma_size), 0);
    std::vector<Color> touched;
    for (int i = 0; i < state.size(); ++i) {
        const Vertex v = state.members[static_cast<std::size_t>(i)];
        touched.clear();
        for (Vertex w : g.neighbors(v)) {
            const Color c = sigma.color[static_cast<std::size_t>(w)];
            if (c >= 0 && c < gamma_size && !seen[static_cast<std::size_t>(c)]) {
                seen[static_cast<std::size_t>(c)] = 1;
                touched.push_back(c);
            }
        }
        const double add = zd + static_cast<double>(state.d_h[static_cast<std::size_t>(i)]);
        for (Color c : touched) {
            f[static_cast<std::size_t>(c)] += add;
            seen[static_cast<std::size_t>(c)] = 0;
        }
    }
    return f;
}

}  // namespace

std::vector<Color> order_colors(const ClusterState& state, const Graph& g,
                                const PartialColoring& sigma, Color gamma_size,
                                Vertex degree_bound) {
    std::vector<double> f = color_weights(state, g, sigma, gamma_size, degree_bound);
    std::vector<Color> order(static_cast<std::size_t>(gamma_size));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Color a, Color b) {
        const double fa = f[static_cast<std::size_t>(a)];
        const double fb = f[static_cast<std::size_t>(b)];
        if (fa != fb) return fa < fb;
        return a < b;
    });
    return order;
}

ProcessOutcome run_pairing_process(const ClusterState& state, const Graph& g,
                                   PartialColoring& sigma, const ListAssignment& lists,
                                   std::span<const Color> ordered, Vertex degree_bound,
                                   double delta, bool adaptive) {
    const int c = state.size();
    const std::size_t words = state.words;
    const auto& kt = kernels::active();

    std::vector<int> local_of(static_cast<std::size_t>(g.vertex_count()), -1);
    for (int i = 0; i < c; ++i) local_of[static_cast<std::size_t>(state.members[i])] = i;

    std::vector<std::uint64_t> alive(words, 0);
    for (int i = 0; i < c; ++i) alive[i >> 6] |= 1ULL << (i & 63);

    ProcessOutcome out;
    const double eta_d = state.params.eta * static_cast<double>(degree_bound);
    const int budget = adaptive ? degree_bound / 10 : state.params.m;

    std::vector<std::uint64_t> cand(words);
    std::vector<std::uint64_t> row_and(words);
    int steps = 0;
    for (int i = 0; i < budget; ++i) {
        const Color color = ordered[static_cast<std::size_t>(i)];
        steps = i + 1;
        // J_i: alive cluster vertices listing the color with no neighbor
        // already colored with it.
        std::fill(cand.begin(), cand.end(), 0);
        for (std::size_t w = 0; w < words; ++w) {
            std::uint64_t bits = alive[w];
            while (bits != 0) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                const int li = static_cast<int>(w * 64 + static_cast<std::size_t>(b));
                const Vertex v = state.members[static_cast<std::size_t>(li)];
                if (lists.contains(v, color) && sigma.allowed(g, v, color)) {
                    cand[w] |= 1ULL << b;
                }
            }
        }
        const std::size_t cand_count = kt.popcount(cand.data(), words);
        if (cand_count == 0) {
            out.s2 = false;
            continue;  // step (III): no updates
        }
        // Step (I): lexicographically smallest non-edge within the candidates.
        int x = -1, y = -1;
        for (std::size_t w = 0; w < words && x < 0; ++w) {
            std::uint64_t bits = cand[w];
            while (bits != 0) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                const int li = static_cast<int>(w * 64 + static_cast<std::size_t>(b));
                const std::uint64_t* hr = state.h_row(li);
                bool found = false;
                for (std::size_t w2 = 0; w2 < words; ++w2) {
                    std::uint64_t mask = hr[w2] & cand[w2] & alive[w2];
                    while (mask != 0) {
                        const int b2 = std::countr_zero(mask);
                        mask &= mask - 1;
                        const int lj = static_cast<int>(w2 * 64 + static_cast<std::size_t>(b2));
                        if (lj <= li) continue;
                        x = li;
                        y = lj;
                        found = true;
                        break;
                    }
                    if (found) break;
                }
                if (found) break;
            }
        }
        if (x >= 0) {
            const Vertex vx = state.members[static_cast<std::size_t>(x)];
            const Vertex vy = state.members[static_cast<std::size_t>(y)];
            sigma.set(vx, color);
            sigma.set(vy, color);
            out.pairs.emplace_back(vx, vy);
            out.assigned.emplace_back(vx, color);
            out.assigned.emplace_back(vy, color);
            alive[x >> 6] &= ~(1ULL << (x & 63));
            alive[y >> 6] &= ~(1ULL << (y & 63));
        } else {
            // Step (II): candidate with minimum current d_H, smallest id first.
            int best = -1;
            int best_deg = 0;
            for (std::size_t w = 0; w < words; ++w) {
                std::uint64_t bits = cand[w];
                while (bits != 0) {
                    const int b = std::countr_zero(bits);
                    bits &= bits - 1;
                    const int li = static_cast<int>(w * 64 + static_cast<std::size_t>(b));
                    for (std::size_t w2 = 0; w2 < words; ++w2) {
                        row_and[w2] = state.h_row(li)[w2] & alive[w2];
                    }
                    const int deg = static_cast<int>(kt.popcount(row_and.data(), words));
                    if (best < 0 || deg < best_deg) {
                        best = li;
                        best_deg = deg;
                    }
                }
            }
            const Vertex vz = state.members[static_cast<std::size_t>(best)];
            sigma.set(vz, color);
            out.singles.push_back(vz);
            out.assigned.emplace_back(vz, color);
            alive[best >> 6] &= ~(1ULL << (best & 63));
        }
        if (adaptive && static_cast<double>(out.pairs.size()) >= eta_d) break;
    }
    out.m = adaptive ? steps : budget;

    // Success conditions.
    const double s1_threshold = 0.1 * delta * std::log(static_cast<double>(
                                    std::max<Vertex>(lists.n(), 2)));
    for (int i = 0; i < c && out.s1; ++i) {
        const Vertex v = state.members[static_cast<std::size_t>(i)];
        int overlap = 0;
        for (int j = 0; j + 1 < out.m; ++j) {
            if (lists.contains(v, ordered[static_cast<std::size_t>(j)])) overlap++;
        }
        if (static_cast<double>(overlap) > s1_threshold) out.s1 = false;
    }
    out.s3 = static_cast<double>(out.pairs.size()) >= eta_d;

    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = alive[w];
        while (bits != 0) {
            const int b = std::countr_zero(bits);
            bits &= bits - 1;
            out.residual_members.push_back(
                state.members[w * 64 + static_cast<std::size_t>(b)]);
        }
    }
    out.residual_colors.assign(ordered.begin() + out.m, ordered.end());
    return out;
}

AllowedBigraph build_allowed_bigraph(std::span<const Vertex> c_prime,
                                     std::span<const Color> gamma_prime, const Graph& g,
                                     const PartialColoring& sigma, const ListAssignment& lists,
                                     std::span<const Vertex> full_cluster) {
    AllowedBigraph out;
    out.row_vertex.assign(c_prime.begin(), c_prime.end());
    out.col_color.assign(gamma_prime.begin(), gamma_prime.end());
    const int nx = static_cast<int>(c_prime.size());
    const int ny = static_cast<int>(gamma_prime.size());
    out.k_prime = Bigraph::create(nx, ny);

    std::vector<int> col_of(static_cast<std::size_t>(lists.gamma_size), -1);
    for (int j = 0; j < ny; ++j) col_of[static_cast<std::size_t>(gamma_prime[j])] = j;
    std::vector<char> in_cluster(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex v : full_cluster) in_cluster[static_cast<std::size_t>(v)] = 1;

    std::vector<char> forbidden(static_cast<std::size_t>(ny), 0);
    std::vector<int> touched;
    for (int i = 0; i < nx; ++i) {
        const Vertex v = c_prime[static_cast<std::size_t>(i)];
        touched.clear();
        int external = 0;
        for (Vertex w : g.neighbors(v)) {
            if (!in_cluster[static_cast<std::size_t>(w)]) external++;
            const Color cw = sigma.color[static_cast<std::size_t>(w)];
            if (cw < 0) continue;
            const int j = col_of[static_cast<std::size_t>(cw)];
            if (j >= 0 && !forbidden[static_cast<std::size_t>(j)]) {
                forbidden[static_cast<std::size_t>(j)] = 1;
                touched.push_back(j);
            }
        }
        out.allowed_complement_degree.push_back(static_cast<int>(touched.size()));
        out.external_degree.push_back(external);
        for (Color c : lists.list(v)) {
            const int j = col_of[static_cast<std::size_t>(c)];
            if (j >= 0 && !forbidden[static_cast<std::size_t>(j)]) {
                out.k_prime.add_edge(i, j);
            }
        }
        for (int j : touched) forbidden[static_cast<std::size_t>(j)] = 0;
    }
    out.k_prime.finish();

    std::vector<char> col_used(static_cast<std::size_t>(ny), 0);
    for (const auto& row : out.k_prime.adj) {
        for (int j : row) col_used[static_cast<std::size_t>(j)] = 1;
    }
    out.isolated_columns = static_cast<int>(
        std::count(col_used.begin(), col_used.end(), static_cast<char>(0)));
    return out;
}

ClusterResult color_cluster(const Graph& g, std::span<const Vertex> cluster, Vertex degree_bound,
                            double eps, const ListAssignment& lists, PartialColoring& sigma,
                            double delta, bool adaptive_process) {
    ClusterResult result;
    ClusterState state = build_cluster_state(g, cluster, degree_bound, eps, lists.ell);
    result.params = state.params;
    const Color gamma_size = lists.gamma_size;

    std::vector<Color> c_prime_colors;
    std::vector<Vertex> c_prime;
    if (!state.params.small_zeta && state.params.m > 0) {
        const std::vector<Color> ordered =
            order_colors(state, g, sigma, gamma_size, degree_bound);
        result.process = run_pairing_process(state, g, sigma, lists, ordered, degree_bound,
                                             delta, adaptive_process);
        result.process_ran = true;
        c_prime = result.process.residual_members;
        c_prime_colors = result.process.residual_colors;
    } else {
        c_prime.assign(state.members.begin(), state.members.end());
        c_prime_colors.resize(static_cast<std::size_t>(gamma_size));
        std::iota(c_prime_colors.begin(), c_prime_colors.end(), 0);
    }

    AllowedBigraph ab =
        build_allowed_bigraph(c_prime, c_prime_colors, g, sigma, lists, state.members);
    const MatchingResult mr = max_matching(ab.k_prime);
    result.isolated_colors = ab.isolated_columns;
    if (!mr.saturates_x) {
        result.deficiency = mr.deficiency;
        if (auto viol = hall_violator(ab.k_prime, mr)) {
            result.witness.reserve(viol->size());
            for (int i : *viol) {
                result.witness.push_back(ab.row_vertex[static_cast<std::size_t>(i)]);
            }
        }
        // Counting certificate: too few colors carry any edge at all.
        result.coverage_certified =
            ab.isolated_columns >
            static_cast<int>(c_prime_colors.size()) - static_cast<int>(c_prime.size());
        return result;
    }
    for (int i = 0; i < ab.k_prime.x_size; ++i) {
        const int j = mr.pair_of_x[static_cast<std::size_t>(i)];
        sigma.set(ab.row_vertex[static_cast<std::size_t>(i)],
                  ab.col_color[static_cast<std::size_t>(j)]);
    }
    result.success = true;
    return result;
}

}  // namespace pspark
