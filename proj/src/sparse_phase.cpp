#include "pspark/sparse_phase.hpp"

#include "pspark/kernels.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace pspark {

bool PartialColoring::allowed(const Graph& g, Vertex v, Color c) const {
    for (Vertex w : g.neighbors(v)) {
        if (color[static_cast<std::size_t>(w)] == c) return false;
    }
    return true;
}

namespace {

constexpr double kInvE = 0.36787944117144233;

std::vector<std::uint8_t> retained_from_tau(const Graph& g, const std::vector<Color>& tau) {
    const Vertex n = g.vertex_count();
    std::vector<std::uint8_t> retained(static_cast<std::size_t>(n), 0);
    const auto& k = kernels::active();
    for (Vertex v = 0; v < n; ++v) {
        auto nb = g.neighbors(v);
        const bool conflict =
            k.any_equal_gather(tau.data(), nb.data(), nb.size(), tau[static_cast<std::size_t>(v)]);
        retained[static_cast<std::size_t>(v)] = conflict ? 0 : 1;
    }
    return retained;
}

TentativeOutcome outcome_from_tau(const Graph& g, std::vector<Color> tau) {
    TentativeOutcome out;
    out.retained = retained_from_tau(g, tau);
    out.sigma = PartialColoring(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (out.retained[static_cast<std::size_t>(v)]) {
            out.sigma.set(v, tau[static_cast<std::size_t>(v)]);
        }
    }
    out.tau = std::move(tau);
    return out;
}

// Colors of retained neighbors, as one bit row per vertex.
PaletteBitrows retained_color_rows(const Graph& g, const TentativeOutcome& o, Color gamma_size) {
    PaletteBitrows used(g.vertex_count(), gamma_size);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        std::uint64_t* row = used.row(v);
        for (Vertex w : g.neighbors(v)) {
            if (o.retained[static_cast<std::size_t>(w)]) {
                PaletteBitrows::set(row, o.tau[static_cast<std::size_t>(w)]);
            }
        }
    }
    return used;
}

Color select_nth_bit(const std::uint64_t* row, std::size_t words, std::size_t idx) {
    for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t x = row[w];
        const auto pc = static_cast<std::size_t>(std::popcount(x));
        if (idx < pc) {
            for (;;) {
                const int b = std::countr_zero(x);
                if (idx == 0) return static_cast<Color>(w * 64 + static_cast<std::size_t>(b));
                x &= x - 1;
                --idx;
            }
        }
        idx -= pc;
    }
    return -1;
}

}  // namespace

TentativeOutcome tentative_color(const Graph& g, const ListAssignment& lists) {
    if (lists.ell < 1) throw std::invalid_argument("tentative_color: empty lists");
    std::vector<Color> tau(lists.first_choice.begin(), lists.first_choice.end());
    return outcome_from_tau(g, std::move(tau));
}

TentativeOutcome tentative_color(const Graph& g, const ListAssignment& lists, RngStream& rng) {
    if (lists.ell < 1) throw std::invalid_argument("tentative_color: empty lists");
    const Vertex n = g.vertex_count();
    std::vector<Color> tau(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) {
        tau[static_cast<std::size_t>(v)] =
            lists.list(v)[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(lists.ell)))];
    }
    return outcome_from_tau(g, std::move(tau));
}

std::vector<std::vector<Color>> residual_lists(const Graph& g, const TentativeOutcome& outcome,
                                               const ListAssignment& lists,
                                               std::span<const Vertex> sparse_vertices) {
    std::vector<std::vector<Color>> out(static_cast<std::size_t>(g.vertex_count()));
    PaletteBitrows used = retained_color_rows(g, outcome, lists.gamma_size);
    for (Vertex v : sparse_vertices) {
        if (outcome.retained[static_cast<std::size_t>(v)]) continue;
        const std::uint64_t* used_row = used.row(v);
        const Color tau_v = outcome.tau[static_cast<std::size_t>(v)];
        for (Color c : lists.list(v)) {
            if (c == tau_v) continue;
            if (PaletteBitrows::test(used_row, c)) continue;
            out[static_cast<std::size_t>(v)].push_back(c);
        }
    }
    return out;
}

std::vector<Vertex> compute_bad_vertices(const Graph& g, const TentativeOutcome& outcome,
                                         const ListAssignment& lists,
                                         std::span<const Vertex> sparse_vertices, int t,
                                         double theta_prime) {
    const double varsigma = theta_prime / 3.0;
    const double threshold = (kInvE - theta_prime + varsigma) * static_cast<double>(t);
    PaletteBitrows used = retained_color_rows(g, outcome, lists.gamma_size);
    std::vector<Vertex> bad;
    for (Vertex v : sparse_vertices) {
        if (outcome.retained[static_cast<std::size_t>(v)]) continue;
        const std::uint64_t* used_row = used.row(v);
        const Color tau_v = outcome.tau[static_cast<std::size_t>(v)];
        int overlap = 0;
        for (Color c : lists.list(v)) {
            if (c != tau_v && PaletteBitrows::test(used_row, c)) overlap++;
        }
        if (static_cast<double>(overlap) > threshold) bad.push_back(v);
    }
    return bad;
}

void prune_color_degrees(const Graph& g, const TentativeOutcome& outcome,
                         const ListAssignment& lists, std::span<const Vertex> bad,
                         std::span<const Vertex> targets, int t, double varsigma,
                         PaletteBitrows& rows, SparseDiagnostics* diag) {
    const double threshold = (1.0 - kInvE + varsigma) * static_cast<double>(t);
    const auto& k = kernels::active();

    // Residual rows L_w \ {tau_w} for every vertex: tentative colors only
    // shrink the competitor lists.
    PaletteBitrows resid(lists);
    for (Vertex w = 0; w < g.vertex_count(); ++w) {
        PaletteBitrows::clear(resid.row(w), outcome.tau[static_cast<std::size_t>(w)]);
    }
    std::vector<char> is_bad(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex b : bad) is_bad[static_cast<std::size_t>(b)] = 1;

    std::vector<Vertex> ids;
    for (Vertex v : targets) {
        ids.clear();
        for (Vertex w : g.neighbors(v)) {
            if (!outcome.retained[static_cast<std::size_t>(w)] &&
                !is_bad[static_cast<std::size_t>(w)]) {
                ids.push_back(w);
            }
        }
        std::uint64_t* row = rows.row(v);
        int pruned_here = 0;
        for (std::size_t w = 0; w < rows.words; ++w) {
            std::uint64_t bitsleft = row[w];
            while (bitsleft != 0) {
                const int b = std::countr_zero(bitsleft);
                bitsleft &= bitsleft - 1;
                const auto color = static_cast<std::uint32_t>(w * 64 + static_cast<std::size_t>(b));
                const std::size_t deg =
                    k.count_bit_rows(resid.bits.data(), resid.words, color, ids.data(), ids.size());
                if (static_cast<double>(deg) > threshold) {
                    row[w] &= ~(1ULL << b);
                    pruned_here++;
                }
            }
        }
        if (diag != nullptr && pruned_here > 0) {
            diag->pruned_colors_total += static_cast<std::size_t>(pruned_here);
            diag->max_pruned_per_vertex = std::max(diag->max_pruned_per_vertex, pruned_here);
        }
    }
}

SparseResult color_sparse(const Graph& g, const Decomposition& decomp,
                          const ListAssignment& lists, RngStream rng, const SparseOptions& opts) {
    const Vertex n = g.vertex_count();
    const Color gamma = lists.gamma_size;
    const int t = std::max(lists.ell - 1, 0);
    const double eps = decomp.epsilon;
    const double theta = 0.5 * eps * eps;
    const double theta_prime = 0.5 * theta * std::exp(-3.0);
    const double varsigma = theta_prime / 3.0;

    SparseResult result;
    result.coloring = PartialColoring(n);
    if (decomp.sparse.empty()) {
        result.success = true;
        return result;
    }
    if (lists.ell < 1) {
        result.failure = PhaseFailure{PhaseFailure::Reason::empty_residual_list,
                                      decomp.sparse.front()};
        return result;
    }

    PaletteBitrows listrows(lists);
    const std::size_t words = listrows.words;

    const int rounds = 1 + std::max(opts.tentative_restarts, 0);
    for (int round = 0; round < rounds; ++round) {
        TentativeOutcome outcome =
            round == 0 ? tentative_color(g, lists) : tentative_color(g, lists, rng);
        result.diag.tentative_rounds = round + 1;

        // sigma(T ∩ N_v) bit rows plus retention/duplication diagnostics.
        PaletteBitrows used(n, gamma);
        result.diag.retained_neighbors.assign(static_cast<std::size_t>(n), 0);
        result.diag.duplication_surplus.assign(static_cast<std::size_t>(n), 0);
        const auto& kt = kernels::active();
        for (Vertex v = 0; v < n; ++v) {
            std::uint64_t* row = used.row(v);
            Vertex cnt = 0;
            for (Vertex w : g.neighbors(v)) {
                if (outcome.retained[static_cast<std::size_t>(w)]) {
                    PaletteBitrows::set(row, outcome.tau[static_cast<std::size_t>(w)]);
                    cnt++;
                }
            }
            result.diag.retained_neighbors[static_cast<std::size_t>(v)] = cnt;
            result.diag.duplication_surplus[static_cast<std::size_t>(v)] =
                cnt - static_cast<Vertex>(kt.popcount(row, words));
        }

        // Residual rows for uncolored sparse vertices.
        std::vector<Vertex> uncolored;
        for (Vertex v : decomp.sparse) {
            if (!outcome.retained[static_cast<std::size_t>(v)]) uncolored.push_back(v);
        }
        PaletteBitrows resid(n, gamma);
        bool empty_row = false;
        Vertex empty_at = -1;
        int min_resid = lists.ell;
        for (Vertex v : uncolored) {
            std::uint64_t* row = resid.row(v);
            std::memcpy(row, listrows.row(v), words * sizeof(std::uint64_t));
            PaletteBitrows::clear(row, outcome.tau[static_cast<std::size_t>(v)]);
            kt.andnot_inplace(row, used.row(v), words);
            const auto pc = static_cast<int>(kt.popcount(row, words));
            min_resid = std::min(min_resid, pc);
            if (pc == 0 && !empty_row) {
                empty_row = true;
                empty_at = v;
            }
        }
        result.diag.min_residual_list = uncolored.empty() ? lists.ell : min_resid;
        if (empty_row) {
            result.failure = PhaseFailure{PhaseFailure::Reason::empty_residual_list, empty_at};
            continue;  // fresh tentative colors may clear the blockage
        }

        // Bad set and color-degree pruning, both per tentative round.
        std::vector<Vertex> bad;
        std::vector<Vertex> rest = uncolored;
        if (opts.paper_faithful) {
            bad = compute_bad_vertices(g, outcome, lists, decomp.sparse, t, theta_prime);
            std::vector<char> is_bad(static_cast<std::size_t>(n), 0);
            for (Vertex b : bad) is_bad[static_cast<std::size_t>(b)] = 1;
            rest.clear();
            for (Vertex v : uncolored) {
                if (!is_bad[static_cast<std::size_t>(v)]) rest.push_back(v);
            }
        }
        result.diag.bad = bad;
        PaletteBitrows pruned = resid;
        if (opts.paper_faithful) {
            result.diag.pruned_colors_total = 0;
            result.diag.max_pruned_per_vertex = 0;
            prune_color_degrees(g, outcome, lists, bad, rest, t, varsigma, pruned, &result.diag);
        }

        const int orders = 1 + std::max(opts.ordering_retries, 0);
        std::vector<char> sparse_uncolored(static_cast<std::size_t>(n), 0);
        for (Vertex v : uncolored) sparse_uncolored[static_cast<std::size_t>(v)] = 1;
        PaletteBitrows live(n, gamma);
        std::vector<Color> greedy(static_cast<std::size_t>(n), -1);
        for (int attempt = 0; attempt < orders; ++attempt) {
            if (attempt > 0) result.diag.ordering_retries++;
            std::fill(live.bits.begin(), live.bits.end(), 0);
            std::fill(greedy.begin(), greedy.end(), -1);
            bool stuck = false;
            Vertex stuck_at = -1;

            auto run_greedy = [&](std::vector<Vertex>& order, const PaletteBitrows& source) {
                rng.shuffle(order);
                std::vector<std::uint64_t> cand(words);
                for (Vertex v : order) {
                    for (std::size_t w = 0; w < words; ++w) {
                        cand[w] = source.row(v)[w] & ~live.row(v)[w];
                    }
                    const auto pc = kt.popcount(cand.data(), words);
                    if (pc == 0) {
                        stuck = true;
                        stuck_at = v;
                        return;
                    }
                    const Color c = select_nth_bit(cand.data(), words, rng.below(pc));
                    greedy[static_cast<std::size_t>(v)] = c;
                    for (Vertex w : g.neighbors(v)) {
                        if (sparse_uncolored[static_cast<std::size_t>(w)] &&
                            greedy[static_cast<std::size_t>(w)] < 0) {
                            PaletteBitrows::set(live.row(w), c);
                        }
                    }
                }
            };

            std::vector<Vertex> order_bad = bad;
            run_greedy(order_bad, resid);
            if (!stuck) {
                std::vector<Vertex> order_rest = rest;
                run_greedy(order_rest, pruned);
            }
            if (stuck) {
                result.failure = PhaseFailure{PhaseFailure::Reason::greedy_stuck, stuck_at};
                continue;
            }

            // Success: assemble the sparse coloring.
            for (Vertex v : decomp.sparse) {
                if (outcome.retained[static_cast<std::size_t>(v)]) {
                    result.coloring.set(v, outcome.tau[static_cast<std::size_t>(v)]);
                } else {
                    result.coloring.set(v, greedy[static_cast<std::size_t>(v)]);
                }
            }
            result.success = true;
            result.failure.reset();
            return result;
        }
    }
    return result;
}

}  // namespace pspark
