#include "pspark/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace pspark {
namespace {

struct Searcher {
    const Graph& g;
    std::vector<std::uint64_t> domain;
    std::vector<Color> assignment;
    std::uint64_t nodes = 0;

    bool solve() {
        // Minimum remaining values, ties by degree (descending), then id.
        int best = -1;
        int best_size = 65;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (assignment[static_cast<std::size_t>(v)] >= 0) continue;
            const int s = std::popcount(domain[static_cast<std::size_t>(v)]);
            if (s < best_size ||
                (s == best_size && best >= 0 && g.degree(v) > g.degree(best))) {
                best = v;
                best_size = s;
            }
        }
        if (best < 0) return true;  // everything assigned
        if (best_size == 0) return false;

        std::uint64_t dom = domain[static_cast<std::size_t>(best)];
        while (dom != 0) {
            const int c = std::countr_zero(dom);
            dom &= dom - 1;
            ++nodes;
            assignment[static_cast<std::size_t>(best)] = c;
            // Forward check: drop c from uncolored neighbors.
            std::vector<Vertex> shrunk;
            bool dead = false;
            for (Vertex w : g.neighbors(static_cast<Vertex>(best))) {
                if (assignment[static_cast<std::size_t>(w)] >= 0) continue;
                if ((domain[static_cast<std::size_t>(w)] >> c) & 1ULL) {
                    domain[static_cast<std::size_t>(w)] &= ~(1ULL << c);
                    shrunk.push_back(w);
                    if (domain[static_cast<std::size_t>(w)] == 0) {
                        dead = true;
                        break;
                    }
                }
            }
            if (!dead && solve()) return true;
            for (Vertex w : shrunk) domain[static_cast<std::size_t>(w)] |= 1ULL << c;
            assignment[static_cast<std::size_t>(best)] = -1;
        }
        return false;
    }
};

}  // namespace

OracleVerdict exact_list_colorable(const Graph& g, const ListAssignment& lists, int max_n) {
    if (g.vertex_count() > max_n) {
        throw std::invalid_argument("exact_list_colorable: instance too large");
    }
    if (lists.gamma_size > 64) {
        throw std::invalid_argument("exact_list_colorable: palette exceeds 64 colors");
    }
    OracleVerdict verdict;
    Searcher s{g, {}, {}, 0};
    s.domain.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    s.assignment.assign(static_cast<std::size_t>(g.vertex_count()), -1);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        for (Color c : lists.list(v)) s.domain[static_cast<std::size_t>(v)] |= 1ULL << c;
    }
    verdict.colorable = s.solve();
    verdict.nodes_explored = s.nodes;
    if (verdict.colorable) verdict.witness = s.assignment;
    return verdict;
}

double coverage_probability(std::int64_t n, int gamma_size, double ell) {
    if (gamma_size < 1) throw std::invalid_argument("coverage_probability: empty palette");
    if (ell < 0.0 || ell > static_cast<double>(gamma_size)) {
        throw std::invalid_argument("coverage_probability: ell outside [0, gamma]");
    }
    const long double g = static_cast<long double>(gamma_size);
    const long double l = static_cast<long double>(ell);
    const long double nn = static_cast<long double>(n);

    long double sum = 0.0L;
    long double comp = 0.0L;  // Kahan carry
    long double log_avoid = 0.0L;  // log prod_{i<j} (g-l-i)/(g-i)
    for (int j = 0; j <= gamma_size; ++j) {
        if (j > 0) {
            const long double numer = g - l - static_cast<long double>(j - 1);
            const long double denom = g - static_cast<long double>(j - 1);
            if (numer <= 0.0L) break;  // avoiding j colors impossible; later terms vanish
            log_avoid += std::log(numer) - std::log(denom);
        }
        const long double log_choose = std::lgamma(g + 1.0L) -
                                       std::lgamma(static_cast<long double>(j) + 1.0L) -
                                       std::lgamma(g - static_cast<long double>(j) + 1.0L);
        const long double term = std::exp(log_choose + nn * log_avoid);
        const long double signed_term = (j % 2 == 0) ? term : -term;
        const long double y = signed_term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    if (sum < 0.0L) sum = 0.0L;
    if (sum > 1.0L) sum = 1.0L;
    return static_cast<double>(sum);
}

}  // namespace pspark
