#include "pspark/palette.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pspark {

bool ListAssignment::contains(Vertex v, Color c) const {
    auto l = list(v);
    return std::binary_search(l.begin(), l.end(), c);
}

int list_size(std::int64_t n, double delta, Color gamma_size) {
    if (n < 2) throw std::invalid_argument("list_size: n < 2");
    const double raw = (1.0 + delta) * std::log(static_cast<double>(n));
    const auto k = static_cast<std::int64_t>(std::ceil(raw - 1e-12));
    return static_cast<int>(std::min<std::int64_t>(std::max<std::int64_t>(k, 0), gamma_size));
}

ListAssignment sample_lists(Vertex n, Color gamma_size, int ell, RngStream rng) {
    if (ell > gamma_size) throw std::invalid_argument("sample_lists: ell > gamma_size");
    if (ell < 0 || n < 0 || gamma_size < 0) throw std::invalid_argument("sample_lists: negative parameter");

    ListAssignment out;
    out.gamma_size = gamma_size;
    out.ell = ell;
    out.seed = rng.master_seed();
    out.stream_id = rng.stream_id();
    out.lists.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(ell));
    out.first_choice.assign(static_cast<std::size_t>(n), -1);

    std::vector<Color> pool(static_cast<std::size_t>(gamma_size));
    for (Vertex v = 0; v < n; ++v) {
        RngStream vs = rng.substream(static_cast<std::uint64_t>(v));
        for (Color c = 0; c < gamma_size; ++c) pool[static_cast<std::size_t>(c)] = c;
        Color* row = out.lists.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(ell);
        // Partial Fisher-Yates: the first ell entries of a uniform permutation.
        for (int i = 0; i < ell; ++i) {
            const auto j = static_cast<std::size_t>(
                vs.below(static_cast<std::uint64_t>(gamma_size - i)) + static_cast<std::uint64_t>(i));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
            row[i] = pool[static_cast<std::size_t>(i)];
        }
        if (ell > 0) out.first_choice[static_cast<std::size_t>(v)] = row[0];
        std::sort(row, row + ell);
    }
    return out;
}

PaletteBitrows::PaletteBitrows(Vertex n, Color gamma_size)
    : words(static_cast<std::size_t>((gamma_size + 63) / 64)),
      bits(static_cast<std::size_t>(n) * words, 0) {}

PaletteBitrows::PaletteBitrows(const ListAssignment& lists)
    : PaletteBitrows(lists.n(), lists.gamma_size) {
    for (Vertex v = 0; v < lists.n(); ++v) {
        std::uint64_t* r = row(v);
        for (Color c : lists.list(v)) set(r, c);
    }
}

}  // namespace pspark
