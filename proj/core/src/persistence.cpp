#include "mvtda/persistence.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace mvtda {

namespace {

using Column = std::vector<std::uint32_t>; // sorted ascending, pivot = back()

void xor_into(Column& dst, const Column& src, Column& scratch) {
    scratch.clear();
    std::set_symmetric_difference(dst.begin(), dst.end(), src.begin(), src.end(),
                                  std::back_inserter(scratch));
    dst.swap(scratch);
}

// Reduces the columns of one dimension d (the killers of H_{d-1} classes).
// `cleared` marks positions already paired as births by a higher dimension;
// their columns are known to reduce to zero and are skipped, and this pass
// marks the births it pairs in turn.
void reduce_dimension(const FilteredComplex& fc, int d,
                      const std::vector<std::uint32_t>& pos_of,
                      std::vector<char>& cleared,
                      std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
    const Triangulation& tri = *fc.tri;
    const std::size_t n = fc.size();
    std::vector<std::int64_t> owner_of_pivot(n, -1);
    std::unordered_map<std::uint32_t, Column> reduced; // death position -> column
    Column col, scratch;
    for (std::uint32_t k = 0; k < n; ++k) {
        const std::uint32_t si = fc.order[k];
        if (tri.simplices[si].dim() != d || cleared[k]) continue;
        col.clear();
        for (int f = 0; f <= d; ++f)
            col.push_back(pos_of[static_cast<std::size_t>(tri.facets[si][f])]);
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            const std::int64_t own = owner_of_pivot[col.back()];
            if (own < 0) break;
            xor_into(col, reduced[static_cast<std::uint32_t>(own)], scratch);
        }
        if (!col.empty()) {
            const std::uint32_t piv = col.back();
            owner_of_pivot[piv] = k;
            cleared[piv] = 1;
            pairs.emplace_back(piv, k);
            reduced.emplace(k, std::move(col));
            col = Column();
        }
    }
}

} // namespace

PersistenceDiagram compute_persistence(const FilteredComplex& fc, int max_dim) {
    const Triangulation& tri = *fc.tri;
    if (max_dim < 0)
        throw std::invalid_argument("compute_persistence: max_dim must be >= 0");
    const std::size_t n = fc.size();

    std::vector<std::uint32_t> pos_of(n);
    for (std::uint32_t k = 0; k < n; ++k) pos_of[fc.order[k]] = k;

    std::vector<char> cleared(n, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    const int top = std::min(tri.max_dim, max_dim + 1);
    for (int d = top; d >= 1; --d) reduce_dimension(fc, d, pos_of, cleared, pairs);

    PersistenceDiagram pd;
    pd.max_dim = max_dim;
    std::vector<char> died(n, 0);
    for (const auto& [bi, di] : pairs) {
        died[di] = 1;
        const int dim = tri.simplices[fc.order[bi]].dim();
        if (dim > max_dim) continue;
        const double birth = fc.value_of_position(bi);
        const double death = fc.value_of_position(di);
        if (birth == death) continue; // ordering artifact within a value class
        pd.points.push_back({dim, birth, death, false, bi, di});
    }
    // essentials: classes that neither died nor were paired away
    for (std::uint32_t k = 0; k < n; ++k) {
        const int dim = tri.simplices[fc.order[k]].dim();
        if (dim > max_dim || cleared[k] || died[k]) continue;
        pd.points.push_back({dim, fc.value_of_position(k), fc.min_value, true, k, k});
    }
    return pd;
}

std::vector<PersistencePoint> pairs_in_dimension(const FilteredComplex& fc, int m) {
    if (m < 1 || m + 1 > fc.tri->max_dim)
        throw std::invalid_argument("pairs_in_dimension: need 1 <= m <= top dimension - 1");
    const std::size_t n = fc.size();
    std::vector<std::uint32_t> pos_of(n);
    for (std::uint32_t k = 0; k < n; ++k) pos_of[fc.order[k]] = k;
    std::vector<char> cleared(n, 0);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    reduce_dimension(fc, m + 1, pos_of, cleared, pairs);

    std::vector<PersistencePoint> out;
    for (const auto& [bi, di] : pairs) {
        const double birth = fc.value_of_position(bi);
        const double death = fc.value_of_position(di);
        if (birth == death) continue;
        out.push_back({m, birth, death, false, bi, di});
    }
    return out;
}

namespace {

// rank of the boundary map from dimension d chains to dimension d-1 chains
std::size_t boundary_rank(const std::vector<Simplex>& simplices, int d) {
    std::unordered_map<Simplex, std::uint32_t, SimplexHash> row_id;
    for (const Simplex& s : simplices)
        if (s.dim() == d - 1)
            row_id.emplace(s, static_cast<std::uint32_t>(row_id.size()));
    std::unordered_map<std::uint32_t, Column> pivot_col;
    Column col, scratch;
    std::size_t rank = 0;
    for (const Simplex& s : simplices) {
        if (s.dim() != d) continue;
        col.clear();
        for (int f = 0; f <= d; ++f) col.push_back(row_id.at(s.facet(f)));
        std::sort(col.begin(), col.end());
        while (!col.empty()) {
            auto it = pivot_col.find(col.back());
            if (it == pivot_col.end()) break;
            xor_into(col, it->second, scratch);
        }
        if (!col.empty()) {
            ++rank;
            const std::uint32_t piv = col.back();
            pivot_col.emplace(piv, std::move(col));
            col = Column();
        }
    }
    return rank;
}

} // namespace

std::vector<std::size_t> betti_of_complex(const std::vector<Simplex>& simplices, int max_dim) {
    std::vector<std::size_t> n_by_dim(static_cast<std::size_t>(max_dim) + 2, 0);
    for (const Simplex& s : simplices)
        if (s.dim() <= max_dim + 1) ++n_by_dim[static_cast<std::size_t>(s.dim())];
    // rank[d] = rank of boundary_d; boundary_0 = 0
    std::vector<std::size_t> rank(static_cast<std::size_t>(max_dim) + 2, 0);
    for (int d = 1; d <= max_dim + 1; ++d)
        rank[static_cast<std::size_t>(d)] = boundary_rank(simplices, d);
    std::vector<std::size_t> betti(static_cast<std::size_t>(max_dim) + 1, 0);
    for (int m = 0; m <= max_dim; ++m)
        betti[static_cast<std::size_t>(m)] =
            n_by_dim[static_cast<std::size_t>(m)] - rank[static_cast<std::size_t>(m)] -
            rank[static_cast<std::size_t>(m) + 1];
    return betti;
}

std::vector<std::size_t> betti_at(const FilteredComplex& fc, double delta, int max_dim) {
    std::vector<Simplex> sub;
    for (std::size_t i = 0; i < fc.size(); ++i)
        if (fc.values[i] >= delta) sub.push_back(fc.tri->simplices[i]);
    return betti_of_complex(sub, max_dim);
}

} // namespace mvtda
