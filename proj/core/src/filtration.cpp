#include "mvtda/filtration.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace mvtda {

std::vector<Simplex> freudenthal_complex(std::span<const int> dims) {
    const int m = static_cast<int>(dims.size());
    if (m < 2 || m > 3)
        throw std::invalid_argument("freudenthal_complex: only 2D and 3D grids are supported");
    for (int d : dims)
        if (d < 1) throw std::invalid_argument("freudenthal_complex: dims must be >= 1");

    // linearization matching ImageStack: time (last axis) slowest for 3D,
    // row-major for 2D
    auto vid = [&](const std::array<int, 3>& c) -> VertexId {
        if (m == 3)
            return static_cast<VertexId>((static_cast<long>(c[2]) * dims[0] + c[0]) * dims[1] + c[1]);
        return static_cast<VertexId>(static_cast<long>(c[0]) * dims[1] + c[1]);
    };

    std::vector<Simplex> out;
    // Enumerate each simplex once as a strict chain of grid points inside a
    // unit cube, rooted at the chain's minimum.
    std::array<int, 3> base{}, cur{};
    std::vector<VertexId> chain;

    // recursive extension: next element strictly above cur, within base+1
    auto extend = [&](auto&& self) -> void {
        out.push_back(Simplex::from(chain));
        // candidates: add any nonzero 0/1 step to cur staying within base+1 and grid
        const int steps = 1 << m;
        for (int s = 1; s < steps; ++s) {
            std::array<int, 3> nxt = cur;
            bool ok = true;
            for (int i = 0; i < m; ++i) {
                if (s & (1 << i)) {
                    nxt[i] += 1;
                    if (nxt[i] > base[i] + 1 || nxt[i] >= dims[i]) { ok = false; break; }
                }
            }
            if (!ok) continue;
            const std::array<int, 3> saved = cur;
            cur = nxt;
            chain.push_back(vid(cur));
            self(self);
            chain.pop_back();
            cur = saved;
        }
    };

    std::array<int, 3> it{};
    const int d0 = dims[0], d1 = dims[1], d2 = m == 3 ? dims[2] : 1;
    for (it[2] = 0; it[2] < d2; ++it[2])
        for (it[0] = 0; it[0] < d0; ++it[0])
            for (it[1] = 0; it[1] < d1; ++it[1]) {
                base = it;
                cur = it;
                chain.assign(1, vid(cur));
                extend(extend);
                chain.clear();
            }

    std::sort(out.begin(), out.end());
    return out;
}

Triangulation::Triangulation(std::span<const int> grid_dims)
    : Triangulation(freudenthal_complex(grid_dims)) {
    dims.assign(grid_dims.begin(), grid_dims.end());
}

Triangulation::Triangulation(std::vector<Simplex> complex)
    : simplices(std::move(complex)) {
    std::sort(simplices.begin(), simplices.end());
    std::unordered_map<Simplex, std::int32_t, SimplexHash> index;
    index.reserve(simplices.size() * 2);
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        index.emplace(simplices[i], static_cast<std::int32_t>(i));
        max_dim = std::max(max_dim, simplices[i].dim());
    }
    facets.resize(simplices.size());
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        facets[i].fill(-1);
        const int d = simplices[i].dim();
        for (int f = 0; f <= d && d >= 1; ++f) {
            auto it = index.find(simplices[i].facet(f));
            if (it == index.end())
                throw std::invalid_argument("Triangulation: complex is not closed under faces");
            facets[i][f] = it->second;
        }
    }
}

namespace {

FilteredComplex make_filtration(const Triangulation& tri, std::span<const double> vv) {
    FilteredComplex fc;
    fc.tri = &tri;
    fc.values.resize(tri.size());
    for (std::size_t i = 0; i < tri.size(); ++i) {
        const Simplex& s = tri.simplices[i];
        double v = vv[static_cast<std::size_t>(s.v[0])];
        for (int j = 1; j < static_cast<int>(s.n); ++j)
            v = std::min(v, vv[static_cast<std::size_t>(s.v[j])]);
        fc.values[i] = v;
    }
    fc.order.resize(tri.size());
    std::iota(fc.order.begin(), fc.order.end(), 0u);
    // value descending; ties by (dim, lex), which the simplex index encodes
    std::sort(fc.order.begin(), fc.order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (fc.values[a] != fc.values[b]) return fc.values[a] > fc.values[b];
        return a < b;
    });
    if (!fc.values.empty()) {
        auto [mn, mx] = std::minmax_element(fc.values.begin(), fc.values.end());
        fc.min_value = *mn;
        fc.max_value = *mx;
    }
    return fc;
}

} // namespace

FilteredComplex assign_filtration(const Triangulation& tri, const ImageStack& stack) {
    std::size_t max_vid = 0;
    for (const Simplex& s : tri.simplices)
        for (int j = 0; j < static_cast<int>(s.n); ++j)
            max_vid = std::max(max_vid, static_cast<std::size_t>(s.v[j]));
    if (max_vid >= stack.size())
        throw std::out_of_range("assign_filtration: vertex id " + std::to_string(max_vid) +
                                " out of range for stack of " + std::to_string(stack.size()) +
                                " pixels");
    return make_filtration(tri, stack.values());
}

FilteredComplex assign_filtration(const Triangulation& tri,
                                  std::span<const double> vertex_values) {
    return make_filtration(tri, vertex_values);
}

} // namespace mvtda
