#pragma once

#include "mvtda/image_stack.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace mvtda {

using VertexId = std::int32_t;

/// A simplex of dimension <= 3 over grid-linearized vertex ids, vertices
/// strictly increasing.
struct Simplex {
    std::array<VertexId, 4> v{};
    std::uint8_t n = 0;

    Simplex() = default;
    Simplex(std::initializer_list<VertexId> verts) {
        for (VertexId id : verts) v[n++] = id;
    }
    static Simplex from(std::span<const VertexId> verts) {
        Simplex s;
        for (VertexId id : verts) s.v[s.n++] = id;
        return s;
    }

    int dim() const { return static_cast<int>(n) - 1; }
    std::span<const VertexId> vertices() const { return {v.data(), n}; }

    /// The face obtained by dropping vertex i (for dim >= 1).
    Simplex facet(int i) const {
        Simplex f;
        for (int j = 0; j < static_cast<int>(n); ++j)
            if (j != i) f.v[f.n++] = v[j];
        return f;
    }

    friend bool operator==(const Simplex& a, const Simplex& b) {
        if (a.n != b.n) return false;
        for (int i = 0; i < static_cast<int>(a.n); ++i)
            if (a.v[i] != b.v[i]) return false;
        return true;
    }
    /// Orders by dimension, then lexicographically on the vertex tuple.
    friend std::strong_ordering operator<=>(const Simplex& a, const Simplex& b) {
        if (a.n != b.n) return a.n <=> b.n;
        for (int i = 0; i < static_cast<int>(a.n); ++i)
            if (a.v[i] != b.v[i]) return a.v[i] <=> b.v[i];
        return std::strong_ordering::equal;
    }
};

struct SimplexHash {
    std::size_t operator()(const Simplex& s) const {
        std::size_t h = s.n;
        for (int i = 0; i < static_cast<int>(s.n); ++i)
            h = h * 0x9e3779b97f4a7c15ULL + static_cast<std::size_t>(s.v[i]) + 1;
        return h;
    }
};

/// Kuhn (Freudenthal) triangulation of a d1 x ... x dM pixel grid, M in
/// {2, 3}. Every unit cube is split into M! simplices along its main
/// diagonal; the simplices are exactly the chains of grid points that fit in
/// one unit cube under the componentwise partial order. Closed under faces;
/// the geometric realization is the solid box. Returned sorted by (dim, lex).
std::vector<Simplex> freudenthal_complex(std::span<const int> dims);

/// A simplicial complex with per-simplex facet indices precomputed. The
/// triangulation of a given grid is value-independent, so one Triangulation
/// is shared by every filtration over that grid (e.g. all permutation
/// replicates of the Maximum Persistence Test).
struct Triangulation {
    std::vector<int> dims;
    std::vector<Simplex> simplices;               // sorted by (dim, lex)
    std::vector<std::array<std::int32_t, 4>> facets; // indices into simplices, -1 padded
    int max_dim = 0;

    explicit Triangulation(std::span<const int> grid_dims);
    /// Builds facet links for an arbitrary closed complex (sorted or not).
    explicit Triangulation(std::vector<Simplex> complex);

    std::size_t size() const { return simplices.size(); }
};

/// An upper-level-set filtration: per-simplex values (the min of the vertex
/// intensities) and a total order for matrix reduction. The order sorts by
/// (value descending, dim ascending, lex vertex tuple), so every prefix is
/// the upper-level-set subcomplex {value >= delta} for some delta and faces
/// always precede cofaces.
struct FilteredComplex {
    const Triangulation* tri = nullptr;            // not owned
    std::vector<double> values;                    // per simplex index
    std::vector<std::uint32_t> order;              // order[k] = simplex index
    double min_value = 0.0, max_value = 0.0;

    std::size_t size() const { return values.size(); }
    double value_of_position(std::size_t k) const { return values[order[k]]; }
};

/// Assigns min-of-vertices filtration values from a stack whose flat pixel
/// indices are the complex's vertex ids.
FilteredComplex assign_filtration(const Triangulation& tri, const ImageStack& stack);

/// Same, from a raw per-vertex value array.
FilteredComplex assign_filtration(const Triangulation& tri,
                                  std::span<const double> vertex_values);

} // namespace mvtda
