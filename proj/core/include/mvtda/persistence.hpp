#pragma once

#include "mvtda/filtration.hpp"

#include <cstdint>
#include <vector>

namespace mvtda {

/// One birth/death pair in intensity units. Upper-level-set convention:
/// birth >= death, persistence = birth - death. Essential classes survive to
/// the end of the filtration and are reported with death at the global
/// minimum filtration value.
struct PersistencePoint {
    int dim = 0;
    double birth = 0.0;
    double death = 0.0;
    bool essential = false;
    std::uint32_t birth_pos = 0;  // filtration position of the creating simplex
    std::uint32_t death_pos = 0;  // filtration position of the killing simplex (pairs only)

    double persistence() const { return birth - death; }
};

struct PersistenceDiagram {
    std::vector<PersistencePoint> points;
    int max_dim = 0;

    /// Number of diagram points of each dimension 0..max_dim.
    std::vector<std::size_t> betti() const {
        std::vector<std::size_t> counts(static_cast<std::size_t>(max_dim) + 1, 0);
        for (const auto& p : points)
            if (p.dim <= max_dim) ++counts[static_cast<std::size_t>(p.dim)];
        return counts;
    }
};

/// Persistence of the upper-level-set filtration by boundary-matrix column
/// reduction over GF(2) with the clearing (twist) optimization: dimensions
/// are processed in decreasing order and the column of a simplex already
/// paired as a birth is skipped. Zero-persistence pairs (birth == death) are
/// dropped from the reported diagram; essential classes are kept.
PersistenceDiagram compute_persistence(const FilteredComplex& fc, int max_dim);

/// Fast path for a single dimension m >= 1: reduces only the dimension m+1
/// columns, which is all the pairing for H_m needs. Essential H_m classes of
/// a full-grid filtration do not exist for m >= 1 (the box is contractible),
/// so only paired points are returned.
std::vector<PersistencePoint> pairs_in_dimension(const FilteredComplex& fc, int m);

/// Betti numbers of the subcomplex {value >= delta} by plain rank-nullity on
/// its boundary matrices, with no persistence pairing. Independent of the
/// reduction path above; used as the brute-force oracle.
std::vector<std::size_t> betti_at(const FilteredComplex& fc, double delta, int max_dim);

/// Rank-nullity Betti numbers of an explicit closed simplex list (shared by
/// betti_at and the zigzag completeness checks).
std::vector<std::size_t> betti_of_complex(const std::vector<Simplex>& simplices, int max_dim);

} // namespace mvtda
