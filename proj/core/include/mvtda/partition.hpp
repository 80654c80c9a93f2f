#pragma once

#include "mvtda/filtration.hpp"
#include "mvtda/image_stack.hpp"

#include <array>
#include <vector>

namespace mvtda {

/// Set operation linking consecutive slice complexes. Unions give the
/// alternating sequence slice -> union <- slice; intersections reverse the
/// arrows (slice <- intersection -> slice).
enum class SetOp { Union, Intersection };

/// The interleaved sequence of per-time 2D complexes and their pairwise
/// links, all sharing vertex ids over the common frame grid. Position 2o-1
/// of the zigzag is slices[o-1]; position 2o is links[o-1].
struct SliceComplexSequence {
    std::array<int, 2> frame_dims{};
    double theta = 0.0;
    SetOp set_op = SetOp::Union;
    std::vector<std::vector<Simplex>> slices; // l complexes, sorted by (dim, lex)
    std::vector<std::vector<Simplex>> links;  // l-1 complexes, sorted

    int num_times() const { return static_cast<int>(slices.size()); }
    int sequence_length() const { return 2 * num_times() - 1; }
    /// Complex at interleaved position p in 1..2l-1.
    const std::vector<Simplex>& at_position(int p) const {
        return p % 2 ? slices[static_cast<std::size_t>((p - 1) / 2)]
                     : links[static_cast<std::size_t>(p / 2 - 1)];
    }
};

/// Per-time vertex sets {(x, y) : Z(x, y, t_o) >= theta} as 0/1 masks over
/// the frame grid, one per frame. Empty masks are allowed.
std::vector<std::vector<char>> threshold_slices(const ImageStack& smoothed, double theta);

/// Builds the induced ("full") subcomplex of the 2D Kuhn triangulation on
/// each vertex set -- a simplex enters iff every vertex passes -- plus the
/// consecutive set-operation complexes.
SliceComplexSequence build_slice_complexes(const std::vector<std::vector<char>>& masks,
                                           std::array<int, 2> frame_dims, double theta,
                                           SetOp op = SetOp::Union);

} // namespace mvtda
