#pragma once

// Toy realization of the three-loop merge scenario on an 8 x 17 frame grid,
// five time points.
//
//   red:    square ring rows 1..5, cols 1..5, present t2, t3, t4
//   blue:   square ring rows 1..5, cols 5..9, present t3 only; it shares its
//           left side with red (a theta shape) and coalesces into red at t4
//   purple: square ring rows 1..5, cols 11..15, present t3, t4, disjoint
//   caps:   t1 holds a solid block over red's footprint, t5 solid blocks
//           over red's and purple's footprints
//
// Interleaved positions 1..9 (odd = slice, even = union). Hand-computed H1
// decomposition: red [3,7], blue [4,6] (born when it enters the t2-t3 union,
// dead at the t3-t4 union where one basis class dies), purple [4,7]. H0:
// the red chain spans [1,9], purple's component [4,9].

#include "mvtda/partition.hpp"

#include <array>
#include <vector>

namespace testsupport {

inline constexpr std::array<int, 2> kFig5Dims{8, 17};

inline void fig5_ring(std::vector<char>& mask, int r0, int c0, int r1, int c1) {
    for (int x = r0; x <= r1; ++x)
        for (int y = c0; y <= c1; ++y)
            if (x == r0 || x == r1 || y == c0 || y == c1)
                mask[static_cast<std::size_t>(x) * kFig5Dims[1] + y] = 1;
}

inline void fig5_block(std::vector<char>& mask, int r0, int c0, int r1, int c1) {
    for (int x = r0; x <= r1; ++x)
        for (int y = c0; y <= c1; ++y)
            mask[static_cast<std::size_t>(x) * kFig5Dims[1] + y] = 1;
}

inline std::vector<std::vector<char>> fig5_masks() {
    const std::size_t n = static_cast<std::size_t>(kFig5Dims[0]) * kFig5Dims[1];
    std::vector<std::vector<char>> masks(5, std::vector<char>(n, 0));
    fig5_block(masks[0], 0, 0, 6, 6);    // t1 cap over red
    fig5_ring(masks[1], 1, 1, 5, 5);     // t2: red
    fig5_ring(masks[2], 1, 1, 5, 5);     // t3: red + blue + purple
    fig5_ring(masks[2], 1, 5, 5, 9);
    fig5_ring(masks[2], 1, 11, 5, 15);
    fig5_ring(masks[3], 1, 1, 5, 5);     // t4: red + purple (blue merged away)
    fig5_ring(masks[3], 1, 11, 5, 15);
    fig5_block(masks[4], 0, 0, 6, 6);    // t5 caps over red and purple
    fig5_block(masks[4], 0, 10, 6, 16);
    return masks;
}

inline mvtda::SliceComplexSequence fig5_sequence() {
    return mvtda::build_slice_complexes(fig5_masks(), kFig5Dims, 1.0, mvtda::SetOp::Union);
}

} // namespace testsupport
