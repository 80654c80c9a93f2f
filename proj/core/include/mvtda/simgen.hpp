#pragma once

#include "mvtda/image_stack.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mvtda {

/// Homoskedastic Gaussian pixel noise around a background mean.
struct NoiseSpec {
    double mu0 = 0.0;    // background mean
    double sigma0 = 0.0; // standard deviation, >= 0
    std::uint64_t seed = 0;
};

/// Circular ring on the frame grid: pixels with r_inner <= dist(center) <=
/// r_outer carry the boundary intensity, pixels with dist < r_inner carry
/// the interior intensity.
struct RingSpec {
    double cx = 0.0, cy = 0.0;
    double r_inner = 0.0, r_outer = 0.0;
};

/// One ground-truth loop: a stable id plus its per-frame geometry.
struct LoopTube {
    int id = 0;
    std::map<int, RingSpec> by_frame; // 1-based frame -> ring geometry
};

/// A synthetic time series: l frames of d1 x d2 pixels where middle frames
/// hold rings and, when `caps` is set, the first and last frames hold solid
/// disks over each loop's footprint so the rings close into a cavity through
/// time.
struct PatternSpec {
    std::string id = "custom";
    std::array<int, 3> dims{30, 30, 5}; // d1, d2, l
    double mu_ring = 10.0;
    double mu_in = 2.0;
    bool caps = true;
    double time_spacing = 8.0;
    std::vector<LoopTube> loops;
};

struct TruthTable {
    struct Presence {
        int loop_id = 0;
        int frame = 0;
    };
    std::vector<Presence> present;                 // one row per loop-time instance
    std::vector<std::array<int, 3>> continuity;    // (loop_id, frame, frame+1)
};

struct Generated {
    ImageStack raw;    // truth + iid noise
    ImageStack truth;  // piecewise-constant pattern
    TruthTable table;
};

/// The canonical parameterizations shipped with the repository:
///   A1 -- two thick loops, the second appears at t3 and disappears again
///   A2 -- a single loop with a thick (3 px) boundary
///   A3 -- two loops, one translating across the middle frames
///   A4 -- two loops with thin (1 px) boundaries
///   cylinder -- one static loop, the plain tube
/// All use 30x30x5 grids, ring intensity 10, interior 2 over background 0,
/// with solid caps at t1 and t5.
PatternSpec canonical_pattern(const std::string& id);

/// Names accepted by canonical_pattern.
std::vector<std::string> canonical_pattern_names();

/// Rasterizes the pattern, adds noise, and tabulates the ground truth.
/// Throws if any ring (or its cap) does not fit the grid.
Generated generate(const PatternSpec& spec, const NoiseSpec& noise);

} // namespace mvtda
