#pragma once

#include "mvtda/image_stack.hpp"
#include "mvtda/persistence.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace mvtda {

/// Pixel centers of a binarized frame, in (x, y) grid coordinates.
struct PointCloud {
    std::vector<std::array<double, 2>> points;
    int source_frame = 0;
};

/// Centers of the pixels with intensity >= threshold. May be empty.
PointCloud binarize(const ImageStack& frame, double threshold, int source_frame = 0);

/// H0/H1 persistence of the Vietoris-Rips filtration on pairwise Euclidean
/// distances, truncated at max_scale. Points use the ascending-scale
/// convention (birth <= death); the one essential H0 class is reported with
/// death = max_scale and the essential flag set.
///
/// Clouds larger than `cap` points are rejected with advice to downsample.
PersistenceDiagram rips_persistence(const PointCloud& cloud, double max_scale,
                                    std::size_t cap = 2000);

/// One tracked feature: per-frame H1 observations joined rank-to-rank across
/// consecutive frames.
struct FeatureTrack {
    struct Obs {
        int frame = 0;
        double birth = 0.0, death = 0.0;
        double persistence() const { return death - birth; }
    };
    int track_id = 0;
    std::vector<Obs> observations;
    int first_frame() const { return observations.front().frame; }
    int last_frame() const { return observations.back().frame; }
};

/// The frame's H1 features sorted by persistence descending (deterministic
/// tie-breaks); the position in this list is the feature's rank, which is
/// what the matcher links across frames.
std::vector<FeatureTrack::Obs> ranked_h1(const PersistenceDiagram& pd, int frame);

/// Rank matching: at each consecutive frame pair, H1 features sorted by
/// persistence descending are matched rank to rank; a rank missing from the
/// next frame terminates its track and a new rank starts one. No spatial
/// information is used, which is exactly the documented failure mode when
/// persistence orders cross between frames.
std::vector<FeatureTrack> match_by_persistence(const std::vector<PersistenceDiagram>& per_frame);

/// track_id,frame,birth,death,persistence rows, header included.
std::string tracks_to_csv(const std::vector<FeatureTrack>& tracks);

} // namespace mvtda
