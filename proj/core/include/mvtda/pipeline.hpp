#pragma once

#include "mvtda/image_stack.hpp"
#include "mvtda/maxtest.hpp"
#include "mvtda/partition.hpp"
#include "mvtda/simgen.hpp"
#include "mvtda/zigzag.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mvtda {

inline constexpr int kRunReportSchemaVersion = 1;

struct PipelineConfig {
    std::optional<SmootherConfig> smoother = SmootherConfig{};
    int permutations = 1000;
    int dim = 2;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    bool add_one_pvalue = false;
    SetOp set_op = SetOp::Union;
    std::string out_dir;
    bool emit_plots = true;
    int threads = 1;
};

struct RunReport {
    MaxTestResult test;
    ZigzagDiagram zigzag;
    bool reject = false;
    std::optional<double> theta;
    std::vector<std::string> outputs; // paths written, relative to out_dir
};

/// The four MV steps end to end: smooth, 3D filtration and diagram, Maximum
/// Persistence Test, then (on rejection) threshold slices, link them, and
/// compute the zigzag. Exports the 3D persistence diagram, the test result
/// with its null vector, slice masks, the zigzag CSV/SVG and a deterministic
/// JSON run report. Stage wall times go to a separate timings.json so the
/// rest of the outputs are byte-identical across reruns and thread counts.
RunReport run_mv(const ImageStack& raw, const PipelineConfig& cfg);

struct StudyConfig {
    std::vector<std::string> patterns{"A1", "A2", "A3", "A4"};
    int replicates = 20;
    std::uint64_t seed = 0;
    int threads = 1;
    double mu0 = 0.0;
    double sigma0 = 2.5;
    int permutations = 49;
    double alpha = 0.05;
    std::optional<SmootherConfig> smoother = SmootherConfig{};
    double pcvr_threshold = 5.0;  // midway between background and ring truth
    double pcvr_max_scale = 8.0;
    double pcvr_match_tol = 2.0;  // signature matching tolerance, intensity-free pixels
    std::string out_dir;
    bool emit_plots = true;
};

struct MethodScore {
    long detected = 0, instances = 0;
    long continuity = 0, pairs = 0;
    double rate() const {
        const long den = instances + pairs;
        return den == 0 ? 1.0 : static_cast<double>(detected + continuity) / den;
    }
};

struct StudyResult {
    MethodScore mv, pcvr;
    std::string table_csv;
    std::vector<std::string> outputs;
};

/// Runs MV and PCVR over noisy replicates of the named patterns and scores
/// both against the generator's truth table: a loop-time instance counts as
/// detected when the track assigned to that loop covers the frame, and a
/// truth continuity pair counts when one track covers both its frames.
StudyResult run_study(const StudyConfig& cfg);

/// Frame sets claimed by each method, used by the scorer and the study
/// chart. Tracks are frame intervals; loops are matched to tracks greedily
/// by overlap.
struct TrackFrames {
    std::vector<std::vector<int>> tracks; // each: sorted frames covered
};
TrackFrames mv_tracks_from_zigzag(const ZigzagDiagram& zz);
MethodScore score_tracks(const TrackFrames& tracks, const TruthTable& truth,
                         std::vector<int>* assignment = nullptr);

} // namespace mvtda
