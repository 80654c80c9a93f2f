#include "mvtda/pipeline.hpp"

#include "mvtda/diagram_io.hpp"
#include "mvtda/pcvr.hpp"
#include "mvtda/rng.hpp"
#include "mvtda/stack_io.hpp"
#include "mvtda/svg.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace mvtda {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void write_out(const std::string& dir, const std::string& rel, const std::string& content,
               std::vector<std::string>& outputs) {
    write_text_file((fs::path(dir) / rel).string(), content);
    outputs.push_back(rel);
}

} // namespace

RunReport run_mv(const ImageStack& raw, const PipelineConfig& cfg) {
    if (raw.ndim() != 3) throw std::invalid_argument("run_mv: expected a 3D stack");
    if (cfg.out_dir.empty()) throw std::invalid_argument("run_mv: out_dir required");
    fs::create_directories(cfg.out_dir);

    RunReport report;
    ordered_json timings;
    auto t0 = Clock::now();

    // Steps 1-2: stack, smooth, diagram, Maximum Persistence Test
    const ImageStack smoothed = cfg.smoother ? smooth_stack(raw, *cfg.smoother) : raw;
    timings["smooth_seconds"] = seconds_since(t0);

    t0 = Clock::now();
    const Triangulation tri(raw.dims());
    const FilteredComplex fc = assign_filtration(tri, smoothed);
    const PersistenceDiagram pd = compute_persistence(fc, raw.ndim() - 1);
    timings["diagram_seconds"] = seconds_since(t0);

    t0 = Clock::now();
    MaxTestConfig tc;
    tc.permutations = cfg.permutations;
    tc.dim = cfg.dim;
    tc.alpha = cfg.alpha;
    tc.seed = cfg.seed;
    tc.smoother = cfg.smoother;
    tc.add_one_pvalue = cfg.add_one_pvalue;
    tc.threads = cfg.threads;
    report.test = run_max_test(raw, tc);
    report.reject = report.test.reject;
    report.theta = report.test.theta_hat;
    timings["maxtest_seconds"] = seconds_since(t0);

    write_out(cfg.out_dir, "diagram.json", diagram_to_json(pd), report.outputs);
    write_out(cfg.out_dir, "diagram.csv", diagram_to_csv(pd), report.outputs);
    write_out(cfg.out_dir, "maxtest.json",
              maxtest_result_to_json(report.test, cfg.dim, cfg.alpha, cfg.seed),
              report.outputs);
    if (cfg.emit_plots)
        write_out(cfg.out_dir, "diagram.svg", diagram_svg(pd), report.outputs);

    // Steps 3-4 only run on rejection; otherwise there is no feature
    t0 = Clock::now();
    report.zigzag.sequence_length = 2 * raw.num_frames() - 1;
    if (report.reject) {
        const double theta = *report.theta;
        const auto masks = threshold_slices(smoothed, theta);
        const SliceComplexSequence seq = build_slice_complexes(
            masks, {raw.dims()[0], raw.dims()[1]}, theta, cfg.set_op);
        report.zigzag = zigzag_persistence(seq, 1, raw.time_spacing());

        fs::create_directories(fs::path(cfg.out_dir) / "masks");
        for (std::size_t o = 0; o < masks.size(); ++o) {
            char name[48];
            std::snprintf(name, sizeof(name), "masks/mask_%03d.csv", static_cast<int>(o) + 1);
            write_mask_csv((fs::path(cfg.out_dir) / name).string(), masks[o], raw.dims()[0],
                           raw.dims()[1]);
            report.outputs.push_back(name);
        }
    }
    write_out(cfg.out_dir, "zigzag.csv", zigzag_to_csv(report.zigzag), report.outputs);
    if (cfg.emit_plots)
        write_out(cfg.out_dir, "zigzag.svg", zigzag_svg(report.zigzag), report.outputs);
    timings["zigzag_seconds"] = seconds_since(t0);

    ordered_json j;
    j["schema_version"] = kRunReportSchemaVersion;
    // thread count is omitted: it cannot affect any output by contract
    j["config"] = ordered_json{
        {"permutations", cfg.permutations},
        {"dim", cfg.dim},
        {"alpha", cfg.alpha},
        {"seed", cfg.seed},
        {"add_one_pvalue", cfg.add_one_pvalue},
        {"set_op", cfg.set_op == SetOp::Union ? "union" : "intersection"},
    };
    if (cfg.smoother)
        j["config"]["smoother"] =
            ordered_json{{"degree", cfg.smoother->degree}, {"span", cfg.smoother->span}};
    else
        j["config"]["smoother"] = nullptr;
    j["input"] = ordered_json{{"dims", raw.dims()},
                              {"time_spacing_seconds", raw.time_spacing()}};
    j["result"] = ordered_json{
        {"p_value", report.test.p_value},
        {"reject", report.reject},
        {"observed_persistence", report.test.observed.rho},
        {"zigzag_intervals", report.zigzag.intervals.size()},
    };
    if (report.theta)
        j["result"]["theta_hat"] = *report.theta;
    else
        j["result"]["theta_hat"] = nullptr;
    j["outputs"] = report.outputs;
    write_out(cfg.out_dir, "report.json", j.dump(2) + "\n", report.outputs);
    // wall times vary run to run; kept apart so everything above is
    // byte-reproducible
    write_text_file((fs::path(cfg.out_dir) / "timings.json").string(),
                    timings.dump(2) + "\n");
    return report;
}

TrackFrames mv_tracks_from_zigzag(const ZigzagDiagram& zz) {
    TrackFrames tf;
    for (const auto& iv : zz.intervals) {
        if (iv.dim != 1) continue;
        std::vector<int> frames;
        for (int p = iv.birth_index; p <= iv.death_index; ++p)
            if (p % 2) frames.push_back((p + 1) / 2);
        if (!frames.empty()) tf.tracks.push_back(std::move(frames));
    }
    return tf;
}

MethodScore score_tracks(const TrackFrames& tracks, const TruthTable& truth,
                         std::vector<int>* assignment) {
    // loop id -> its presence frames
    std::map<int, std::vector<int>> loops;
    for (const auto& p : truth.present) loops[p.loop_id].push_back(p.frame);

    // greedy one-to-one assignment by overlap size
    std::vector<int> assigned(loops.size(), -1);
    std::vector<char> used(tracks.tracks.size(), 0);
    struct Cand {
        std::size_t overlap;
        std::size_t loop_idx, track_idx;
    };
    std::vector<Cand> cands;
    std::size_t li = 0;
    std::vector<const std::vector<int>*> loop_frames;
    for (const auto& [id, frames] : loops) {
        loop_frames.push_back(&frames);
        for (std::size_t ti = 0; ti < tracks.tracks.size(); ++ti) {
            std::size_t ov = 0;
            for (int f : frames)
                if (std::binary_search(tracks.tracks[ti].begin(), tracks.tracks[ti].end(), f))
                    ++ov;
            if (ov) cands.push_back({ov, li, ti});
        }
        ++li;
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.loop_idx != b.loop_idx) return a.loop_idx < b.loop_idx;
        return a.track_idx < b.track_idx;
    });
    for (const auto& c : cands) {
        if (assigned[c.loop_idx] >= 0 || used[c.track_idx]) continue;
        assigned[c.loop_idx] = static_cast<int>(c.track_idx);
        used[c.track_idx] = 1;
    }
    if (assignment) *assignment = assigned;

    MethodScore score;
    li = 0;
    for (const auto& [id, frames] : loops) {
        const int ti = assigned[li];
        for (int f : frames) {
            ++score.instances;
            if (ti >= 0 && std::binary_search(tracks.tracks[static_cast<std::size_t>(ti)].begin(),
                                              tracks.tracks[static_cast<std::size_t>(ti)].end(),
                                              f))
                ++score.detected;
        }
        ++li;
    }
    for (const auto& [id, a, b] : truth.continuity) {
        ++score.pairs;
        // find the loop's assignment
        std::size_t idx = 0;
        for (const auto& [lid, frames] : loops) {
            if (lid == id) break;
            ++idx;
        }
        const int ti = assigned[idx];
        if (ti < 0) continue;
        const auto& tf = tracks.tracks[static_cast<std::size_t>(ti)];
        if (std::binary_search(tf.begin(), tf.end(), a) &&
            std::binary_search(tf.begin(), tf.end(), b))
            ++score.continuity;
    }
    return score;
}

namespace {

struct PcvrOutcome {
    // per loop id: frames where a signature-matched feature exists, and the
    // rank it occupied there
    std::map<int, std::map<int, std::size_t>> matched_rank;
};

// Rips signature (birth, death) of one noiseless ring binarized at the PCVR
// threshold: the most persistent H1 feature of its annulus pixel cloud.
std::pair<double, double> ring_signature(const RingSpec& r, const StudyConfig& cfg) {
    PointCloud cloud;
    const int x0 = static_cast<int>(std::floor(r.cx - r.r_outer));
    const int x1 = static_cast<int>(std::ceil(r.cx + r.r_outer));
    const int y0 = static_cast<int>(std::floor(r.cy - r.r_outer));
    const int y1 = static_cast<int>(std::ceil(r.cy + r.r_outer));
    for (int x = x0; x <= x1; ++x)
        for (int y = y0; y <= y1; ++y) {
            const double d = std::hypot(x - r.cx, y - r.cy);
            if (d >= r.r_inner && d <= r.r_outer)
                cloud.points.push_back({static_cast<double>(x), static_cast<double>(y)});
        }
    const auto ranked = ranked_h1(rips_persistence(cloud, cfg.pcvr_max_scale), 0);
    if (ranked.empty()) return {0.0, 0.0};
    return {ranked[0].birth, ranked[0].death};
}

// Per frame, greedily match present loops to observed H1 features by
// closeness to the loop's noiseless signature, one feature per loop.
PcvrOutcome score_pcvr(const PatternSpec& spec, const StudyConfig& cfg,
                       const std::vector<PersistenceDiagram>& per_frame) {
    PcvrOutcome out;
    std::map<int, std::map<int, std::pair<double, double>>> signatures; // loop -> frame -> sig
    for (const LoopTube& loop : spec.loops)
        for (const auto& [frame, ring] : loop.by_frame)
            signatures[loop.id][frame] = ring_signature(ring, cfg);

    for (int f = 1; f <= spec.dims[2]; ++f) {
        const auto ranked = ranked_h1(per_frame[static_cast<std::size_t>(f - 1)], f);
        struct Cand {
            double cost;
            int loop_id;
            std::size_t rank;
        };
        std::vector<Cand> cands;
        for (const auto& [loop_id, by_frame] : signatures) {
            auto it = by_frame.find(f);
            if (it == by_frame.end()) continue;
            for (std::size_t k = 0; k < ranked.size(); ++k) {
                const double cost = std::max(std::fabs(ranked[k].birth - it->second.first),
                                             std::fabs(ranked[k].death - it->second.second));
                if (cost <= cfg.pcvr_match_tol) cands.push_back({cost, loop_id, k});
            }
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.cost != b.cost) return a.cost < b.cost;
            if (a.loop_id != b.loop_id) return a.loop_id < b.loop_id;
            return a.rank < b.rank;
        });
        std::set<int> used_loops;
        std::set<std::size_t> used_ranks;
        for (const auto& c : cands) {
            if (used_loops.count(c.loop_id) || used_ranks.count(c.rank)) continue;
            used_loops.insert(c.loop_id);
            used_ranks.insert(c.rank);
            out.matched_rank[c.loop_id][f] = c.rank;
        }
    }
    return out;
}

MethodScore score_pcvr_against_truth(const PcvrOutcome& out, const TruthTable& truth) {
    MethodScore score;
    for (const auto& p : truth.present) {
        ++score.instances;
        auto it = out.matched_rank.find(p.loop_id);
        if (it != out.matched_rank.end() && it->second.count(p.frame)) ++score.detected;
    }
    for (const auto& [id, a, b] : truth.continuity) {
        ++score.pairs;
        auto it = out.matched_rank.find(id);
        if (it == out.matched_rank.end()) continue;
        auto fa = it->second.find(a), fb = it->second.find(b);
        // the rank matcher links rank k at one frame to rank k at the next,
        // so the loop stays connected exactly when its feature keeps its rank
        if (fa != it->second.end() && fb != it->second.end() && fa->second == fb->second)
            ++score.continuity;
    }
    return score;
}

struct ReplicateOutcome {
    TrackFrames mv;
    PcvrOutcome pcvr;
    TruthTable truth;
    int frames = 0;
};

ReplicateOutcome run_replicate(const std::string& pattern, const StudyConfig& cfg,
                               std::uint64_t noise_seed, std::uint64_t test_seed) {
    PatternSpec spec = canonical_pattern(pattern);
    NoiseSpec noise{cfg.mu0, cfg.sigma0, noise_seed};
    Generated gen = generate(spec, noise);

    ReplicateOutcome out;
    out.truth = gen.table;
    out.frames = spec.dims[2];

    // MV
    MaxTestConfig tc;
    tc.permutations = cfg.permutations;
    tc.dim = 2;
    tc.alpha = cfg.alpha;
    tc.seed = test_seed;
    tc.smoother = cfg.smoother;
    tc.threads = cfg.threads;
    const MaxTestResult mt = run_max_test(gen.raw, tc);
    if (mt.reject) {
        const ImageStack smoothed =
            cfg.smoother ? smooth_stack(gen.raw, *cfg.smoother) : gen.raw;
        const auto masks = threshold_slices(smoothed, *mt.theta_hat);
        const SliceComplexSequence seq = build_slice_complexes(
            masks, {spec.dims[0], spec.dims[1]}, *mt.theta_hat, SetOp::Union);
        out.mv = mv_tracks_from_zigzag(
            zigzag_persistence(seq, 1, gen.raw.time_spacing()));
    }

    // PCVR on the raw frames with the predetermined threshold
    std::vector<PersistenceDiagram> per_frame;
    per_frame.reserve(static_cast<std::size_t>(spec.dims[2]));
    for (int o = 1; o <= spec.dims[2]; ++o)
        per_frame.push_back(rips_persistence(
            binarize(slice_at_time(gen.raw, o), cfg.pcvr_threshold, o), cfg.pcvr_max_scale));
    out.pcvr = score_pcvr(spec, cfg, per_frame);
    return out;
}

} // namespace

StudyResult run_study(const StudyConfig& cfg) {
    if (cfg.replicates < 0) throw std::invalid_argument("run_study: replicates must be >= 0");
    StudyResult result;
    std::string csv = "pattern,replicate,method,detected,instances,continuity,pairs,rate\n";
    std::vector<StudyChartRow> chart_rows;
    int chart_frames = 0;

    std::uint64_t rep_counter = 0;
    for (const std::string& pattern : cfg.patterns) {
        for (int r = 1; r <= cfg.replicates; ++r) {
            const std::uint64_t noise_seed = derive_stream_seed(cfg.seed, 2 * rep_counter);
            const std::uint64_t test_seed = derive_stream_seed(cfg.seed, 2 * rep_counter + 1);
            ++rep_counter;
            const ReplicateOutcome out = run_replicate(pattern, cfg, noise_seed, test_seed);

            std::vector<int> mv_assign;
            const MethodScore mv = score_tracks(out.mv, out.truth, &mv_assign);
            const MethodScore pc = score_pcvr_against_truth(out.pcvr, out.truth);
            result.mv.detected += mv.detected;
            result.mv.instances += mv.instances;
            result.mv.continuity += mv.continuity;
            result.mv.pairs += mv.pairs;
            result.pcvr.detected += pc.detected;
            result.pcvr.instances += pc.instances;
            result.pcvr.continuity += pc.continuity;
            result.pcvr.pairs += pc.pairs;

            for (const auto* s : {&mv, &pc}) {
                csv += pattern + "," + std::to_string(r) + "," +
                       (s == &mv ? "MV" : "PCVR") + "," + std::to_string(s->detected) + "," +
                       std::to_string(s->instances) + "," + std::to_string(s->continuity) +
                       "," + std::to_string(s->pairs) + "," + format_double(s->rate()) + "\n";
            }

            if (r == 1) {
                // chart the first replicate of each pattern
                std::map<int, std::vector<int>> loops;
                for (const auto& p : out.truth.present) loops[p.loop_id].push_back(p.frame);
                std::size_t li = 0;
                for (const auto& [id, frames] : loops) {
                    StudyChartRow row;
                    row.label = pattern + " loop " + std::to_string(id);
                    row.truth_frames = frames;
                    for (const auto& [lid, a, b] : out.truth.continuity)
                        if (lid == id) row.truth_links.push_back({a, b});
                    if (li < mv_assign.size() && mv_assign[li] >= 0) {
                        const auto& tfr =
                            out.mv.tracks[static_cast<std::size_t>(mv_assign[li])];
                        for (int f : frames)
                            if (std::binary_search(tfr.begin(), tfr.end(), f))
                                row.mv_frames.push_back(f);
                        for (std::size_t i = 0; i + 1 < row.mv_frames.size(); ++i)
                            if (row.mv_frames[i + 1] == row.mv_frames[i] + 1)
                                row.mv_links.push_back(
                                    {row.mv_frames[i], row.mv_frames[i + 1]});
                    }
                    if (auto it = out.pcvr.matched_rank.find(id);
                        it != out.pcvr.matched_rank.end()) {
                        for (const auto& [f, rank] : it->second) row.pcvr_frames.push_back(f);
                        for (const auto& [lid, a, b] : out.truth.continuity) {
                            if (lid != id) continue;
                            auto fa = it->second.find(a), fb = it->second.find(b);
                            if (fa != it->second.end() && fb != it->second.end() &&
                                fa->second == fb->second)
                                row.pcvr_links.push_back({a, b});
                        }
                    }
                    chart_rows.push_back(std::move(row));
                    ++li;
                }
                chart_frames = std::max(chart_frames, out.frames);
            }
        }
    }
    result.table_csv = csv;

    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_out(cfg.out_dir, "study.csv", csv, result.outputs);
        ordered_json j;
        j["schema_version"] = kRunReportSchemaVersion;
        j["patterns"] = cfg.patterns;
        j["replicates"] = cfg.replicates;
        j["seed"] = cfg.seed;
        j["mv"] = ordered_json{{"detected", result.mv.detected},
                               {"instances", result.mv.instances},
                               {"continuity", result.mv.continuity},
                               {"pairs", result.mv.pairs},
                               {"rate", result.mv.rate()}};
        j["pcvr"] = ordered_json{{"detected", result.pcvr.detected},
                                 {"instances", result.pcvr.instances},
                                 {"continuity", result.pcvr.continuity},
                                 {"pairs", result.pcvr.pairs},
                                 {"rate", result.pcvr.rate()}};
        write_out(cfg.out_dir, "study.json", j.dump(2) + "\n", result.outputs);
        if (cfg.emit_plots && !chart_rows.empty())
            write_out(cfg.out_dir, "study.svg", study_chart_svg(chart_rows, chart_frames),
                      result.outputs);
    }
    return result;
}

} // namespace mvtda
