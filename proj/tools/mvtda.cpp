// mvtda: detect and track topological features in time series of grayscale
// images. Subcommands cover the full pipeline (run), its stages (test,
// zigzag), the synthetic data generator (simulate), the simulation study
// (study), and the point-cloud baseline (pcvr).

#include "mvtda/diagram_io.hpp"
#include "mvtda/pcvr.hpp"
#include "mvtda/pipeline.hpp"
#include "mvtda/simgen.hpp"
#include "mvtda/stack_io.hpp"
#include "mvtda/svg.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::uint64_t seed_fallback() {
    if (const char* env = std::getenv("MVTDA_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw std::invalid_argument("MVTDA_SEED is not a valid integer: " +
                                        std::string(env));
        }
    }
    return 0;
}

struct SmoothFlags {
    int degree = 2;
    double span = 0.1;
    bool no_smooth = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--smooth-degree", degree, "local polynomial degree (0, 1 or 2)");
        cmd->add_option("--smooth-span", span, "fraction of nearest pixels per fit, in (0, 1]");
        cmd->add_flag("--no-smooth", no_smooth, "skip smoothing entirely");
    }
    std::optional<mvtda::SmootherConfig> config() const {
        if (no_smooth) return std::nullopt;
        return mvtda::SmootherConfig{degree, span};
    }
};

void write_simulation(const std::string& out_dir, const mvtda::PatternSpec& spec,
                      const mvtda::NoiseSpec& noise, const mvtda::Generated& gen) {
    fs::create_directories(out_dir);
    mvtda::write_stack_manifest(out_dir, gen.raw);

    fs::create_directories(fs::path(out_dir) / "truth");
    fs::create_directories(fs::path(out_dir) / "masks");
    for (int o = 1; o <= gen.truth.num_frames(); ++o) {
        char name[48];
        std::snprintf(name, sizeof(name), "truth/frame_%03d.csv", o);
        mvtda::write_frame_csv((fs::path(out_dir) / name).string(),
                               mvtda::slice_at_time(gen.truth, o));
        const mvtda::ImageStack frame = mvtda::slice_at_time(gen.truth, o);
        std::vector<char> mask(frame.size());
        for (std::size_t i = 0; i < mask.size(); ++i)
            mask[i] = frame.values()[i] >= spec.mu_ring;
        std::snprintf(name, sizeof(name), "masks/mask_%03d.csv", o);
        mvtda::write_mask_csv((fs::path(out_dir) / name).string(), mask, spec.dims[0],
                              spec.dims[1]);
    }

    ordered_json truth;
    truth["pattern"] = spec.id;
    truth["dims"] = spec.dims;
    truth["mu_ring"] = spec.mu_ring;
    truth["mu_in"] = spec.mu_in;
    truth["mu0"] = noise.mu0;
    truth["sigma0"] = noise.sigma0;
    truth["seed"] = noise.seed;
    truth["time_spacing_seconds"] = spec.time_spacing;
    ordered_json present = ordered_json::array();
    for (const auto& p : gen.table.present)
        present.push_back(ordered_json{{"loop_id", p.loop_id}, {"frame", p.frame}});
    truth["present"] = present;
    ordered_json cont = ordered_json::array();
    for (const auto& [id, a, b] : gen.table.continuity)
        cont.push_back(ordered_json{{"loop_id", id}, {"from", a}, {"to", b}});
    truth["continuity"] = cont;
    mvtda::write_text_file((fs::path(out_dir) / "truth.json").string(), truth.dump(2) + "\n");
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Maximum Void feature detection and tracking for image time series"};
    app.require_subcommand(1);

    // ---- test ----
    auto* test = app.add_subcommand("test", "run the Maximum Persistence Test");
    std::string test_input, test_out = "maxtest.json";
    int test_dim = 2, test_B = 1000, test_threads = 1;
    double test_alpha = 0.05;
    std::uint64_t test_seed = 0;
    bool test_seed_set = false, test_add_one = false;
    SmoothFlags test_smooth;
    test->add_option("--input", test_input, "stack manifest or self-describing file")
        ->required();
    test->add_option("--dim", test_dim, "homology dimension m under test");
    test->add_option("--permutations", test_B, "number of permutations B");
    test->add_option("--alpha", test_alpha, "significance level");
    test->add_option("--seed", test_seed, "master seed")->each([&](const std::string&) {
        test_seed_set = true;
    });
    test->add_option("--threads", test_threads, "permutation worker threads");
    test->add_flag("--pvalue-add-one", test_add_one, "use (1+count)/(1+B) instead of count/B");
    test->add_option("--out", test_out, "output JSON path");
    test_smooth.attach(test);

    // ---- run ----
    auto* run = app.add_subcommand("run", "run the full MV pipeline");
    std::string run_input, run_out;
    int run_dim = 2, run_B = 1000, run_threads = 1;
    double run_alpha = 0.05;
    std::uint64_t run_seed = 0;
    bool run_seed_set = false, run_add_one = false, run_no_plots = false;
    std::string run_setop = "union";
    SmoothFlags run_smooth;
    run->add_option("--input", run_input, "stack manifest or self-describing file")
        ->required();
    run->add_option("--out", run_out, "output directory")->required();
    run->add_option("--dim", run_dim, "homology dimension for the test");
    run->add_option("--permutations", run_B, "number of permutations B");
    run->add_option("--alpha", run_alpha, "significance level");
    run->add_option("--seed", run_seed, "master seed")->each([&](const std::string&) {
        run_seed_set = true;
    });
    run->add_option("--threads", run_threads, "permutation worker threads");
    run->add_flag("--pvalue-add-one", run_add_one, "use (1+count)/(1+B) instead of count/B");
    run->add_option("--set-op", run_setop, "union or intersection links")
        ->check(CLI::IsMember({"union", "intersection"}));
    run->add_flag("--no-plots", run_no_plots, "skip SVG outputs");
    run_smooth.attach(run);

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "generate a ground-truthed synthetic stack");
    std::string sim_pattern = "A1", sim_out;
    double sim_sigma = 2.5, sim_mu0 = 0.0, sim_spacing = 8.0;
    std::uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    sim->add_option("--pattern", sim_pattern, "A1, A2, A3, A4 or cylinder");
    sim->add_option("--seed", sim_seed, "noise seed")->each([&](const std::string&) {
        sim_seed_set = true;
    });
    sim->add_option("--sigma", sim_sigma, "noise standard deviation");
    sim->add_option("--mu0", sim_mu0, "background mean");
    sim->add_option("--time-spacing", sim_spacing, "seconds between frames");
    sim->add_option("--out", sim_out, "output directory")->required();

    // ---- study ----
    auto* study = app.add_subcommand("study", "run the MV vs PCVR simulation study");
    std::string study_patterns = "A1,A2,A3,A4", study_out;
    int study_reps = 20, study_B = 49, study_threads = 1;
    double study_alpha = 0.05, study_sigma = 2.5;
    double study_pcvr_threshold = 5.0, study_pcvr_scale = 8.0, study_pcvr_tol = 2.0;
    std::uint64_t study_seed = 0;
    bool study_seed_set = false, study_no_plots = false;
    SmoothFlags study_smooth;
    study->add_option("--patterns", study_patterns, "comma-separated pattern list");
    study->add_option("--replicates", study_reps, "noisy replicates per pattern");
    study->add_option("--seed", study_seed, "master seed")->each([&](const std::string&) {
        study_seed_set = true;
    });
    study->add_option("--sigma", study_sigma, "noise standard deviation");
    study->add_option("--permutations", study_B, "permutations per Maximum Persistence Test");
    study->add_option("--alpha", study_alpha, "significance level");
    study->add_option("--threads", study_threads, "permutation worker threads");
    study->add_option("--pcvr-threshold", study_pcvr_threshold, "PCVR binarization threshold");
    study->add_option("--pcvr-max-scale", study_pcvr_scale, "PCVR Rips distance cap");
    study->add_option("--pcvr-match-tol", study_pcvr_tol,
                      "tolerance for matching PCVR features to truth signatures");
    study->add_option("--out", study_out, "output directory")->required();
    study->add_flag("--no-plots", study_no_plots, "skip SVG outputs");
    study_smooth.attach(study);

    // ---- pcvr ----
    auto* pcvr = app.add_subcommand("pcvr", "run the point-cloud Vietoris-Rips baseline");
    std::string pcvr_input, pcvr_out = "tracks.csv";
    double pcvr_threshold = 5.0, pcvr_scale = 8.0;
    pcvr->add_option("--input", pcvr_input, "stack manifest or self-describing file")
        ->required();
    pcvr->add_option("--threshold", pcvr_threshold, "binarization threshold")->required();
    pcvr->add_option("--max-scale", pcvr_scale, "Rips distance cap");
    pcvr->add_option("--out", pcvr_out, "tracked feature table CSV path");

    // ---- zigzag ----
    auto* zz = app.add_subcommand("zigzag", "re-run Step 4 from saved slice masks");
    std::string zz_masks, zz_out, zz_setop = "union";
    double zz_theta = 0.0, zz_spacing = 0.0;
    zz->add_option("--masks", zz_masks, "directory of per-frame 0/1 mask CSVs")->required();
    zz->add_option("--theta", zz_theta, "threshold the masks were cut at")->required();
    zz->add_option("--spacing", zz_spacing, "seconds between frames");
    zz->add_option("--set-op", zz_setop, "union or intersection links")
        ->check(CLI::IsMember({"union", "intersection"}));
    zz->add_option("--out", zz_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (test->parsed()) {
        if (!test_seed_set) test_seed = seed_fallback();
        mvtda::MaxTestConfig cfg;
        cfg.permutations = test_B;
        cfg.dim = test_dim;
        cfg.alpha = test_alpha;
        cfg.seed = test_seed;
        cfg.smoother = test_smooth.config();
        cfg.add_one_pvalue = test_add_one;
        cfg.threads = test_threads;
        const mvtda::ImageStack raw = mvtda::load_stack(test_input);
        const mvtda::MaxTestResult r = mvtda::run_max_test(raw, cfg);
        if (r.p_floor_warning)
            std::cerr << "warning: 1/B >= alpha; the add-one p-value can never reject at this "
                         "significance level\n";
        mvtda::write_text_file(
            test_out, mvtda::maxtest_result_to_json(r, test_dim, test_alpha, test_seed));
        std::cout << "p-value " << r.p_value << (r.reject ? " (reject)" : " (no rejection)")
                  << ", wrote " << test_out << "\n";
        return 0;
    }

    if (run->parsed()) {
        if (!run_seed_set) run_seed = seed_fallback();
        mvtda::PipelineConfig cfg;
        cfg.smoother = run_smooth.config();
        cfg.permutations = run_B;
        cfg.dim = run_dim;
        cfg.alpha = run_alpha;
        cfg.seed = run_seed;
        cfg.add_one_pvalue = run_add_one;
        cfg.set_op = run_setop == "union" ? mvtda::SetOp::Union : mvtda::SetOp::Intersection;
        cfg.out_dir = run_out;
        cfg.emit_plots = !run_no_plots;
        cfg.threads = run_threads;
        const mvtda::ImageStack raw = mvtda::load_stack(run_input);
        const mvtda::RunReport report = mvtda::run_mv(raw, cfg);
        if (report.test.p_floor_warning)
            std::cerr << "warning: 1/B >= alpha; the add-one p-value can never reject at this "
                         "significance level\n";
        std::cout << (report.reject ? "rejected the null" : "failed to reject the null")
                  << " (p-value " << report.test.p_value << "); outputs in " << run_out << "\n";
        return 0;
    }

    if (sim->parsed()) {
        if (!sim_seed_set) sim_seed = seed_fallback();
        mvtda::PatternSpec spec = mvtda::canonical_pattern(sim_pattern);
        spec.time_spacing = sim_spacing;
        mvtda::NoiseSpec noise{sim_mu0, sim_sigma, sim_seed};
        const mvtda::Generated gen = mvtda::generate(spec, noise);
        write_simulation(sim_out, spec, noise, gen);
        std::cout << "wrote " << sim_pattern << " stack, truth and masks to " << sim_out
                  << "\n";
        return 0;
    }

    if (study->parsed()) {
        if (!study_seed_set) study_seed = seed_fallback();
        mvtda::StudyConfig cfg;
        cfg.patterns.clear();
        std::stringstream ss(study_patterns);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) cfg.patterns.push_back(tok);
        cfg.replicates = study_reps;
        cfg.seed = study_seed;
        cfg.threads = study_threads;
        cfg.sigma0 = study_sigma;
        cfg.permutations = study_B;
        cfg.alpha = study_alpha;
        cfg.smoother = study_smooth.config();
        cfg.pcvr_threshold = study_pcvr_threshold;
        cfg.pcvr_max_scale = study_pcvr_scale;
        cfg.pcvr_match_tol = study_pcvr_tol;
        cfg.out_dir = study_out;
        cfg.emit_plots = !study_no_plots;
        const mvtda::StudyResult res = mvtda::run_study(cfg);
        std::cout << "MV rate " << res.mv.rate() << ", PCVR rate " << res.pcvr.rate()
                  << "; outputs in " << study_out << "\n";
        return 0;
    }

    if (pcvr->parsed()) {
        const mvtda::ImageStack raw = mvtda::load_stack(pcvr_input);
        std::vector<mvtda::PersistenceDiagram> per_frame;
        for (int o = 1; o <= raw.num_frames(); ++o)
            per_frame.push_back(mvtda::rips_persistence(
                mvtda::binarize(mvtda::slice_at_time(raw, o), pcvr_threshold, o), pcvr_scale));
        const auto tracks = mvtda::match_by_persistence(per_frame);
        mvtda::write_text_file(pcvr_out, mvtda::tracks_to_csv(tracks));
        std::cout << "wrote " << tracks.size() << " tracks to " << pcvr_out << "\n";
        return 0;
    }

    if (zz->parsed()) {
        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(zz_masks))
            if (e.is_regular_file() && e.path().extension() == ".csv")
                files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
        if (files.empty())
            throw std::invalid_argument("zigzag: no mask CSVs in " + zz_masks);
        std::vector<std::vector<char>> masks;
        int rows = 0, cols = 0;
        for (const auto& f : files) {
            int r = 0, c = 0;
            masks.push_back(mvtda::load_mask_csv(f, r, c));
            if (rows == 0) {
                rows = r;
                cols = c;
            } else if (r != rows || c != cols) {
                throw std::invalid_argument("zigzag: mask " + f + " has mismatched shape");
            }
        }
        const mvtda::SetOp op =
            zz_setop == "union" ? mvtda::SetOp::Union : mvtda::SetOp::Intersection;
        const mvtda::SliceComplexSequence seq =
            mvtda::build_slice_complexes(masks, {rows, cols}, zz_theta, op);
        const mvtda::ZigzagDiagram diagram = mvtda::zigzag_persistence(seq, 1, zz_spacing);
        fs::create_directories(zz_out);
        mvtda::write_text_file((fs::path(zz_out) / "zigzag.csv").string(),
                               mvtda::zigzag_to_csv(diagram));
        mvtda::write_text_file((fs::path(zz_out) / "zigzag.svg").string(),
                               mvtda::zigzag_svg(diagram));
        std::cout << "wrote " << diagram.intervals.size() << " intervals to " << zz_out
                  << "\n";
        return 0;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
