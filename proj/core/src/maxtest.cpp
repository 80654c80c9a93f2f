#include "mvtda/maxtest.hpp"

#include "mvtda/rng.hpp"

#include <atomic>
#include <stdexcept>
#include <thread>

namespace mvtda {

MaxFeature max_persistence(const std::vector<PersistencePoint>& points, int m) {
    MaxFeature best;
    std::uint32_t best_pos = 0;
    for (const auto& p : points) {
        if (p.dim != m) continue;
        if (m >= 1 && p.essential) continue;
        const double rho = p.persistence();
        const bool better =
            !best.found || rho > best.rho ||
            (rho == best.rho && (p.birth > best.birth ||
                                 (p.birth == best.birth && p.birth_pos < best_pos)));
        if (better) {
            best = {true, rho, p.birth, p.death};
            best_pos = p.birth_pos;
        }
    }
    return best;
}

MaxFeature max_persistence(const PersistenceDiagram& pd, int m) {
    return max_persistence(pd.points, m);
}

MaxTestResult finish_max_test(const MaxFeature& observed,
                              std::vector<double> null_samples, double alpha,
                              bool add_one_pvalue) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("finish_max_test: alpha must be in (0, 1)");
    if (null_samples.empty())
        throw std::invalid_argument("finish_max_test: need at least one permutation");
    MaxTestResult r;
    r.observed = observed;
    const std::size_t B = null_samples.size();
    std::size_t ge = 0;
    for (double s : null_samples)
        if (s >= observed.rho) ++ge;
    r.null_samples = std::move(null_samples);
    r.p_value = add_one_pvalue
                    ? static_cast<double>(1 + ge) / static_cast<double>(1 + B)
                    : static_cast<double>(ge) / static_cast<double>(B);
    r.reject = r.p_value < alpha;
    if (r.reject && observed.found) r.theta_hat = observed.birth;
    r.p_floor_warning = 1.0 / static_cast<double>(B) >= alpha;
    return r;
}

namespace {

MaxFeature pipeline_max_feature(const ImageStack& stack, const Triangulation& tri,
                                const std::optional<SmootherConfig>& smoother, int m) {
    const FilteredComplex fc =
        smoother ? assign_filtration(tri, smooth_stack(stack, *smoother))
                 : assign_filtration(tri, stack);
    if (m == 0) return max_persistence(compute_persistence(fc, 0), 0);
    return max_persistence(pairs_in_dimension(fc, m), m);
}

} // namespace

MaxTestResult run_max_test(const ImageStack& raw, const MaxTestConfig& cfg) {
    if (cfg.permutations < 1)
        throw std::invalid_argument("run_max_test: permutations must be >= 1");
    if (raw.ndim() != 3)
        throw std::invalid_argument("run_max_test: expected a 3D stack");
    if (cfg.dim < 0 || cfg.dim > raw.ndim() - 1)
        throw std::invalid_argument("run_max_test: dim must be in [0, M-1]");

    const Triangulation tri(raw.dims());
    const MaxFeature observed = pipeline_max_feature(raw, tri, cfg.smoother, cfg.dim);

    std::vector<double> nulls(static_cast<std::size_t>(cfg.permutations));
    const int threads = std::max(1, cfg.threads);
    std::atomic<int> next{1};
    auto worker = [&]() {
        for (;;) {
            const int q = next.fetch_add(1);
            if (q > cfg.permutations) return;
            const ImageStack permuted =
                permute_stack(raw, derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(q)));
            nulls[static_cast<std::size_t>(q - 1)] =
                pipeline_max_feature(permuted, tri, cfg.smoother, cfg.dim).rho;
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return finish_max_test(observed, std::move(nulls), cfg.alpha, cfg.add_one_pvalue);
}

} // namespace mvtda
