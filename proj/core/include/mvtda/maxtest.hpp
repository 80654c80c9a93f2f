#pragma once

#include "mvtda/image_stack.hpp"
#include "mvtda/persistence.hpp"
#include "mvtda/smoothing.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mvtda {

struct MaxTestConfig {
    int permutations = 1000;       // B
    int dim = 2;                   // homology dimension m under test
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::optional<SmootherConfig> smoother = SmootherConfig{};
    bool add_one_pvalue = false;   // (1 + count)/(1 + B) instead of count/B
    int threads = 1;
};

/// The most persistent dimension-m feature of a diagram.
struct MaxFeature {
    bool found = false;
    double rho = 0.0;    // persistence b - d; 0 when no feature exists
    double birth = 0.0;
    double death = 0.0;
};

struct MaxTestResult {
    MaxFeature observed;
    std::vector<double> null_samples;  // rho*_{q,max}, q = 1..B
    double p_value = 1.0;
    bool reject = false;
    std::optional<double> theta_hat;   // birth of the argmax feature, on rejection
    bool p_floor_warning = false;      // set when 1/B >= alpha
};

/// Maximum of birth - death over the dimension-m points. Essential classes
/// participate for m = 0 and are excluded for m >= 1 (they cannot occur in a
/// contractible ambient box). Ties break to the larger birth, then to the
/// earlier creating simplex in the filtration order, so the result is
/// deterministic.
MaxFeature max_persistence(const PersistenceDiagram& pd, int m);
MaxFeature max_persistence(const std::vector<PersistencePoint>& points, int m);

/// Assembles the test decision from the observed statistic and a null sample
/// vector. Split out so the decision rule is testable against reported
/// numbers without re-running permutations.
MaxTestResult finish_max_test(const MaxFeature& observed,
                              std::vector<double> null_samples, double alpha,
                              bool add_one_pvalue);

/// The Maximum Persistence Test on an UNsmoothed stack: the observed
/// statistic comes from smooth(raw); each null replicate permutes the raw
/// pixels over the whole grid, then smooths, then computes the maximum
/// persistent H_m feature. Replicate q draws its generator from
/// (cfg.seed, q), so results are independent of the thread schedule.
MaxTestResult run_max_test(const ImageStack& raw, const MaxTestConfig& cfg);

} // namespace mvtda
