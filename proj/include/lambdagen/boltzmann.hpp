#pragma once

#include "lambdagen/bigint.hpp"
#include "lambdagen/counting.hpp"
#include "lambdagen/rng.hpp"
#include "lambdagen/term.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace lambdagen {

/// Control point putting the mean Boltzmann size of plane binary trees
/// (counted by internal nodes) at exactly n: x = n(n+1)/(2n+1)^2. Throws
/// DegenerateTarget for n = 0.
GfReal calibrate_binary_tree(std::size_t n);

/// Mean size under the Boltzmann law of the level-`level` class at x
/// (level N = the plain class), computed as dlog v_level / dlog x by central
/// finite differences. Optional index weights as in gf_eval.
GfReal boltzmann_mean_size(const SizeModel& model, std::size_t N, const GfReal& x,
                           std::size_t level = 0, const std::vector<GfReal>& index_weights = {});

/// Control point putting the mean size of the truncated closed-term class at
/// n, to relative 1e-7, found by bisection below the dominant singularity.
/// Throws NoConvergence when the mean cannot reach n (tiny n) and propagates
/// SingularityExceeded.
GfReal calibrate_terms(std::size_t n, const SizeModel& model, std::size_t N);

/// calibrate_terms with per-index weights and a caller-chosen relative
/// tolerance on the achieved mean; the weight-tuning solver's inner loop.
GfReal calibrate_weighted(std::size_t n, const SizeModel& model, std::size_t N,
                          const std::vector<GfReal>& index_weights, const GfReal& rel_tol);

/// Branching probabilities of the truncated system at a fixed control point,
/// precomputed per openness level for the samplers' hot path. Immutable and
/// shareable.
struct BoltzmannOracle {
    struct Level {
        double p_index = 0;  // total probability of emitting an index
        double p_abs = 0;
        double p_app = 0;
        // Cumulative probabilities, conditioned on "index", of the explicitly
        // tabulated index values 0,1,2,...; at the plain level the remainder
        // past the table is a geometric tail.
        std::vector<double> index_cum;
    };

    SizeModel model;
    std::size_t truncation = 0;  // N
    GfReal x;
    GFValues gf;
    std::vector<GfReal> index_weights;
    std::vector<Level> levels;  // 0..N; level N is the plain fallback
    double geometric_ratio = 0;  // x^succ_weight, the plain index tail
    std::uint64_t tail_start = 0;  // first index value drawn from the tail
};

/// Builds the oracle at control point x (unary index mode only). Branch
/// probabilities at every level sum to 1 within numerical error.
BoltzmannOracle make_boltzmann_oracle(const SizeModel& model, std::size_t N, const GfReal& x,
                                      const std::vector<GfReal>& index_weights = {});

/// One Boltzmann draw from the level-`level` class, abandoned (nullopt) as
/// soon as the accumulated size exceeds `ceiling` (anticipated rejection).
std::optional<Term> sample_level(const BoltzmannOracle& oracle, std::size_t level,
                                 std::uint64_t ceiling, Rng& rng);

/// Draw from the plain class (the level-N fallback).
std::optional<Term> sample_plain(const BoltzmannOracle& oracle, std::uint64_t ceiling, Rng& rng);

/// Size window and retry policy for rejection sampling.
struct SamplerConfig {
    std::size_t target_size = 0;
    double tolerance = 0.1;            // accepted size in [(1-tol)n, (1+tol)n]
    std::size_t max_attempts = 1000000;

    std::uint64_t window_floor() const;
    std::uint64_t window_ceiling() const;
};

/// Attempt accounting across a rejection loop.
struct SampleStats {
    std::size_t attempts = 0;            // generation attempts in total
    std::size_t ceiling_aborts = 0;      // abandoned above the window ceiling
    std::size_t undershoots = 0;         // completed below the window floor
    std::size_t openness_rejections = 0;  // in-window but not closed
    std::uint64_t accepted_size = 0;
};

/// Closed term with size in the window: generates from level 0 and rejects
/// wholesale the (rare) outputs whose plain-fallback part left them open.
/// Conditioned on a size, accepted closed terms are uniform. Throws
/// AttemptsExhausted.
Term sample_closed(const BoltzmannOracle& oracle, const SamplerConfig& config, Rng& rng,
                   SampleStats* stats = nullptr);

}  // namespace lambdagen
