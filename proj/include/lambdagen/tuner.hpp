#pragma once

#include "lambdagen/bigint.hpp"
#include "lambdagen/boltzmann.hpp"
#include "lambdagen/rng.hpp"
#include "lambdagen/term.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lambdagen {

/// Solved marking weights putting the expected size fraction of each marked
/// index at its target. targets[j] is the fraction of total term size
/// attributed to occurrences of index j; indices are marked contiguously from
/// 0. Immutable once solved.
struct TuningProfile {
    SizeModel model;
    std::size_t truncation = 0;  // N
    std::size_t target_size = 0;
    std::vector<double> targets;   // t_0..t_k
    std::vector<GfReal> weights;   // solved u_0..u_k
    GfReal x;                      // solved control point
    std::vector<double> achieved;  // size fractions at the solved point
    double expected_size = 0;      // mean size at the solved point

    /// {"n", "x", "targets", "weights", "achieved", "expected_size"}
    std::string to_json() const;
};

/// Expected number of occurrences of marked index j under the weighted
/// Boltzmann law of the level-0 class (= dlog v0 / dlog u_j).
GfReal expected_index_count(const SizeModel& model, std::size_t N, const GfReal& x,
                            const std::vector<GfReal>& index_weights, std::size_t j);

/// Solves for (u_0..u_k, x) by damped Newton on the moment-matching system
///   index_size(j) * E[count_j] / E[size] = targets[j],   E[size] = n.
/// An empty target vector reduces to plain mean-size calibration. Throws
/// Infeasible when the targets sum to >= 1 or the solver collapses against a
/// boundary, NoConvergence on numerical stagnation, and propagates
/// SingularityExceeded.
TuningProfile tune(const std::vector<double>& targets, std::size_t n, const SizeModel& model,
                   std::size_t N);

/// Closed term from the tuned law, size within [(1-tolerance)n, (1+tolerance)n].
/// Throws AttemptsExhausted.
Term sample_tuned(const TuningProfile& profile, double tolerance, Rng& rng,
                  std::size_t max_attempts = 1000000, SampleStats* stats = nullptr);

}  // namespace lambdagen
