#pragma once

#include "lambdagen/bigint.hpp"
#include "lambdagen/counting.hpp"
#include "lambdagen/rng.hpp"
#include "lambdagen/term.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace lambdagen {

/// Draws one term of size exactly n, uniformly over the table's level-m
/// class, by descending through branching probabilities proportional to the
/// exact counts. For sizes too small to reach the truncation level this is
/// the uniform distribution over all m-open terms of size n.
///
/// Throws EmptySizeClass when counts[m][n] = 0 and TruncationExceeded when
/// m exceeds the table's truncation.
Term gen_term(const CountTable& table, std::size_t m, std::size_t n, Rng& rng);

/// Convenience wrapper owning its generator state; one instance per task.
/// Multiple samplers may share one table.
class RecursiveSampler {
public:
    RecursiveSampler(std::shared_ptr<const CountTable> table, std::uint64_t seed)
        : table_(std::move(table)), rng_(seed) {}

    Term gen(std::size_t m, std::size_t n) { return gen_term(*table_, m, n, rng_); }
    const CountTable& table() const { return *table_; }
    Rng& rng() { return rng_; }

private:
    std::shared_ptr<const CountTable> table_;
    Rng rng_;
};

/// Exhaustive, duplicate-free enumeration of the m-open terms of each size,
/// memoized across queries; the uniformity and counting oracle for the
/// samplers. Enumerates the true m-open classes (no truncation).
class Enumerator {
public:
    explicit Enumerator(const SizeModel& model, std::size_t guard = 20);

    /// Borrowed view of the memoized class, in a deterministic order
    /// (indices, then abstractions, then applications by ascending left
    /// size). Throws SizeGuardExceeded when n exceeds the guard.
    const std::vector<Term>& terms(std::size_t m, std::size_t n);

    /// Cloned copies of terms(m, n).
    std::vector<Term> enumerate(std::size_t m, std::size_t n);

    const SizeModel& model() const { return model_; }

private:
    SizeModel model_;
    std::size_t guard_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<Term>> memo_;
};

/// One-shot enumeration; prefer an Enumerator instance for repeated queries.
std::vector<Term> enumerate_terms(const SizeModel& model, std::size_t m, std::size_t n,
                                  std::size_t guard = 20);

}  // namespace lambdagen
