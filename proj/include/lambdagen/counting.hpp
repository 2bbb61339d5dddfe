#pragma once

#include "lambdagen/bigint.hpp"
#include "lambdagen/term.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace lambdagen {

/// Exact counts of m-open terms by size, for openness levels 0..N.
///
/// Rows follow the truncated openness system: row m counts terms whose
/// indices at binder depth d stay below m + d, except that an abstraction at
/// level N behaves per the fallback below. Under the unary index mode row N
/// is the plain (unrestricted-index) class, so row 0 over-approximates the
/// closed terms, with error vanishing as N grows; for sizes n where no chain
/// of n nested binders can reach level N the row-0 entry is the exact closed
/// count. Under the constant index mode the plain class is infinite per size,
/// so abstractions clamp at level N instead (row 0 then under-approximates
/// unless N is at least the maximal binder depth, in which case it is exact)
/// and `plain` stays empty.
struct CountTable {
    SizeModel model;
    std::size_t truncation = 0;  // N
    std::size_t max_size = 0;
    std::vector<std::vector<BigInt>> counts;  // [m][n], 0 <= m <= N, 0 <= n <= max_size
    std::vector<BigInt> plain;                // unary mode only; == counts[N]

    const BigInt& at(std::size_t m, std::size_t n) const;
    const BigInt& plain_at(std::size_t n) const;

    /// {"model": {...}, "N": n, "max_size": n, "counts": [["0","1",...],...]}
    /// with decimal-string entries; unary tables also carry "plain".
    std::string to_json() const;
};

CountTable build_count_table(const SizeModel& model, std::size_t N, std::size_t max_size);

// ---------------------------------------------------------------------------
// Catalan numbers: holonomic fast path and quadratic convolution oracle
// ---------------------------------------------------------------------------

/// c_n via (n+2) c_{n+1} = 2(2n+1) c_n, c_0 = 1; O(n) big-integer products.
/// When `big_mults` is given it receives the number of big-integer
/// multiplications and divisions performed.
BigInt catalan(std::size_t n, std::size_t* big_mults = nullptr);

/// c_n via c_{n+1} = sum c_i c_{n-i}; Theta(n^2) products. Oracle for
/// catalan().
BigInt catalan_convolution(std::size_t n, std::size_t* big_mults = nullptr);

/// c_0..c_max by each method, for bulk cross-checks.
std::vector<BigInt> catalan_series(std::size_t max_n, std::size_t* big_mults = nullptr);
std::vector<BigInt> catalan_convolution_series(std::size_t max_n, std::size_t* big_mults = nullptr);

/// Checks n*c_n == [z^n] z*C'(z) with the right side obtained by formally
/// differentiating the truncated series.
bool pointing_check(std::size_t n);

// ---------------------------------------------------------------------------
// Real-valued evaluation of the truncated system (unary index mode only)
// ---------------------------------------------------------------------------

/// Values of the openness-level generating functions at one control point.
struct GFValues {
    GfReal x;
    std::vector<GfReal> levels;  // v_m = value of level m, 0 <= m <= N
    GfReal plain;
    GfReal precision;  // relative tolerance the caller asked for
};

/// Relative tolerance used by the generating-function machinery; reads
/// LAMBDAGEN_PRECISION once (default 1e-12).
GfReal gf_precision();

/// Solves the truncated system bottom-up at x: the plain value is the
/// power-series branch of its quadratic, then levels N-1..0 follow, each from
/// the level above. Optional per-index weights multiply the contribution of
/// index k by weights[k] (indices past the vector keep weight 1).
///
/// Throws SingularityExceeded when a discriminant goes negative (x at or past
/// the dominant singularity) and std::invalid_argument for constant-mode
/// models, whose plain class has no generating function.
GFValues gf_eval(const SizeModel& model, std::size_t N, const GfReal& x,
                 const std::vector<GfReal>& index_weights = {});

/// Dominant singularity of the truncated system, located by bisection on
/// gf_eval success, to relative tolerance `tol` (default gf_precision()).
GfReal truncated_rho(const SizeModel& model, std::size_t N, const GfReal& tol = 0,
                     const std::vector<GfReal>& index_weights = {});

}  // namespace lambdagen
