#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "lambdagen/rng.hpp"

namespace lambdagen {

/// Exact counts; term counts outgrow 64 bits around size 40.
using BigInt = boost::multiprecision::cpp_int;

/// Real scalar for generating-function work. 50 decimal digits keep the
/// near-singularity evaluations (discriminants that cancel to ~1e-13 and
/// worse) far away from roundoff, at a cost that is irrelevant outside the
/// samplers' one-off set-up phase.
using GfReal = boost::multiprecision::cpp_bin_float_50;

/// Uniform integer in [0, bound), bound > 0.
inline BigInt random_below(Rng& rng, const BigInt& bound) {
    if (bound <= 1) return 0;
    const unsigned bits = boost::multiprecision::msb(bound) + 1;
    const unsigned words = (bits + 63) / 64;
    const unsigned top_shift = words * 64 - bits;
    BigInt draw;
    do {
        draw = 0;
        for (unsigned w = 0; w < words; ++w) {
            draw <<= 64;
            draw += rng.next_u64();
        }
        draw >>= top_shift;
    } while (draw >= bound);
    return draw;
}

}  // namespace lambdagen
