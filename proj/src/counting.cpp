#include "lambdagen/counting.hpp"

#include "lambdagen/errors.hpp"

#include "json.hpp"

#include <cstdlib>
#include <stdexcept>
#include <utility>

namespace lambdagen {

const BigInt& CountTable::at(std::size_t m, std::size_t n) const {
    if (m >= counts.size())
        throw TruncationExceeded("openness level " + std::to_string(m) +
                                 " beyond table truncation " + std::to_string(truncation));
    if (n >= counts[m].size())
        throw std::out_of_range("size " + std::to_string(n) + " beyond table max_size " +
                                std::to_string(max_size));
    return counts[m][n];
}

const BigInt& CountTable::plain_at(std::size_t n) const {
    if (plain.empty())
        throw std::logic_error("plain counts are not defined under the constant index mode");
    if (n >= plain.size())
        throw std::out_of_range("size " + std::to_string(n) + " beyond table max_size " +
                                std::to_string(max_size));
    return plain[n];
}

namespace {

nlohmann::json model_to_json(const SizeModel& m) {
    nlohmann::json j;
    j["abs_weight"] = m.abs_weight;
    j["app_weight"] = m.app_weight;
    if (m.index_mode == IndexSizeMode::Unary) {
        j["index_mode"] = "unary";
        j["zero_weight"] = m.zero_weight;
        j["succ_weight"] = m.succ_weight;
    } else {
        j["index_mode"] = "constant";
        j["var_weight"] = m.var_weight;
    }
    return j;
}

}  // namespace

std::string CountTable::to_json() const {
    nlohmann::json j;
    j["model"] = model_to_json(model);
    j["N"] = truncation;
    j["max_size"] = max_size;
    auto rows = nlohmann::json::array();
    for (const auto& row : counts) {
        auto r = nlohmann::json::array();
        for (const auto& c : row) r.push_back(c.str());
        rows.push_back(std::move(r));
    }
    j["counts"] = std::move(rows);
    if (!plain.empty()) {
        auto p = nlohmann::json::array();
        for (const auto& c : plain) p.push_back(c.str());
        j["plain"] = std::move(p);
    }
    return j.dump();
}

CountTable build_count_table(const SizeModel& model, std::size_t N, std::size_t max_size) {
    model.validate();
    CountTable t;
    t.model = model;
    t.truncation = N;
    t.max_size = max_size;

    const std::size_t a = model.abs_weight;
    const std::size_t b = model.app_weight;
    const bool unary = model.index_mode == IndexSizeMode::Unary;
    const std::size_t z0 = model.zero_weight;
    const std::size_t s = model.succ_weight;

    // Number of indices of size n visible at openness level m (m itself when
    // the level is unbounded).
    auto index_count = [&](std::size_t level, bool unbounded, std::size_t n) -> BigInt {
        if (unary) {
            if (n < z0 || (n - z0) % s != 0) return 0;
            const std::size_t k = (n - z0) / s;
            return (unbounded || k < level) ? 1 : 0;
        }
        if (n != model.var_weight) return 0;
        return BigInt(level);  // indices 0..level-1, one size each
    };

    auto fill_row = [&](std::vector<BigInt>& row, const std::vector<BigInt>* level_up,
                        std::size_t level, bool unbounded) {
        row.assign(max_size + 1, 0);
        const std::vector<BigInt>& up = level_up ? *level_up : row;
        for (std::size_t n = 0; n <= max_size; ++n) {
            BigInt c = index_count(level, unbounded, n);
            if (n >= a) c += up[n - a];
            if (n >= b) {
                const std::size_t rest = n - b;
                for (std::size_t i = 0; i <= rest; ++i)
                    if (row[i] != 0 && row[rest - i] != 0) c += row[i] * row[rest - i];
            }
            row[n] = c;
        }
    };

    t.counts.assign(N + 1, {});
    if (unary) {
        // Level N is the plain class: unrestricted indices, abstraction stays
        // in the plain class.
        fill_row(t.counts[N], nullptr, N, true);
        t.plain = t.counts[N];
    } else {
        // No plain class; abstractions clamp at level N.
        fill_row(t.counts[N], nullptr, N, false);
    }
    for (std::size_t m = N; m-- > 0;)
        fill_row(t.counts[m], &t.counts[m + 1], m, false);
    return t;
}

// ---------------------------------------------------------------------------
// Catalan numbers
// ---------------------------------------------------------------------------

std::vector<BigInt> catalan_series(std::size_t max_n, std::size_t* big_mults) {
    std::size_t ops = 0;
    std::vector<BigInt> c(max_n + 1);
    c[0] = 1;
    for (std::size_t k = 0; k < max_n; ++k) {
        BigInt next = c[k] * (2 * (2 * k + 1));
        next /= static_cast<unsigned>(k + 2);  // exact division
        ops += 2;
        c[k + 1] = std::move(next);
    }
    if (big_mults) *big_mults = ops;
    return c;
}

BigInt catalan(std::size_t n, std::size_t* big_mults) {
    std::size_t ops = 0;
    BigInt c = 1;
    for (std::size_t k = 0; k < n; ++k) {
        c *= 2 * (2 * k + 1);
        c /= static_cast<unsigned>(k + 2);
        ops += 2;
    }
    if (big_mults) *big_mults = ops;
    return c;
}

std::vector<BigInt> catalan_convolution_series(std::size_t max_n, std::size_t* big_mults) {
    std::size_t ops = 0;
    std::vector<BigInt> c(max_n + 1);
    c[0] = 1;
    for (std::size_t n = 0; n < max_n; ++n) {
        BigInt acc = 0;
        for (std::size_t i = 0; i <= n; ++i) {
            acc += c[i] * c[n - i];
            ++ops;
        }
        c[n + 1] = std::move(acc);
    }
    if (big_mults) *big_mults = ops;
    return c;
}

BigInt catalan_convolution(std::size_t n, std::size_t* big_mults) {
    return catalan_convolution_series(n, big_mults).back();
}

bool pointing_check(std::size_t n) {
    if (n == 0) return true;  // both sides are 0
    // Left side from the holonomic path, right side by formally differentiating
    // the convolution-built series: [z^n] z C'(z) = [z^(n-1)] C'(z).
    const BigInt lhs = BigInt(n) * catalan(n);
    const std::vector<BigInt> c = catalan_convolution_series(n);
    std::vector<BigInt> deriv(n);
    for (std::size_t k = 0; k < n; ++k) deriv[k] = BigInt(k + 1) * c[k + 1];
    return lhs == deriv[n - 1];
}

// ---------------------------------------------------------------------------
// Generating-function evaluation
// ---------------------------------------------------------------------------

GfReal gf_precision() {
    static const GfReal value = [] {
        if (const char* env = std::getenv("LAMBDAGEN_PRECISION")) {
            char* end = nullptr;
            const double v = std::strtod(env, &end);
            if (end != env && v > 0.0 && v < 1.0) return GfReal(v);
        }
        return GfReal("1e-12");
    }();
    return value;
}

GFValues gf_eval(const SizeModel& model, std::size_t N, const GfReal& x,
                 const std::vector<GfReal>& index_weights) {
    model.validate();
    if (model.index_mode != IndexSizeMode::Unary)
        throw std::invalid_argument(
            "gf_eval: the constant index mode has no plain generating function");
    if (!(x > 0) || x >= 1)
        throw SingularityExceeded("gf_eval: x must lie in (0, 1)");

    using boost::multiprecision::pow;
    using boost::multiprecision::sqrt;

    const GfReal xa = pow(x, static_cast<int>(model.abs_weight));
    const GfReal xb = pow(x, static_cast<int>(model.app_weight));
    const GfReal xz = pow(x, static_cast<int>(model.zero_weight));
    const GfReal xs = pow(x, static_cast<int>(model.succ_weight));

    auto weight_of = [&](std::size_t k) -> GfReal {
        return k < index_weights.size() ? index_weights[k] : GfReal(1);
    };

    // prefix[m] = sum of weighted index terms for indices < m
    std::vector<GfReal> prefix(N + 1);
    GfReal run = 0, xpow = xz;
    for (std::size_t m = 0; m <= N; ++m) {
        prefix[m] = run;
        run += weight_of(m) * xpow;
        xpow *= xs;
    }
    // Plain index series: the first N weighted terms plus the geometric tail
    // (weights past the marked range are 1; N always exceeds that range in
    // weighted use).
    if (index_weights.size() > N)
        throw std::invalid_argument("gf_eval: more index weights than openness levels");
    GfReal plain_index = run + xpow / (1 - xs);

    GFValues out;
    out.x = x;
    out.precision = gf_precision();
    out.levels.assign(N + 1, 0);

    // Plain class: xb L^2 + (xa - 1) L + I = 0, power-series branch.
    const GfReal one_minus_xa = 1 - xa;
    const GfReal disc = one_minus_xa * one_minus_xa - 4 * xb * plain_index;
    if (disc < 0)
        throw SingularityExceeded("gf_eval: x at or past the dominant singularity (plain level)");
    out.plain = 2 * plain_index / (one_minus_xa + sqrt(disc));
    out.levels[N] = out.plain;

    for (std::size_t m = N; m-- > 0;) {
        const GfReal constant = prefix[m] + xa * out.levels[m + 1];
        const GfReal d = 1 - 4 * xb * constant;
        if (d < 0)
            throw SingularityExceeded("gf_eval: x at or past the dominant singularity (level " +
                                      std::to_string(m) + ")");
        out.levels[m] = 2 * constant / (1 + sqrt(d));
    }
    return out;
}

GfReal truncated_rho(const SizeModel& model, std::size_t N, const GfReal& tol,
                     const std::vector<GfReal>& index_weights) {
    const GfReal eps = tol > 0 ? tol : gf_precision();
    GfReal lo = 0, hi = 1;
    for (int iter = 0; iter < 400 && (hi - lo) > eps * hi; ++iter) {
        const GfReal mid = (lo + hi) / 2;
        try {
            gf_eval(model, N, mid, index_weights);
            lo = mid;
        } catch (const SingularityExceeded&) {
            hi = mid;
        }
    }
    if (lo == 0) throw NoConvergence("truncated_rho: no feasible control point found");
    return lo;
}

}  // namespace lambdagen
