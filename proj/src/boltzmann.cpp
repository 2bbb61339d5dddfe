#include "lambdagen/boltzmann.hpp"

#include "lambdagen/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace lambdagen {

using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::pow;

GfReal calibrate_binary_tree(std::size_t n) {
    if (n == 0) throw DegenerateTarget("calibrate_binary_tree: mean size 0 is degenerate");
    const GfReal num = GfReal(static_cast<std::uint64_t>(n)) * (static_cast<std::uint64_t>(n) + 1);
    const GfReal den = GfReal(2 * static_cast<std::uint64_t>(n) + 1);
    return num / (den * den);
}

GfReal boltzmann_mean_size(const SizeModel& model, std::size_t N, const GfReal& x,
                           std::size_t level, const std::vector<GfReal>& index_weights) {
    if (level > N) throw std::out_of_range("boltzmann_mean_size: level beyond truncation");
    // d log v / d log x by central differences; at 50 digits a 1e-20 log-step
    // leaves ~30 correct digits, far beyond what calibration needs.
    static const GfReal h("1e-20");
    const GfReal vp = gf_eval(model, N, x * exp(h), index_weights).levels[level];
    const GfReal vm = gf_eval(model, N, x * exp(-h), index_weights).levels[level];
    return (log(vp) - log(vm)) / (2 * h);
}

GfReal calibrate_weighted(std::size_t n, const SizeModel& model, std::size_t N,
                          const std::vector<GfReal>& index_weights, const GfReal& rel_tol) {
    if (n == 0) throw DegenerateTarget("calibrate_terms: mean size 0 is degenerate");
    const GfReal rho = truncated_rho(model, N, GfReal("1e-20"), index_weights);
    const GfReal target(static_cast<std::uint64_t>(n));

    GfReal lo = rho / 1000000;
    GfReal hi = rho * (1 - GfReal("1e-17"));
    if (boltzmann_mean_size(model, N, lo, 0, index_weights) > target)
        throw NoConvergence("calibrate_terms: mean size exceeds " + std::to_string(n) +
                            " even at tiny control points");
    if (boltzmann_mean_size(model, N, hi, 0, index_weights) < target)
        throw NoConvergence("calibrate_terms: mean size " + std::to_string(n) +
                            " unreachable below the singularity");

    GfReal mid = (lo + hi) / 2;
    for (int iter = 0; iter < 300; ++iter) {
        mid = (lo + hi) / 2;
        const GfReal mean = boltzmann_mean_size(model, N, mid, 0, index_weights);
        const GfReal err = (mean - target) / target;
        if (err >= -rel_tol && err <= rel_tol) return mid;
        if (mean < target)
            lo = mid;
        else
            hi = mid;
    }
    throw NoConvergence("calibrate_terms: bisection failed to meet tolerance");
}

GfReal calibrate_terms(std::size_t n, const SizeModel& model, std::size_t N) {
    return calibrate_weighted(n, model, N, {}, GfReal("1e-7"));
}

// ---------------------------------------------------------------------------
// Oracle construction
// ---------------------------------------------------------------------------

BoltzmannOracle make_boltzmann_oracle(const SizeModel& model, std::size_t N, const GfReal& x,
                                      const std::vector<GfReal>& index_weights) {
    BoltzmannOracle o;
    o.model = model;
    o.truncation = N;
    o.x = x;
    o.index_weights = index_weights;
    o.gf = gf_eval(model, N, x, index_weights);

    const GfReal xa = pow(x, static_cast<int>(model.abs_weight));
    const GfReal xb = pow(x, static_cast<int>(model.app_weight));
    const GfReal xz = pow(x, static_cast<int>(model.zero_weight));
    const GfReal xs = pow(x, static_cast<int>(model.succ_weight));
    o.geometric_ratio = static_cast<double>(xs);
    o.tail_start = index_weights.size();

    auto weight_of = [&](std::size_t k) -> GfReal {
        return k < index_weights.size() ? index_weights[k] : GfReal(1);
    };

    o.levels.resize(N + 1);
    for (std::size_t m = 0; m <= N; ++m) {
        BoltzmannOracle::Level& lvl = o.levels[m];
        const GfReal vm = o.gf.levels[m];
        const bool plain = m == N;

        // Index mass at this level and the conditional cumulative over the
        // explicitly tabulated values.
        const std::size_t explicit_count = plain ? index_weights.size() : m;
        GfReal index_total = 0;
        GfReal xpow = xz;
        std::vector<GfReal> terms(explicit_count);
        for (std::size_t k = 0; k < explicit_count; ++k) {
            terms[k] = weight_of(k) * xpow;
            index_total += terms[k];
            xpow *= xs;
        }
        if (plain) index_total += xpow / (1 - xs);  // geometric tail past the weights

        const GfReal p_index = index_total / vm;
        const GfReal p_abs = plain ? xa : xa * o.gf.levels[m + 1] / vm;
        const GfReal p_app = xb * vm;
        const GfReal sum = p_index + p_abs + p_app;
        if (sum < GfReal("0.999999") || sum > GfReal("1.000001"))
            throw std::logic_error("boltzmann oracle: branch probabilities sum to " +
                                   sum.str(8, std::ios_base::fixed) + " at level " +
                                   std::to_string(m));

        lvl.p_index = static_cast<double>(p_index);
        lvl.p_abs = static_cast<double>(p_abs);
        lvl.p_app = static_cast<double>(p_app);
        lvl.index_cum.resize(explicit_count);
        GfReal cum = 0;
        for (std::size_t k = 0; k < explicit_count; ++k) {
            cum += terms[k] / index_total;
            lvl.index_cum[k] = static_cast<double>(cum);
        }
    }
    return o;
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

namespace {

struct Generated {
    Term term;
    std::uint64_t size;
};

std::optional<Generated> generate(const BoltzmannOracle& oracle, std::size_t start_level,
                                  std::uint64_t ceiling, Rng& rng) {
    const SizeModel& model = oracle.model;
    const std::size_t N = oracle.truncation;
    std::uint64_t acc = 0;
    std::vector<PrefixOp> ops;
    std::vector<std::size_t> jobs{start_level};
    while (!jobs.empty()) {
        const std::size_t m = jobs.back();
        jobs.pop_back();
        const BoltzmannOracle::Level& lvl = oracle.levels[m];
        const double u = rng.real01();
        if (u < lvl.p_index) {
            const double v = rng.real01();
            std::uint64_t k = 0;
            bool found = false;
            for (std::size_t i = 0; i < lvl.index_cum.size(); ++i)
                if (v < lvl.index_cum[i]) {
                    k = i;
                    found = true;
                    break;
                }
            if (!found) {
                // Only the plain level keeps mass past its table: the
                // geometric tail of unmarked index values.
                k = oracle.tail_start + rng.geometric(oracle.geometric_ratio);
            }
            acc += model.index_size(k);
            if (acc > ceiling) return std::nullopt;
            ops.push_back({TermKind::Index, k});
        } else if (u < lvl.p_index + lvl.p_abs) {
            acc += model.abs_weight;
            if (acc > ceiling) return std::nullopt;
            ops.push_back({TermKind::Abs, 0});
            jobs.push_back(m < N ? m + 1 : N);
        } else {
            acc += model.app_weight;
            if (acc > ceiling) return std::nullopt;
            ops.push_back({TermKind::App, 0});
            jobs.push_back(m);
            jobs.push_back(m);
        }
    }
    return Generated{build_term(ops), acc};
}

}  // namespace

std::optional<Term> sample_level(const BoltzmannOracle& oracle, std::size_t level,
                                 std::uint64_t ceiling, Rng& rng) {
    if (level > oracle.truncation)
        throw std::out_of_range("sample_level: level beyond truncation");
    auto r = generate(oracle, level, ceiling, rng);
    if (!r) return std::nullopt;
    return std::move(r->term);
}

std::optional<Term> sample_plain(const BoltzmannOracle& oracle, std::uint64_t ceiling, Rng& rng) {
    return sample_level(oracle, oracle.truncation, ceiling, rng);
}

std::uint64_t SamplerConfig::window_floor() const {
    const double f = (1.0 - tolerance) * static_cast<double>(target_size);
    if (f <= 0) return 0;
    return static_cast<std::uint64_t>(std::ceil(f - 1e-9));
}

std::uint64_t SamplerConfig::window_ceiling() const {
    const double c = (1.0 + tolerance) * static_cast<double>(target_size);
    return static_cast<std::uint64_t>(std::floor(c + 1e-9));
}

Term sample_closed(const BoltzmannOracle& oracle, const SamplerConfig& config, Rng& rng,
                   SampleStats* stats) {
    const std::uint64_t floor = config.window_floor();
    const std::uint64_t ceiling = config.window_ceiling();
    SampleStats local;
    SampleStats& st = stats ? *stats : local;
    for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
        ++st.attempts;
        auto r = generate(oracle, 0, ceiling, rng);
        if (!r) {
            ++st.ceiling_aborts;
            continue;
        }
        if (r->size < floor) {
            ++st.undershoots;
            continue;
        }
        if (!is_m_open(r->term, 0)) {
            ++st.openness_rejections;
            continue;
        }
        st.accepted_size = r->size;
        return std::move(r->term);
    }
    throw AttemptsExhausted("sample_closed: no accepted term within " +
                            std::to_string(config.max_attempts) + " attempts");
}

}  // namespace lambdagen
