#include "lambdagen/tuner.hpp"

#include "lambdagen/counting.hpp"
#include "lambdagen/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace lambdagen {

using boost::multiprecision::abs;
using boost::multiprecision::exp;
using boost::multiprecision::log;
using boost::multiprecision::pow;

GfReal expected_index_count(const SizeModel& model, std::size_t N, const GfReal& x,
                            const std::vector<GfReal>& index_weights, std::size_t j) {
    if (j >= index_weights.size())
        throw std::out_of_range("expected_index_count: index not marked");
    static const GfReal h("1e-20");
    std::vector<GfReal> wp = index_weights;
    std::vector<GfReal> wm = index_weights;
    wp[j] *= exp(h);
    wm[j] *= exp(-h);
    const GfReal vp = gf_eval(model, N, x, wp).levels[0];
    const GfReal vm = gf_eval(model, N, x, wm).levels[0];
    return (log(vp) - log(vm)) / (2 * h);
}

std::string TuningProfile::to_json() const {
    nlohmann::json j;
    j["n"] = target_size;
    j["N"] = truncation;
    j["x"] = static_cast<double>(x);
    j["targets"] = targets;
    auto w = nlohmann::json::array();
    for (const auto& u : weights) w.push_back(static_cast<double>(u));
    j["weights"] = std::move(w);
    j["achieved"] = achieved;
    j["expected_size"] = expected_size;
    return j.dump();
}

namespace {

// Solves A y = b in place by Gaussian elimination with partial pivoting;
// false on a (near-)singular matrix.
bool solve_linear(std::vector<GfReal>& a, std::vector<GfReal>& b, std::size_t d) {
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < d; ++r)
            if (abs(a[r * d + col]) > abs(a[pivot * d + col])) pivot = r;
        if (abs(a[pivot * d + col]) < GfReal("1e-40")) return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < d; ++c) std::swap(a[col * d + c], a[pivot * d + c]);
            std::swap(b[col], b[pivot]);
        }
        for (std::size_t r = col + 1; r < d; ++r) {
            const GfReal f = a[r * d + col] / a[col * d + col];
            if (f == 0) continue;
            for (std::size_t c = col; c < d; ++c) a[r * d + c] -= f * a[col * d + c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t col = d; col-- > 0;) {
        GfReal acc = b[col];
        for (std::size_t c = col + 1; c < d; ++c) acc -= a[col * d + c] * b[c];
        b[col] = acc / a[col * d + col];
    }
    return true;
}

// The joint (u, x) Newton system is numerically hopeless: near the
// singularity every log-derivative is dominated by the same rank-one
// square-root blow-up, making the Jacobian rows nearly parallel. Instead the
// control point is eliminated: for each trial weight vector, an inner
// bisection re-solves the mean-size equation, and the outer Newton iteration
// runs only on the index shares, which stay smooth because the singular
// factors cancel in the count/size ratio.
struct ShareSystem {
    const SizeModel& model;
    std::size_t N;
    std::size_t n;
    std::size_t marked;
    std::vector<double> targets;

    GfReal pin_x(const std::vector<GfReal>& weights) const {
        return calibrate_weighted(n, model, N, weights, GfReal("1e-12"));
    }

    std::optional<std::vector<GfReal>> try_residual(const std::vector<GfReal>& theta) const {
        try {
            return residual(theta, nullptr);
        } catch (const SingularityExceeded&) {
            return std::nullopt;
        } catch (const NoConvergence&) {
            return std::nullopt;
        }
    }

    std::vector<GfReal> residual(const std::vector<GfReal>& theta, GfReal* x_out) const {
        std::vector<GfReal> weights(marked);
        for (std::size_t j = 0; j < marked; ++j) weights[j] = exp(theta[j]);
        const GfReal x = pin_x(weights);
        if (x_out) *x_out = x;
        const GfReal mean = boltzmann_mean_size(model, N, x, 0, weights);
        std::vector<GfReal> f(marked);
        for (std::size_t j = 0; j < marked; ++j) {
            const GfReal count = expected_index_count(model, N, x, weights, j);
            const GfReal share = GfReal(model.index_size(j)) * count / mean;
            f[j] = log(share) - log(GfReal(targets[j]));
        }
        return f;
    }
};

GfReal inf_norm(const std::vector<GfReal>& v) {
    GfReal m = 0;
    for (const auto& e : v)
        if (abs(e) > m) m = abs(e);
    return m;
}

}  // namespace

TuningProfile tune(const std::vector<double>& targets, std::size_t n, const SizeModel& model,
                   std::size_t N) {
    model.validate();
    if (model.index_mode != IndexSizeMode::Unary)
        throw std::invalid_argument("tune: requires the unary index mode");
    if (n == 0) throw DegenerateTarget("tune: target size 0 is degenerate");
    double total = 0;
    for (double t : targets) {
        if (t < 0) throw std::invalid_argument("tune: negative target fraction");
        if (t == 0) throw DegenerateTarget("tune: zero target fraction forces a zero weight");
        total += t;
    }
    if (!targets.empty() && total >= 1.0)
        throw Infeasible("tune: target fractions sum to " + std::to_string(total) +
                         ", leaving no mass for the rest of the term");
    if (targets.size() + 1 > N)
        throw std::invalid_argument("tune: more marked indices than openness levels");

    const std::size_t marked = targets.size();
    ShareSystem sys{model, N, n, marked, targets};

    std::vector<GfReal> theta(marked, 0);
    GfReal x = 0;
    std::vector<GfReal> f = sys.residual(theta, &x);
    GfReal fnorm = inf_norm(f);
    const GfReal tol("1e-8");
    const GfReal outer_h("1e-7");

    bool converged = fnorm < tol;
    for (int iter = 0; iter < 200 && !converged; ++iter) {
        // Finite-difference Jacobian, column by column; each probe re-pins x.
        // A probe can land past the feasibility boundary, in which case the
        // one-sided difference from the good side stands in.
        std::vector<GfReal> jac(marked * marked);
        for (std::size_t c = 0; c < marked; ++c) {
            std::vector<GfReal> tp = theta, tm = theta;
            tp[c] += outer_h;
            tm[c] -= outer_h;
            const auto fp = sys.try_residual(tp);
            const auto fm = sys.try_residual(tm);
            if (!fp && !fm)
                throw Infeasible("tune: weights pinned against the feasibility boundary");
            for (std::size_t r = 0; r < marked; ++r) {
                if (fp && fm)
                    jac[r * marked + c] = ((*fp)[r] - (*fm)[r]) / (2 * outer_h);
                else if (fp)
                    jac[r * marked + c] = ((*fp)[r] - f[r]) / outer_h;
                else
                    jac[r * marked + c] = (f[r] - (*fm)[r]) / outer_h;
            }
        }
        std::vector<GfReal> step = f;
        for (auto& e : step) e = -e;
        if (!solve_linear(jac, step, marked))
            throw Infeasible("tune: singular moment system; targets at or past a boundary");

        // Backtracking: shrink until the residual actually drops and the
        // weights stay finite.
        GfReal alpha = 1;
        bool advanced = false;
        for (int bt = 0; bt < 40; ++bt) {
            std::vector<GfReal> trial(marked);
            bool sane = true;
            for (std::size_t i = 0; i < marked; ++i) {
                trial[i] = theta[i] + alpha * step[i];
                if (abs(trial[i]) > 200) sane = false;
            }
            if (sane) {
                try {
                    GfReal xt = 0;
                    const std::vector<GfReal> ft = sys.residual(trial, &xt);
                    const GfReal fn = inf_norm(ft);
                    if (fn < fnorm) {
                        theta = std::move(trial);
                        f = ft;
                        fnorm = fn;
                        x = xt;
                        advanced = true;
                        break;
                    }
                } catch (const SingularityExceeded&) {
                    // extreme trial weights; shrink
                } catch (const NoConvergence&) {
                    // inner mean-size solve lost its bracket; shrink
                }
            }
            alpha /= 2;
        }
        if (!advanced)
            throw Infeasible("tune: no descent direction; targets appear unreachable");
        converged = fnorm < tol;
    }
    if (!converged) throw NoConvergence("tune: moment matching stalled above tolerance");

    TuningProfile p;
    p.model = model;
    p.truncation = N;
    p.target_size = n;
    p.targets = targets;
    p.weights.resize(marked);
    for (std::size_t j = 0; j < marked; ++j) p.weights[j] = exp(theta[j]);
    p.x = x;
    const GfReal mean = boltzmann_mean_size(model, N, p.x, 0, p.weights);
    p.expected_size = static_cast<double>(mean);
    p.achieved.resize(marked);
    for (std::size_t j = 0; j < marked; ++j) {
        const GfReal count = expected_index_count(model, N, p.x, p.weights, j);
        p.achieved[j] = static_cast<double>(GfReal(model.index_size(j)) * count / mean);
    }
    return p;
}

Term sample_tuned(const TuningProfile& profile, double tolerance, Rng& rng,
                  std::size_t max_attempts, SampleStats* stats) {
    const BoltzmannOracle oracle =
        make_boltzmann_oracle(profile.model, profile.truncation, profile.x, profile.weights);
    SamplerConfig config;
    config.target_size = profile.target_size;
    config.tolerance = tolerance;
    config.max_attempts = max_attempts;
    return sample_closed(oracle, config, rng, stats);
}

}  // namespace lambdagen
