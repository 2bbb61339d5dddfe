#include "lambdagen/recursive.hpp"

#include "lambdagen/errors.hpp"

#include <stdexcept>
#include <string>

namespace lambdagen {

namespace {

struct Job {
    std::size_t m;
    std::size_t n;
};

}  // namespace

Term gen_term(const CountTable& table, std::size_t m, std::size_t n, Rng& rng) {
    const SizeModel& model = table.model;
    const std::size_t N = table.truncation;
    const std::size_t a = model.abs_weight;
    const std::size_t b = model.app_weight;
    const bool unary = model.index_mode == IndexSizeMode::Unary;

    if (table.at(m, n) == 0)
        throw EmptySizeClass("no terms of size " + std::to_string(n) + " at openness level " +
                             std::to_string(m));

    std::vector<PrefixOp> ops;
    std::vector<Job> jobs{{m, n}};
    while (!jobs.empty()) {
        const Job job = jobs.back();
        jobs.pop_back();
        const std::vector<BigInt>& row = table.counts[job.m];
        BigInt r = random_below(rng, row[job.n]);

        // Indices. At the plain fallback level every value is allowed; below
        // it only indices < m are. Within one size the eligible indices are
        // equiprobable, so the residual rank r picks one directly.
        BigInt index_weight = 0;
        std::uint64_t forced_index = 0;
        if (unary) {
            const std::size_t z0 = model.zero_weight, s = model.succ_weight;
            if (job.n >= z0 && (job.n - z0) % s == 0) {
                const std::size_t k = (job.n - z0) / s;
                if (job.m == N || k < job.m) {
                    index_weight = 1;
                    forced_index = k;
                }
            }
        } else {
            if (job.n == model.var_weight) index_weight = BigInt(job.m);
        }
        if (r < index_weight) {
            const std::uint64_t k =
                unary ? forced_index : static_cast<std::uint64_t>(r);
            ops.push_back({TermKind::Index, k});
            continue;
        }
        r -= index_weight;

        // Abstraction: descend one openness level (saturating at the
        // fallback level).
        const std::size_t next_m = job.m < N ? job.m + 1 : N;
        if (job.n >= a) {
            const BigInt& abs_weight = table.counts[next_m][job.n - a];
            if (r < abs_weight) {
                ops.push_back({TermKind::Abs, 0});
                jobs.push_back({next_m, job.n - a});
                continue;
            }
            r -= abs_weight;
        }

        // Application: invert the cumulative sum over left sizes.
        if (job.n >= b) {
            const std::size_t rest = job.n - b;
            bool split_found = false;
            for (std::size_t i = 0; i <= rest; ++i) {
                if (row[i] == 0 || row[rest - i] == 0) continue;
                const BigInt w = row[i] * row[rest - i];
                if (r < w) {
                    ops.push_back({TermKind::App, 0});
                    jobs.push_back({job.m, rest - i});  // right, emitted second
                    jobs.push_back({job.m, i});         // left, emitted first
                    split_found = true;
                    break;
                }
                r -= w;
            }
            if (split_found) continue;
        }
        throw std::logic_error("gen_term: count table inconsistent with its own recurrence");
    }
    return build_term(ops);
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration
// ---------------------------------------------------------------------------

Enumerator::Enumerator(const SizeModel& model, std::size_t guard)
    : model_(model), guard_(guard) {
    model_.validate();
}

const std::vector<Term>& Enumerator::terms(std::size_t m, std::size_t n) {
    if (n > guard_)
        throw SizeGuardExceeded("enumeration refused: size " + std::to_string(n) +
                                " above guard " + std::to_string(guard_));
    const auto key = std::make_pair(m, n);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const std::size_t a = model_.abs_weight;
    const std::size_t b = model_.app_weight;
    std::vector<Term> out;

    if (model_.index_mode == IndexSizeMode::Unary) {
        const std::size_t z0 = model_.zero_weight, s = model_.succ_weight;
        if (n >= z0 && (n - z0) % s == 0) {
            const std::size_t k = (n - z0) / s;
            if (k < m) out.push_back(Term::index(k));
        }
    } else {
        if (n == model_.var_weight)
            for (std::size_t k = 0; k < m; ++k) out.push_back(Term::index(k));
    }

    if (n >= a)
        for (const Term& body : terms(m + 1, n - a)) out.push_back(Term::abs(body.clone()));

    if (n >= b) {
        const std::size_t rest = n - b;
        for (std::size_t i = 0; i <= rest; ++i) {
            const std::vector<Term>& lefts = terms(m, i);
            if (lefts.empty()) continue;
            const std::vector<Term>& rights = terms(m, rest - i);
            for (const Term& l : lefts)
                for (const Term& r : rights)
                    out.push_back(Term::app(l.clone(), r.clone()));
        }
    }
    return memo_.emplace(key, std::move(out)).first->second;
}

std::vector<Term> Enumerator::enumerate(std::size_t m, std::size_t n) {
    const std::vector<Term>& canonical = terms(m, n);
    std::vector<Term> out;
    out.reserve(canonical.size());
    for (const Term& t : canonical) out.push_back(t.clone());
    return out;
}

std::vector<Term> enumerate_terms(const SizeModel& model, std::size_t m, std::size_t n,
                                  std::size_t guard) {
    Enumerator e(model, guard);
    return e.enumerate(m, n);
}

}  // namespace lambdagen
