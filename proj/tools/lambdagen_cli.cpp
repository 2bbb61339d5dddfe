#include "lambdagen/boltzmann.hpp"
#include "lambdagen/counting.hpp"
#include "lambdagen/errors.hpp"
#include "lambdagen/recursive.hpp"
#include "lambdagen/remy.hpp"
#include "lambdagen/serialize.hpp"
#include "lambdagen/term.hpp"
#include "lambdagen/tuner.hpp"
#include "lambdagen/typing.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace lambdagen;

// ---------------------------------------------------------------------------
// Shared flag groups
// ---------------------------------------------------------------------------

struct ModelFlags {
    std::string name = "natural";
    std::optional<std::uint32_t> abs_w, app_w, zero_w, succ_w, var_w;

    void attach(CLI::App* cmd) {
        cmd->add_option("--model", name, "size model: natural or constant")
            ->check(CLI::IsMember({"natural", "constant"}));
        auto opt = [&](const char* flag, std::optional<std::uint32_t>& slot, const char* help) {
            cmd->add_option_function<std::uint32_t>(
                   flag, [&slot](const std::uint32_t& v) { slot = v; }, help);
        };
        opt("--abs-weight", abs_w, "abstraction weight (default 1)");
        opt("--app-weight", app_w, "application weight (default 1)");
        opt("--zero-weight", zero_w, "weight of index zero, unary mode (default 1)");
        opt("--succ-weight", succ_w, "weight per successor, unary mode (default 1)");
        opt("--var-weight", var_w, "flat index weight, constant mode (default 1)");
    }

    SizeModel build() const {
        SizeModel m = name == "constant" ? SizeModel::constant() : SizeModel::natural();
        if (abs_w) m.abs_weight = *abs_w;
        if (app_w) m.app_weight = *app_w;
        if (zero_w) m.zero_weight = *zero_w;
        if (succ_w) m.succ_weight = *succ_w;
        if (var_w) m.var_weight = *var_w;
        m.validate();
        return m;
    }
};

std::uint64_t parse_seed(const std::string& text) {
    if (text == "random") {
        std::random_device rd;
        return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    std::size_t used = 0;
    const std::uint64_t seed = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument("--seed expects a number or 'random'");
    return seed;
}

// dense targets 0..k from {"n":..., "targets":[{"index":..,"fraction":..}]}
struct TargetFile {
    std::size_t n = 0;
    std::vector<double> fractions;
};

TargetFile read_targets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("--targets: cannot open " + path);
    nlohmann::json j;
    in >> j;
    TargetFile out;
    out.n = j.at("n").get<std::size_t>();
    std::vector<std::pair<std::size_t, double>> entries;
    for (const auto& e : j.at("targets")) {
        entries.emplace_back(e.at("index").get<std::size_t>(), e.at("fraction").get<double>());
    }
    std::sort(entries.begin(), entries.end());
    out.fractions.resize(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (entries[i].first != i)
            throw std::invalid_argument(
                "--targets: indices must cover 0..k exactly once (missing or duplicate " +
                std::to_string(i) + ")");
        out.fractions[i] = entries[i].second;
    }
    return out;
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------

struct CountArgs {
    ModelFlags model;
    std::size_t openness = 0;
    std::size_t size = 0;
    std::size_t truncation = 20;
    std::string export_path;
};

int run_count(const CountArgs& a) {
    if (a.openness > a.truncation) {
        std::cerr << "--openness must not exceed --truncation\n";
        return 2;
    }
    const SizeModel model = a.model.build();
    const CountTable table = build_count_table(model, a.truncation, a.size);
    std::cout << table.at(a.openness, a.size).str() << "\n";
    if (!a.export_path.empty()) {
        if (a.export_path == "-") {
            std::cout << table.to_json() << "\n";
        } else {
            std::ofstream out(a.export_path);
            if (!out) {
                std::cerr << "--export: cannot write " << a.export_path << "\n";
                return 2;
            }
            out << table.to_json() << "\n";
        }
    }
    return 0;
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

struct SampleArgs {
    ModelFlags model;
    std::string method = "recursive";
    std::size_t size = 0;
    std::size_t count = 1;
    std::size_t openness = 0;
    bool openness_set = false;
    std::string seed = "0";
    double tolerance = 0.1;
    std::size_t truncation = 20;
    std::size_t max_attempts = 1000000;
    std::string format = "debruijn";
    std::string targets_path;
    bool stats = false;
    std::size_t jobs = 1;
};

struct InstanceResult {
    std::string output;
    SampleStats stats;
    std::vector<std::uint64_t> sizes;
    std::exception_ptr error;
};

int run_sample(const SampleArgs& a) {
    if (a.jobs == 0 || a.count == 0) {
        std::cerr << (a.jobs == 0 ? "--jobs must be positive\n" : "--count must be positive\n");
        return 2;
    }
    const bool term_method =
        a.method == "recursive" || a.method == "boltzmann" || a.method == "tuned";
    if (a.openness_set && a.method != "recursive") {
        std::cerr << "--openness is only meaningful with --method recursive\n";
        return 2;
    }
    if ((a.method == "tuned") != !a.targets_path.empty()) {
        std::cerr << "--targets is required for --method tuned and rejected otherwise\n";
        return 2;
    }

    const std::uint64_t seed = parse_seed(a.seed);
    const TermFormat fmt = term_format_from_name(a.format);
    const SizeModel model = a.model.build();

    // Shared read-only set-up per method.
    std::shared_ptr<const CountTable> table;
    std::optional<BoltzmannOracle> oracle;
    std::size_t profile_n = a.size;
    if (a.method == "recursive") {
        if (a.openness > a.truncation) {
            std::cerr << "--openness must not exceed --truncation\n";
            return 2;
        }
        table = std::make_shared<const CountTable>(
            build_count_table(model, a.truncation, a.size));
        if (table->at(a.openness, a.size) == 0)
            throw EmptySizeClass("no terms of size " + std::to_string(a.size) +
                                 " at openness level " + std::to_string(a.openness));
    } else if (a.method == "boltzmann") {
        const GfReal x = calibrate_terms(a.size, model, a.truncation);
        oracle = make_boltzmann_oracle(model, a.truncation, x);
    } else if (a.method == "tuned") {
        const TargetFile tf = read_targets(a.targets_path);
        profile_n = a.size != 0 ? a.size : tf.n;
        const TuningProfile profile =
            tune(tf.fractions, profile_n, model, a.truncation);
        oracle = make_boltzmann_oracle(profile.model, profile.truncation, profile.x,
                                       profile.weights);
    }

    auto run_instance = [&](std::size_t index, std::size_t quota, InstanceResult& res,
                            std::ostream* direct) {
        try {
            Rng rng = Rng::child(seed, index);
            std::ostringstream buffered;
            std::ostream& out = direct ? *direct : buffered;
            for (std::size_t c = 0; c < quota; ++c) {
                if (a.method == "recursive") {
                    Term t = gen_term(*table, a.openness, a.size, rng);
                    res.sizes.push_back(term_size(t, model));
                    res.stats.attempts += 1;
                    out << render(t, fmt) << "\n";
                } else if (a.method == "boltzmann" || a.method == "tuned") {
                    SamplerConfig config;
                    config.target_size = a.method == "tuned" ? profile_n : a.size;
                    config.tolerance = a.tolerance;
                    config.max_attempts = a.max_attempts;
                    SampleStats st;
                    Term t = sample_closed(*oracle, config, rng, &st);
                    res.sizes.push_back(st.accepted_size);
                    res.stats.attempts += st.attempts;
                    res.stats.ceiling_aborts += st.ceiling_aborts;
                    res.stats.undershoots += st.undershoots;
                    res.stats.openness_rejections += st.openness_rejections;
                    out << render(t, fmt) << "\n";
                } else if (a.method == "remy") {
                    BinaryTree t = remy_tree(a.size, rng);
                    res.sizes.push_back(t.internal_nodes());
                    res.stats.attempts += 1;
                    out << t.shape() << "\n";
                } else {  // sk
                    Combinator c = sk_combinator(a.size, rng);
                    res.sizes.push_back(c.applications());
                    res.stats.attempts += 1;
                    out << c.render() << "\n";
                }
            }
            if (!direct) res.output = buffered.str();
        } catch (...) {
            res.error = std::current_exception();
        }
    };

    std::vector<InstanceResult> results(a.jobs);
    if (a.jobs == 1) {
        run_instance(0, a.count, results[0], &std::cout);
    } else {
        std::vector<std::thread> threads;
        const std::size_t base = a.count / a.jobs, extra = a.count % a.jobs;
        for (std::size_t i = 0; i < a.jobs; ++i) {
            threads.emplace_back(run_instance, i, base + (i < extra ? 1 : 0),
                                 std::ref(results[i]), nullptr);
        }
        for (auto& t : threads) t.join();
    }

    SampleStats total;
    std::vector<std::uint64_t> sizes;
    for (auto& r : results) {
        if (r.error) std::rethrow_exception(r.error);
        std::cout << r.output;
        total.attempts += r.stats.attempts;
        total.ceiling_aborts += r.stats.ceiling_aborts;
        total.undershoots += r.stats.undershoots;
        total.openness_rejections += r.stats.openness_rejections;
        sizes.insert(sizes.end(), r.sizes.begin(), r.sizes.end());
    }
    if (a.stats) {
        nlohmann::json j;
        std::uint64_t mn = UINT64_MAX, mx = 0;
        double mean = 0;
        for (std::uint64_t s : sizes) {
            mn = std::min(mn, s);
            mx = std::max(mx, s);
            mean += static_cast<double>(s);
        }
        mean /= sizes.empty() ? 1 : static_cast<double>(sizes.size());
        j["count"] = sizes.size();
        j["sizes"] = {{"min", sizes.empty() ? 0 : mn}, {"max", mx}, {"mean", mean}};
        j["attempts"] = total.attempts;
        j["acceptance_rate"] =
            total.attempts ? static_cast<double>(sizes.size()) / static_cast<double>(total.attempts)
                           : 0.0;
        j["ceiling_aborts"] = total.ceiling_aborts;
        j["undershoots"] = total.undershoots;
        j["openness_rejections"] = total.openness_rejections;
        std::cout << j.dump() << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// tune / typecheck
// ---------------------------------------------------------------------------

struct TuneArgs {
    ModelFlags model;
    std::string targets_path;
    std::size_t size = 0;
    std::size_t truncation = 20;
};

int run_tune(const TuneArgs& a) {
    const TargetFile tf = read_targets(a.targets_path);
    const std::size_t n = a.size != 0 ? a.size : tf.n;
    const TuningProfile profile = tune(tf.fractions, n, a.model.build(), a.truncation);
    std::cout << profile.to_json() << "\n";
    return 0;
}

int run_typecheck() {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    const Term t = parse(buf.str(), TermFormat::DeBruijn);
    if (!is_m_open(t, 0)) {
        std::cerr << "OpenTermRejected: term has free indices\n";
        return 2;
    }
    const auto type = infer(t);
    if (!type) {
        std::cout << "untypeable\n";
        return 1;
    }
    std::cout << type->render() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uniformly random lambda terms, plane binary trees and SK combinators"};
    app.require_subcommand(1);

    CountArgs count_args;
    auto* count_cmd = app.add_subcommand("count", "count terms by size and openness");
    count_args.model.attach(count_cmd);
    count_cmd->add_option("--openness", count_args.openness, "openness level m (0 = closed)");
    count_cmd->add_option("--size", count_args.size, "term size n")->required();
    count_cmd->add_option("--truncation", count_args.truncation,
                          "openness truncation level N (default 20)");
    count_cmd->add_option("--export", count_args.export_path,
                          "write the full count table as JSON to a file ('-' for stdout)");

    SampleArgs sample_args;
    auto* sample_cmd = app.add_subcommand("sample", "draw random structures");
    sample_args.model.attach(sample_cmd);
    sample_cmd
        ->add_option("--method", sample_args.method,
                     "recursive | boltzmann | tuned | remy | sk")
        ->check(CLI::IsMember({"recursive", "boltzmann", "tuned", "remy", "sk"}));
    sample_cmd->add_option("--size", sample_args.size, "target size")->required();
    sample_cmd->add_option("--count", sample_args.count, "number of samples (default 1)");
    auto* open_opt = sample_cmd->add_option("--openness", sample_args.openness,
                                            "openness level for recursive sampling (default 0)");
    sample_cmd->add_option("--seed", sample_args.seed, "64-bit seed or 'random' (default 0)");
    sample_cmd->add_option("--tolerance", sample_args.tolerance,
                           "size window half-width as a fraction (default 0.1)");
    sample_cmd->add_option("--truncation", sample_args.truncation,
                           "openness truncation level N (default 20)");
    sample_cmd->add_option("--max-attempts", sample_args.max_attempts,
                           "rejection budget (default 1000000)");
    sample_cmd->add_option("--format", sample_args.format, "debruijn | sexp | json")
        ->check(CLI::IsMember({"debruijn", "sexp", "json"}));
    sample_cmd->add_option("--targets", sample_args.targets_path,
                           "tuning target file for --method tuned");
    sample_cmd->add_flag("--stats", sample_args.stats, "append a JSON summary line");
    sample_cmd->add_option("--jobs", sample_args.jobs,
                           "independent sampler instances with derived seeds (default 1)");

    TuneArgs tune_args;
    auto* tune_cmd = app.add_subcommand("tune", "solve index-frequency marking weights");
    tune_args.model.attach(tune_cmd);
    tune_cmd->add_option("--targets", tune_args.targets_path, "target file (JSON)")->required();
    tune_cmd->add_option("--size", tune_args.size, "target mean size (overrides the file's n)");
    tune_cmd->add_option("--truncation", tune_args.truncation,
                         "openness truncation level N (default 20)");

    auto* typecheck_cmd =
        app.add_subcommand("typecheck", "infer the principal simple type of a closed term (stdin)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (count_cmd->parsed()) return run_count(count_args);
        if (sample_cmd->parsed()) {
            sample_args.openness_set = open_opt->count() > 0;
            return run_sample(sample_args);
        }
        if (tune_cmd->parsed()) return run_tune(tune_args);
        if (typecheck_cmd->parsed()) return run_typecheck();
    } catch (const ParseError& e) {
        std::cerr << "ParseError: " << e.what() << "\n";
        return 2;
    } catch (const AttemptsExhausted& e) {
        std::cerr << "AttemptsExhausted: " << e.what() << "\n";
        return 3;
    } catch (const EmptySizeClass& e) {
        std::cerr << "EmptySizeClass: " << e.what() << "\n";
        return 3;
    } catch (const Infeasible& e) {
        std::cerr << "Infeasible: " << e.what() << "\n";
        return 3;
    } catch (const NoConvergence& e) {
        std::cerr << "NoConvergence: " << e.what() << "\n";
        return 3;
    } catch (const SingularityExceeded& e) {
        std::cerr << "SingularityExceeded: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    return 2;
}
