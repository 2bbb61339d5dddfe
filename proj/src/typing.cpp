#include "lambdagen/typing.hpp"

#include "lambdagen/boltzmann.hpp"
#include "lambdagen/counting.hpp"
#include "lambdagen/errors.hpp"
#include "lambdagen/recursive.hpp"

#include <iostream>
#include <map>
#include <stdexcept>
#include <string>

namespace lambdagen {

SimpleType SimpleType::variable(std::int32_t ordinal) {
    SimpleType t;
    t.nodes.push_back({ordinal, -1, -1});
    return t;
}

SimpleType SimpleType::arrow(const SimpleType& from, const SimpleType& to) {
    SimpleType t;
    const auto fn = static_cast<std::int32_t>(from.nodes.size());
    t.nodes.push_back({-1, 1, 1 + fn});
    for (Node n : from.nodes) {
        if (n.var < 0) {
            n.left += 1;
            n.right += 1;
        }
        t.nodes.push_back(n);
    }
    for (Node n : to.nodes) {
        if (n.var < 0) {
            n.left += 1 + fn;
            n.right += 1 + fn;
        }
        t.nodes.push_back(n);
    }
    return t;
}

namespace {

std::string type_var_name(std::int32_t ordinal) {
    // a..z, aa..az, ba.. (bijective base 26)
    std::string out;
    std::int64_t i = ordinal + 1;
    while (i > 0) {
        --i;
        out.push_back(static_cast<char>('a' + i % 26));
        i /= 26;
    }
    return {out.rbegin(), out.rend()};
}

}  // namespace

std::string SimpleType::render() const {
    std::string out;
    // Work items: node to render (with a needs-parens flag) or literal text.
    struct Item {
        std::int32_t node = -1;
        bool parens = false;
        const char* literal = nullptr;
    };
    std::vector<Item> stack{{0, false, nullptr}};
    while (!stack.empty()) {
        const Item item = stack.back();
        stack.pop_back();
        if (item.literal) {
            out += item.literal;
            continue;
        }
        const Node& n = nodes[static_cast<std::size_t>(item.node)];
        if (n.var >= 0) {
            out += type_var_name(n.var);
            continue;
        }
        if (item.parens) stack.push_back({-1, false, ")"});
        stack.push_back({n.right, false, nullptr});
        stack.push_back({-1, false, " -> "});
        const bool left_arrow = nodes[static_cast<std::size_t>(n.left)].var < 0;
        stack.push_back({n.left, left_arrow, nullptr});
        if (item.parens) stack.push_back({-1, false, "("});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Inference: union-find over an arena of type nodes
// ---------------------------------------------------------------------------

namespace {

struct TypeGraph {
    // parent < 0: this node is a class root; otherwise a union-find link.
    std::vector<std::int32_t> parent;
    std::vector<std::int32_t> left;   // -1 for plain variables
    std::vector<std::int32_t> right;

    std::int32_t fresh_var() {
        parent.push_back(-1);
        left.push_back(-1);
        right.push_back(-1);
        return static_cast<std::int32_t>(parent.size() - 1);
    }

    std::int32_t fresh_arrow(std::int32_t l, std::int32_t r) {
        parent.push_back(-1);
        left.push_back(l);
        right.push_back(r);
        return static_cast<std::int32_t>(parent.size() - 1);
    }

    bool is_arrow(std::int32_t v) const { return left[static_cast<std::size_t>(v)] >= 0; }

    std::int32_t find(std::int32_t v) {
        std::int32_t root = v;
        while (parent[static_cast<std::size_t>(root)] >= 0)
            root = parent[static_cast<std::size_t>(root)];
        while (parent[static_cast<std::size_t>(v)] >= 0) {
            const std::int32_t next = parent[static_cast<std::size_t>(v)];
            parent[static_cast<std::size_t>(v)] = root;
            v = next;
        }
        return root;
    }

    // With only variables and arrows no constructor clash exists; the one
    // failure mode (cyclic, hence infinite, types) is caught afterwards.
    void unify(std::int32_t a, std::int32_t b) {
        std::vector<std::pair<std::int32_t, std::int32_t>> work{{a, b}};
        while (!work.empty()) {
            auto [x, y] = work.back();
            work.pop_back();
            const std::int32_t rx = find(x), ry = find(y);
            if (rx == ry) continue;
            const bool ax = is_arrow(rx), ay = is_arrow(ry);
            if (ax && ay) {
                parent[static_cast<std::size_t>(ry)] = rx;
                work.emplace_back(left[static_cast<std::size_t>(rx)],
                                  left[static_cast<std::size_t>(ry)]);
                work.emplace_back(right[static_cast<std::size_t>(rx)],
                                  right[static_cast<std::size_t>(ry)]);
            } else if (ax) {
                parent[static_cast<std::size_t>(ry)] = rx;
            } else {
                parent[static_cast<std::size_t>(rx)] = ry;
            }
        }
    }

    /// False when the structure graph has a cycle (occurs failure). Every
    /// class is scanned, not just those reachable from one root: a cyclic
    /// binder type is fatal even when the result type is a bare variable, as
    /// for a self-application applied to itself.
    bool acyclic() {
        std::vector<signed char> color(parent.size(), 0);  // 1 in progress, 2 done
        std::vector<std::pair<std::int32_t, bool>> stack;
        for (std::int32_t s = 0; s < static_cast<std::int32_t>(parent.size()); ++s) {
            stack.assign(1, {find(s), false});
            while (!stack.empty()) {
                auto [root, leaving] = stack.back();
                stack.pop_back();
                auto& c = color[static_cast<std::size_t>(root)];
                if (leaving) {
                    c = 2;
                    continue;
                }
                if (c != 0) {
                    if (c == 1) return false;
                    continue;
                }
                if (!is_arrow(root)) {
                    c = 2;
                    continue;
                }
                c = 1;
                stack.emplace_back(root, true);
                stack.emplace_back(find(left[static_cast<std::size_t>(root)]), false);
                stack.emplace_back(find(right[static_cast<std::size_t>(root)]), false);
            }
        }
        return true;
    }

    /// Expands the class of `start` into a canonical tree; pre: acyclic.
    /// Nodes are laid out in preorder, which also fixes variable naming to
    /// left-to-right first occurrence.
    SimpleType extract(std::int32_t start) {
        SimpleType out;
        std::map<std::int32_t, std::int32_t> names;
        struct Item {
            std::int32_t root;    // class to expand
            std::int32_t slot;    // node to fill; -1: deferred right subtree
            std::int32_t parent;  // arrow whose right child starts next (slot < 0)
        };
        std::vector<Item> stack;
        out.nodes.emplace_back();
        stack.push_back({find(start), 0, -1});
        while (!stack.empty()) {
            const Item item = stack.back();
            stack.pop_back();
            if (item.slot < 0) {
                // The left subtree is fully laid out; the right one starts at
                // the next free index.
                const auto ri = static_cast<std::int32_t>(out.nodes.size());
                out.nodes[static_cast<std::size_t>(item.parent)].right = ri;
                out.nodes.emplace_back();
                stack.push_back({item.root, ri, -1});
                continue;
            }
            if (!is_arrow(item.root)) {
                auto [it, inserted] =
                    names.emplace(item.root, static_cast<std::int32_t>(names.size()));
                out.nodes[static_cast<std::size_t>(item.slot)].var = it->second;
                continue;
            }
            const auto li = static_cast<std::int32_t>(out.nodes.size());
            out.nodes[static_cast<std::size_t>(item.slot)] = {-1, li, -1};
            out.nodes.emplace_back();
            stack.push_back({find(right[static_cast<std::size_t>(item.root)]), -1, item.slot});
            stack.push_back({find(left[static_cast<std::size_t>(item.root)]), li, -1});
        }
        return out;
    }
};

}  // namespace

std::optional<SimpleType> infer(const Term& t) {
    if (!is_m_open(t, 0)) throw OpenTermRejected("infer: term is not closed");

    TypeGraph g;
    // Environment as a persistent chain: (binder type, enclosing chain).
    struct EnvLink {
        std::int32_t type_id;
        std::int32_t up;
    };
    std::vector<EnvLink> env;
    struct Frame {
        const Term* node;
        std::int32_t env_id;
        std::int32_t type_id;
    };
    const std::int32_t root_type = g.fresh_var();
    std::vector<Frame> stack{{&t, -1, root_type}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        switch (f.node->kind()) {
            case TermKind::Index: {
                std::int32_t link = f.env_id;
                for (std::uint64_t k = f.node->index_value(); k > 0; --k)
                    link = env[static_cast<std::size_t>(link)].up;
                g.unify(f.type_id, env[static_cast<std::size_t>(link)].type_id);
                break;
            }
            case TermKind::Abs: {
                const std::int32_t binder = g.fresh_var();
                const std::int32_t body = g.fresh_var();
                g.unify(f.type_id, g.fresh_arrow(binder, body));
                env.push_back({binder, f.env_id});
                stack.push_back({&f.node->body(),
                                 static_cast<std::int32_t>(env.size() - 1), body});
                break;
            }
            case TermKind::App: {
                const std::int32_t fun = g.fresh_var();
                const std::int32_t arg = g.fresh_var();
                g.unify(fun, g.fresh_arrow(arg, f.type_id));
                stack.push_back({&f.node->left(), f.env_id, fun});
                stack.push_back({&f.node->right(), f.env_id, arg});
                break;
            }
        }
    }
    if (!g.acyclic()) return std::nullopt;
    return g.extract(root_type);
}

// ---------------------------------------------------------------------------
// Instance checking
// ---------------------------------------------------------------------------

namespace {

// Structural equality of two subtrees within flat type arrays.
bool subtree_equal(const SimpleType& a, std::int32_t ia, const SimpleType& b, std::int32_t ib) {
    std::vector<std::pair<std::int32_t, std::int32_t>> stack{{ia, ib}};
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        const auto& nx = a.nodes[static_cast<std::size_t>(x)];
        const auto& ny = b.nodes[static_cast<std::size_t>(y)];
        if ((nx.var >= 0) != (ny.var >= 0)) return false;
        if (nx.var >= 0) {
            if (nx.var != ny.var) return false;
        } else {
            stack.emplace_back(nx.left, ny.left);
            stack.emplace_back(nx.right, ny.right);
        }
    }
    return true;
}

}  // namespace

bool is_instance(const SimpleType& general, const SimpleType& specific) {
    // Match general's variables against subtrees of specific, consistently.
    std::map<std::int32_t, std::int32_t> binding;  // general var -> specific node
    std::vector<std::pair<std::int32_t, std::int32_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [gi, si] = stack.back();
        stack.pop_back();
        const auto& gn = general.nodes[static_cast<std::size_t>(gi)];
        if (gn.var >= 0) {
            auto [it, inserted] = binding.emplace(gn.var, si);
            if (!inserted && !subtree_equal(specific, it->second, specific, si)) return false;
            continue;
        }
        const auto& sn = specific.nodes[static_cast<std::size_t>(si)];
        if (sn.var >= 0) return false;  // arrow cannot match a bare variable
        stack.emplace_back(gn.left, sn.left);
        stack.emplace_back(gn.right, sn.right);
    }
    return true;
}

bool type_check(const Term& t, const SimpleType& claimed) {
    const auto principal = infer(t);
    if (!principal) return false;
    return is_instance(*principal, claimed);
}

// ---------------------------------------------------------------------------
// Typed rejection sampling
// ---------------------------------------------------------------------------

std::pair<Term, SimpleType> sample_typed(std::size_t n, const SizeModel& model,
                                         TypedMethod method, Rng& rng,
                                         std::size_t max_attempts, double tolerance,
                                         std::size_t* attempts_out) {
    // Typeable terms thin out so fast that rejection past this size rarely
    // finishes in reasonable time.
    if (n > 60)
        std::cerr << "sample_typed: size " << n
                  << " exceeds the practical regime, expect very long runs\n";

    std::size_t attempts = 0;
    auto finish = [&](Term term, SimpleType type) {
        if (attempts_out) *attempts_out = attempts;
        return std::make_pair(std::move(term), std::move(type));
    };

    if (method == TypedMethod::Recursive) {
        // Truncation at n makes the level-0 class exactly the closed terms of
        // every size up to n, so exact-size draws are uniform over them.
        const CountTable table = build_count_table(model, n, n);
        if (table.at(0, n) == 0)
            throw EmptySizeClass("sample_typed: no closed terms of size " + std::to_string(n));
        while (attempts < max_attempts) {
            ++attempts;
            Term t = gen_term(table, 0, n, rng);
            if (auto type = infer(t)) return finish(std::move(t), std::move(*type));
        }
    } else {
        const GfReal x = calibrate_terms(n, model, 20);
        const BoltzmannOracle oracle = make_boltzmann_oracle(model, 20, x);
        SamplerConfig config;
        config.target_size = n;
        config.tolerance = tolerance;
        config.max_attempts = max_attempts;
        while (attempts < max_attempts) {
            ++attempts;
            Term t = sample_closed(oracle, config, rng);
            if (auto type = infer(t)) return finish(std::move(t), std::move(*type));
        }
    }
    throw AttemptsExhausted("sample_typed: no typeable term within " +
                            std::to_string(max_attempts) + " attempts");
}

}  // namespace lambdagen
