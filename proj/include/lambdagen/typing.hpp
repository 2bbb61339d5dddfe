#pragma once

#include "lambdagen/rng.hpp"
#include "lambdagen/term.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lambdagen {

/// Simple type: a variable or an arrow. Stored as a flat preorder node array
/// (node 0 is the root); types produced by infer() are canonically renamed,
/// with variables numbered by first occurrence left to right, so structural
/// equality coincides with equality up to renaming.
struct SimpleType {
    struct Node {
        std::int32_t var = -1;   // >= 0: variable ordinal; -1: arrow
        std::int32_t left = -1;  // arrow children (indices into nodes)
        std::int32_t right = -1;

        bool operator==(const Node&) const = default;
    };

    std::vector<Node> nodes;

    static SimpleType variable(std::int32_t ordinal);
    static SimpleType arrow(const SimpleType& from, const SimpleType& to);

    bool is_var(std::size_t i = 0) const { return nodes[i].var >= 0; }

    /// Right-associative arrows, variables a, b, c, ...; parentheses only
    /// around arrows in argument position: "a -> b -> a", "(a -> b) -> a".
    std::string render() const;

    bool operator==(const SimpleType& other) const { return nodes == other.nodes; }
    bool operator!=(const SimpleType& other) const { return !(*this == other); }
};

/// Principal simple type of a closed term, by first-order unification with an
/// occurs check; nullopt when no simple type exists. Throws OpenTermRejected
/// on open input.
std::optional<SimpleType> infer(const Term& t);

/// True when `specific` can be obtained from `general` by substituting types
/// for variables (consistently).
bool is_instance(const SimpleType& general, const SimpleType& specific);

/// Checks t : claimed, i.e. claimed is a substitution instance of the
/// principal type. Throws OpenTermRejected on open input.
bool type_check(const Term& t, const SimpleType& claimed);

enum class TypedMethod { Recursive, Boltzmann };

/// Closed, simply-typeable term with its principal type, by rejection over a
/// type-blind uniform sampler: size exactly n (Recursive) or within the
/// tolerance window (Boltzmann). Practical only for modest n; the typeable
/// fraction collapses rapidly with size. Throws AttemptsExhausted.
std::pair<Term, SimpleType> sample_typed(std::size_t n, const SizeModel& model,
                                         TypedMethod method, Rng& rng,
                                         std::size_t max_attempts = 1000000,
                                         double tolerance = 0.1,
                                         std::size_t* attempts_out = nullptr);

}  // namespace lambdagen
