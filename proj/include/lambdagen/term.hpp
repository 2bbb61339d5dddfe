#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace lambdagen {

namespace detail {
struct TreeBuilder;
}

// ---------------------------------------------------------------------------
// Lambda terms in De Bruijn notation
// ---------------------------------------------------------------------------

enum class TermKind : std::uint8_t { Index, App, Abs };

/// Immutable De Bruijn term: Index(n) | App(left, right) | Abs(body).
///
/// Move-only; copying is explicit via clone(). All traversals (destruction
/// included) are iterative, so terms with millions of nodes are safe even
/// when their spine is deep.
class Term {
public:
    static Term index(std::uint64_t value);
    static Term app(Term left, Term right);
    static Term abs(Term body);

    Term(Term&&) noexcept = default;
    Term& operator=(Term&&) noexcept = default;
    Term(const Term&) = delete;
    Term& operator=(const Term&) = delete;
    ~Term();

    TermKind kind() const { return kind_; }
    std::uint64_t index_value() const { return index_; }  // pre: kind()==Index
    const Term& left() const { return *left_; }           // pre: kind()==App
    const Term& right() const { return *right_; }         // pre: kind()==App
    const Term& body() const { return *left_; }           // pre: kind()==Abs

    Term clone() const;
    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }

    /// Number of constructors (indices count once, regardless of value).
    std::size_t node_count() const;

private:
    Term(TermKind k, std::uint64_t idx) : kind_(k), index_(idx) {}
    void release_children() noexcept;

    TermKind kind_ = TermKind::Index;
    std::uint64_t index_ = 0;
    std::unique_ptr<Term> left_;
    std::unique_ptr<Term> right_;
};

// ---------------------------------------------------------------------------
// Size models
// ---------------------------------------------------------------------------

enum class IndexSizeMode : std::uint8_t {
    Unary,     // |n| = zero_weight + n * succ_weight
    Constant,  // |n| = var_weight for every n
};

/// Constructor weights defining the size of a term.
///
/// abs_weight, app_weight and succ_weight must be >= 1 and var_weight >= 1
/// so that every size class is finite; zero_weight may be 0.
struct SizeModel {
    std::uint32_t abs_weight = 1;
    std::uint32_t app_weight = 1;
    IndexSizeMode index_mode = IndexSizeMode::Unary;
    std::uint32_t zero_weight = 1;
    std::uint32_t succ_weight = 1;
    std::uint32_t var_weight = 1;

    /// Every constructor (abstraction, application, successor, zero) weighs 1.
    static SizeModel natural() { return SizeModel{}; }

    /// Variables cost a flat var_weight, independent of the index value.
    static SizeModel constant(std::uint32_t var_weight = 1,
                              std::uint32_t abs_weight = 1,
                              std::uint32_t app_weight = 1);

    static SizeModel unary(std::uint32_t zero_weight, std::uint32_t succ_weight,
                           std::uint32_t abs_weight = 1,
                           std::uint32_t app_weight = 1);

    std::uint64_t index_size(std::uint64_t k) const {
        return index_mode == IndexSizeMode::Unary ? zero_weight + k * succ_weight
                                                  : var_weight;
    }

    /// True when the plain (unrestricted-index) class has finite size
    /// classes; fails for the constant mode, where infinitely many indices
    /// share one size.
    bool has_finite_plain() const { return index_mode == IndexSizeMode::Unary; }

    /// Throws std::invalid_argument when the weight constraints are violated.
    void validate() const;

    bool operator==(const SizeModel&) const = default;
};

/// One constructor in a preorder (prefix) encoding of a term. Parsers and
/// samplers emit these streams; build_term folds a stream into a Term without
/// recursion.
struct PrefixOp {
    TermKind kind = TermKind::Index;
    std::uint64_t index = 0;
};

/// Rebuilds a term from its preorder constructor sequence. Throws
/// std::invalid_argument when the sequence is not exactly one well-formed
/// term.
Term build_term(const std::vector<PrefixOp>& ops);

/// Sum of constructor weights under the given model.
std::uint64_t term_size(const Term& t, const SizeModel& model);

/// True iff prepending m head abstractions would close the term, i.e. every
/// Index(k) under d enclosing abstractions satisfies k < d + m.
bool is_m_open(const Term& t, std::uint64_t m);

/// Smallest m for which is_m_open(t, m) holds; 0 for closed terms.
std::uint64_t min_openness(const Term& t);

/// Occurrence count per index value.
std::map<std::uint64_t, std::uint64_t> index_histogram(const Term& t);

// ---------------------------------------------------------------------------
// Plane binary trees
// ---------------------------------------------------------------------------

/// Plane binary tree (Leaf | Node(left, right)) backed by a flat node array,
/// so trees with millions of nodes need no per-node allocations and equality
/// and rendering never recurse.
class BinaryTree {
public:
    using NodeId = std::int32_t;
    static constexpr NodeId kNone = -1;

    /// A single leaf.
    BinaryTree();
    static BinaryTree leaf() { return BinaryTree(); }
    static BinaryTree node(const BinaryTree& l, const BinaryTree& r);

    NodeId root() const { return root_; }
    bool is_leaf(NodeId id) const { return left_[static_cast<std::size_t>(id)] == kNone; }
    NodeId left(NodeId id) const { return left_[static_cast<std::size_t>(id)]; }
    NodeId right(NodeId id) const { return right_[static_cast<std::size_t>(id)]; }

    std::size_t internal_nodes() const { return (left_.size() - 1) / 2; }
    std::size_t leaves() const { return internal_nodes() + 1; }
    std::size_t total_nodes() const { return left_.size(); }

    /// Canonical text form: "." for a leaf, "(LR)" for a node; shape-equal
    /// trees render identically whatever their internal node numbering.
    std::string shape() const;

    bool operator==(const BinaryTree& other) const;
    bool operator!=(const BinaryTree& other) const { return !(*this == other); }

    /// Structural sanity: node/leaf bookkeeping consistent, every node
    /// reachable exactly once from the root.
    bool consistent() const;

private:
    friend struct detail::TreeBuilder;
    BinaryTree(std::vector<NodeId> left, std::vector<NodeId> right, NodeId root)
        : left_(std::move(left)), right_(std::move(right)), root_(root) {}

    std::vector<NodeId> left_;
    std::vector<NodeId> right_;
    NodeId root_ = 0;
};

// ---------------------------------------------------------------------------
// SK combinators
// ---------------------------------------------------------------------------

/// SK-combinator term: S | K | CApp(left, right); size = number of
/// applications. Stored as a binary scaffold plus the in-order sequence of
/// primitive leaves, which is also how the sampler builds them.
class Combinator {
public:
    static Combinator s();
    static Combinator k();
    static Combinator app(const Combinator& l, const Combinator& r);
    Combinator(BinaryTree scaffold, std::vector<bool> leaf_is_s);

    std::size_t applications() const { return scaffold_.internal_nodes(); }

    const BinaryTree& scaffold() const { return scaffold_; }
    /// Leaf primitives in in-order; true = S.
    const std::vector<bool>& leaf_sequence() const { return leaf_is_s_; }

    std::string render() const;
    static Combinator parse(const std::string& text);

    bool operator==(const Combinator& other) const;
    bool operator!=(const Combinator& other) const { return !(*this == other); }

    /// Structural navigation; owns the per-subtree leaf offsets it needs, so
    /// shared Combinator values stay immutable.
    class Cursor {
    public:
        bool is_app() const;
        bool is_s() const;  // pre: !is_app()
        Cursor left() const;
        Cursor right() const;

    private:
        friend class Combinator;
        Cursor(const Combinator* owner, std::shared_ptr<const std::vector<std::int32_t>> leaf_counts,
               BinaryTree::NodeId id, std::int32_t leaf_start)
            : owner_(owner), leaf_counts_(std::move(leaf_counts)), id_(id), leaf_start_(leaf_start) {}
        const Combinator* owner_;
        std::shared_ptr<const std::vector<std::int32_t>> leaf_counts_;
        BinaryTree::NodeId id_;
        std::int32_t leaf_start_;
    };

    Cursor cursor() const;

private:
    BinaryTree scaffold_;
    std::vector<bool> leaf_is_s_;
};

}  // namespace lambdagen
