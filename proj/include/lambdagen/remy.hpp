#pragma once

#include "lambdagen/rng.hpp"
#include "lambdagen/term.hpp"

#include <cstddef>
#include <vector>

namespace lambdagen {

/// Binary tree under construction by random grafting. Each step picks a
/// uniform node x (leaf or internal), moves x's content to a fresh slot, and
/// turns slot x into an internal node whose children are the fresh slot and a
/// new leaf, on a coin-flipped side. After k steps from a single leaf the
/// tree is uniform over the shapes with k internal nodes; every step is O(1).
class GrowableTree {
public:
    GrowableTree();

    void graft(Rng& rng);

    std::size_t internal_nodes() const { return (left_.size() - 1) / 2; }

    /// Elementary slot operations performed so far; grows linearly in the
    /// number of grafts (the linearity tests read this).
    std::size_t operations() const { return operations_; }

    BinaryTree freeze() const&;
    BinaryTree freeze() &&;

private:
    std::vector<BinaryTree::NodeId> left_;
    std::vector<BinaryTree::NodeId> right_;
    std::size_t operations_ = 0;
};

/// Uniformly random plane binary tree with n internal nodes, O(n) time.
BinaryTree remy_tree(std::size_t n, Rng& rng);

/// Uniformly random SK-combinator with exactly n applications: a uniform
/// scaffold from remy_tree(n) and n+1 independent fair S/K leaf draws.
Combinator sk_combinator(std::size_t n, Rng& rng);

}  // namespace lambdagen
