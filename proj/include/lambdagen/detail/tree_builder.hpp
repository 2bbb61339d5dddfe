#pragma once

#include "lambdagen/term.hpp"

#include <utility>
#include <vector>

namespace lambdagen::detail {

// Internal escape hatch for code that assembles BinaryTree node arrays
// directly (the grafting sampler, the combinator parser). Callers are
// responsible for handing over a well-formed tree.
struct TreeBuilder {
    static BinaryTree make(std::vector<BinaryTree::NodeId> left,
                           std::vector<BinaryTree::NodeId> right,
                           BinaryTree::NodeId root) {
        return BinaryTree(std::move(left), std::move(right), root);
    }
};

}  // namespace lambdagen::detail
