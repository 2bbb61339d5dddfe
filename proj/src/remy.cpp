#include "lambdagen/remy.hpp"

#include "lambdagen/detail/tree_builder.hpp"

namespace lambdagen {

GrowableTree::GrowableTree() : left_{BinaryTree::kNone}, right_{BinaryTree::kNone} {}

void GrowableTree::graft(Rng& rng) {
    using NodeId = BinaryTree::NodeId;
    const std::size_t count = left_.size();
    const auto x = static_cast<NodeId>(rng.below(count));
    const auto moved = static_cast<NodeId>(count);     // x's old content lands here
    const auto fresh = static_cast<NodeId>(count + 1);  // new leaf
    left_.push_back(left_[static_cast<std::size_t>(x)]);
    right_.push_back(right_[static_cast<std::size_t>(x)]);
    left_.push_back(BinaryTree::kNone);
    right_.push_back(BinaryTree::kNone);
    // Slot x becomes the new internal node, so whatever pointed at x (or the
    // root, if x was the root) now sees the grafted pair.
    if (rng.coin()) {
        left_[static_cast<std::size_t>(x)] = fresh;
        right_[static_cast<std::size_t>(x)] = moved;
    } else {
        left_[static_cast<std::size_t>(x)] = moved;
        right_[static_cast<std::size_t>(x)] = fresh;
    }
    operations_ += 6;
}

BinaryTree GrowableTree::freeze() const& {
    return detail::TreeBuilder::make(left_, right_, 0);
}

BinaryTree GrowableTree::freeze() && {
    return detail::TreeBuilder::make(std::move(left_), std::move(right_), 0);
}

BinaryTree remy_tree(std::size_t n, Rng& rng) {
    GrowableTree g;
    for (std::size_t i = 0; i < n; ++i) g.graft(rng);
    return std::move(g).freeze();
}

Combinator sk_combinator(std::size_t n, Rng& rng) {
    BinaryTree scaffold = remy_tree(n, rng);
    std::vector<bool> bits(n + 1);
    for (std::size_t i = 0; i <= n; ++i) bits[i] = rng.coin();
    return Combinator(std::move(scaffold), std::move(bits));
}

}  // namespace lambdagen
