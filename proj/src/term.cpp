#include "lambdagen/term.hpp"

#include "lambdagen/detail/tree_builder.hpp"
#include "lambdagen/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <utility>

namespace lambdagen {

// ---------------------------------------------------------------------------
// Term
// ---------------------------------------------------------------------------

Term Term::index(std::uint64_t value) {
    Term t(TermKind::Index, value);
    return t;
}

Term Term::app(Term left, Term right) {
    Term t(TermKind::App, 0);
    t.left_ = std::make_unique<Term>(std::move(left));
    t.right_ = std::make_unique<Term>(std::move(right));
    return t;
}

Term Term::abs(Term body) {
    Term t(TermKind::Abs, 0);
    t.left_ = std::make_unique<Term>(std::move(body));
    return t;
}

Term::~Term() { release_children(); }

void Term::release_children() noexcept {
    // Detach and drain iteratively; letting unique_ptr recurse would blow the
    // stack on spine-deep terms.
    if (!left_ && !right_) return;
    std::vector<std::unique_ptr<Term>> pending;
    pending.reserve(64);
    if (left_) pending.push_back(std::move(left_));
    if (right_) pending.push_back(std::move(right_));
    while (!pending.empty()) {
        std::unique_ptr<Term> cur = std::move(pending.back());
        pending.pop_back();
        if (cur->left_) pending.push_back(std::move(cur->left_));
        if (cur->right_) pending.push_back(std::move(cur->right_));
    }
}

namespace {

// Preorder node sequence via an explicit stack (children visited left first).
std::vector<const Term*> preorder(const Term& root) {
    std::vector<const Term*> out;
    std::vector<const Term*> stack{&root};
    while (!stack.empty()) {
        const Term* t = stack.back();
        stack.pop_back();
        out.push_back(t);
        switch (t->kind()) {
            case TermKind::Index:
                break;
            case TermKind::App:
                stack.push_back(&t->right());
                stack.push_back(&t->left());
                break;
            case TermKind::Abs:
                stack.push_back(&t->body());
                break;
        }
    }
    return out;
}

}  // namespace

Term Term::clone() const {
    // Rebuild bottom-up by scanning the preorder sequence backwards.
    std::vector<const Term*> order = preorder(*this);
    std::vector<Term> built;
    built.reserve(64);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Term* t = *it;
        switch (t->kind()) {
            case TermKind::Index:
                built.push_back(Term::index(t->index_value()));
                break;
            case TermKind::Abs: {
                Term body = std::move(built.back());
                built.pop_back();
                built.push_back(Term::abs(std::move(body)));
                break;
            }
            case TermKind::App: {
                Term l = std::move(built.back());
                built.pop_back();
                Term r = std::move(built.back());
                built.pop_back();
                built.push_back(Term::app(std::move(l), std::move(r)));
                break;
            }
        }
    }
    return std::move(built.back());
}

bool Term::operator==(const Term& other) const {
    std::vector<std::pair<const Term*, const Term*>> stack{{this, &other}};
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        if (a->kind_ != b->kind_) return false;
        switch (a->kind_) {
            case TermKind::Index:
                if (a->index_ != b->index_) return false;
                break;
            case TermKind::App:
                stack.emplace_back(a->right_.get(), b->right_.get());
                [[fallthrough]];
            case TermKind::Abs:
                stack.emplace_back(a->left_.get(), b->left_.get());
                break;
        }
    }
    return true;
}

std::size_t Term::node_count() const { return preorder(*this).size(); }

Term build_term(const std::vector<PrefixOp>& ops) {
    std::vector<Term> built;
    built.reserve(64);
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        switch (it->kind) {
            case TermKind::Index:
                built.push_back(Term::index(it->index));
                break;
            case TermKind::Abs: {
                if (built.empty()) throw std::invalid_argument("prefix stream: abs lacks a body");
                Term body = std::move(built.back());
                built.pop_back();
                built.push_back(Term::abs(std::move(body)));
                break;
            }
            case TermKind::App: {
                if (built.size() < 2) throw std::invalid_argument("prefix stream: app lacks operands");
                Term l = std::move(built.back());
                built.pop_back();
                Term r = std::move(built.back());
                built.pop_back();
                built.push_back(Term::app(std::move(l), std::move(r)));
                break;
            }
        }
    }
    if (built.size() != 1) throw std::invalid_argument("prefix stream: not a single term");
    return std::move(built.back());
}

// ---------------------------------------------------------------------------
// SizeModel
// ---------------------------------------------------------------------------

SizeModel SizeModel::constant(std::uint32_t var_weight, std::uint32_t abs_weight,
                              std::uint32_t app_weight) {
    SizeModel m;
    m.index_mode = IndexSizeMode::Constant;
    m.var_weight = var_weight;
    m.abs_weight = abs_weight;
    m.app_weight = app_weight;
    m.validate();
    return m;
}

SizeModel SizeModel::unary(std::uint32_t zero_weight, std::uint32_t succ_weight,
                           std::uint32_t abs_weight, std::uint32_t app_weight) {
    SizeModel m;
    m.index_mode = IndexSizeMode::Unary;
    m.zero_weight = zero_weight;
    m.succ_weight = succ_weight;
    m.abs_weight = abs_weight;
    m.app_weight = app_weight;
    m.validate();
    return m;
}

void SizeModel::validate() const {
    if (abs_weight < 1) throw std::invalid_argument("size model: abs_weight must be >= 1");
    if (app_weight < 1) throw std::invalid_argument("size model: app_weight must be >= 1");
    if (index_mode == IndexSizeMode::Unary) {
        if (succ_weight < 1) throw std::invalid_argument("size model: succ_weight must be >= 1");
    } else {
        if (var_weight < 1) throw std::invalid_argument("size model: var_weight must be >= 1");
    }
}

std::uint64_t term_size(const Term& t, const SizeModel& model) {
    std::uint64_t total = 0;
    for (const Term* node : preorder(t)) {
        switch (node->kind()) {
            case TermKind::Index:
                total += model.index_size(node->index_value());
                break;
            case TermKind::App:
                total += model.app_weight;
                break;
            case TermKind::Abs:
                total += model.abs_weight;
                break;
        }
    }
    return total;
}

bool is_m_open(const Term& t, std::uint64_t m) {
    std::vector<std::pair<const Term*, std::uint64_t>> stack{{&t, 0}};
    while (!stack.empty()) {
        auto [node, depth] = stack.back();
        stack.pop_back();
        switch (node->kind()) {
            case TermKind::Index:
                if (node->index_value() >= depth + m) return false;
                break;
            case TermKind::App:
                stack.emplace_back(&node->left(), depth);
                stack.emplace_back(&node->right(), depth);
                break;
            case TermKind::Abs:
                stack.emplace_back(&node->body(), depth + 1);
                break;
        }
    }
    return true;
}

std::uint64_t min_openness(const Term& t) {
    std::uint64_t worst = 0;
    std::vector<std::pair<const Term*, std::uint64_t>> stack{{&t, 0}};
    while (!stack.empty()) {
        auto [node, depth] = stack.back();
        stack.pop_back();
        switch (node->kind()) {
            case TermKind::Index: {
                std::uint64_t k = node->index_value();
                if (k >= depth) worst = std::max(worst, k - depth + 1);
                break;
            }
            case TermKind::App:
                stack.emplace_back(&node->left(), depth);
                stack.emplace_back(&node->right(), depth);
                break;
            case TermKind::Abs:
                stack.emplace_back(&node->body(), depth + 1);
                break;
        }
    }
    return worst;
}

std::map<std::uint64_t, std::uint64_t> index_histogram(const Term& t) {
    std::map<std::uint64_t, std::uint64_t> hist;
    for (const Term* node : preorder(t))
        if (node->kind() == TermKind::Index) ++hist[node->index_value()];
    return hist;
}

// ---------------------------------------------------------------------------
// BinaryTree
// ---------------------------------------------------------------------------

BinaryTree::BinaryTree() : left_{kNone}, right_{kNone}, root_(0) {}

BinaryTree BinaryTree::node(const BinaryTree& l, const BinaryTree& r) {
    const auto ln = static_cast<NodeId>(l.total_nodes());
    const auto rn = static_cast<NodeId>(r.total_nodes());
    std::vector<NodeId> left, right;
    left.reserve(static_cast<std::size_t>(1 + ln + rn));
    right.reserve(static_cast<std::size_t>(1 + ln + rn));
    left.push_back(1 + l.root_);
    right.push_back(1 + ln + r.root_);
    for (NodeId v : l.left_) left.push_back(v == kNone ? kNone : v + 1);
    for (NodeId v : r.left_) left.push_back(v == kNone ? kNone : v + 1 + ln);
    for (NodeId v : l.right_) right.push_back(v == kNone ? kNone : v + 1);
    for (NodeId v : r.right_) right.push_back(v == kNone ? kNone : v + 1 + ln);
    return BinaryTree(std::move(left), std::move(right), 0);
}

std::string BinaryTree::shape() const {
    std::string out;
    out.reserve(total_nodes() * 2);
    // Work items: a node to expand, or a literal to append.
    std::vector<std::pair<NodeId, char>> stack{{root_, 0}};
    while (!stack.empty()) {
        auto [id, lit] = stack.back();
        stack.pop_back();
        if (lit != 0) {
            out.push_back(lit);
            continue;
        }
        if (is_leaf(id)) {
            out.push_back('.');
        } else {
            stack.emplace_back(0, ')');
            stack.emplace_back(right(id), 0);
            stack.emplace_back(left(id), 0);
            stack.emplace_back(0, '(');
        }
    }
    return out;
}

bool BinaryTree::operator==(const BinaryTree& other) const {
    if (total_nodes() != other.total_nodes()) return false;
    std::vector<std::pair<NodeId, NodeId>> stack{{root_, other.root_}};
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        const bool la = is_leaf(a), lb = other.is_leaf(b);
        if (la != lb) return false;
        if (!la) {
            stack.emplace_back(left(a), other.left(b));
            stack.emplace_back(right(a), other.right(b));
        }
    }
    return true;
}

bool BinaryTree::consistent() const {
    const std::size_t n = left_.size();
    if (n == 0 || n % 2 == 0 || right_.size() != n) return false;
    if (root_ < 0 || static_cast<std::size_t>(root_) >= n) return false;
    std::size_t leaves = 0, internals = 0, visited = 0;
    std::vector<bool> seen(n, false);
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        if (id < 0 || static_cast<std::size_t>(id) >= n) return false;
        if (seen[static_cast<std::size_t>(id)]) return false;
        seen[static_cast<std::size_t>(id)] = true;
        ++visited;
        const NodeId l = left_[static_cast<std::size_t>(id)];
        const NodeId r = right_[static_cast<std::size_t>(id)];
        if ((l == kNone) != (r == kNone)) return false;
        if (l == kNone) {
            ++leaves;
        } else {
            ++internals;
            stack.push_back(l);
            stack.push_back(r);
        }
    }
    return visited == n && leaves == internals + 1;
}

// ---------------------------------------------------------------------------
// Combinator
// ---------------------------------------------------------------------------

Combinator Combinator::s() { return Combinator(BinaryTree::leaf(), {true}); }
Combinator Combinator::k() { return Combinator(BinaryTree::leaf(), {false}); }

Combinator Combinator::app(const Combinator& l, const Combinator& r) {
    std::vector<bool> bits = l.leaf_is_s_;
    bits.insert(bits.end(), r.leaf_is_s_.begin(), r.leaf_is_s_.end());
    return Combinator(BinaryTree::node(l.scaffold_, r.scaffold_), std::move(bits));
}

Combinator::Combinator(BinaryTree scaffold, std::vector<bool> leaf_is_s)
    : scaffold_(std::move(scaffold)), leaf_is_s_(std::move(leaf_is_s)) {
    if (leaf_is_s_.size() != scaffold_.leaves())
        throw std::invalid_argument("combinator: leaf sequence length must match scaffold leaves");
}

std::string Combinator::render() const {
    std::string out;
    out.reserve(scaffold_.total_nodes() * 2 + 2);
    std::size_t next_leaf = 0;
    std::vector<std::pair<BinaryTree::NodeId, char>> stack{{scaffold_.root(), 0}};
    while (!stack.empty()) {
        auto [id, lit] = stack.back();
        stack.pop_back();
        if (lit != 0) {
            out.push_back(lit);
            continue;
        }
        if (scaffold_.is_leaf(id)) {
            out.push_back(leaf_is_s_[next_leaf++] ? 'S' : 'K');
        } else {
            stack.emplace_back(0, ')');
            stack.emplace_back(scaffold_.right(id), 0);
            stack.emplace_back(0, ' ');
            stack.emplace_back(scaffold_.left(id), 0);
            stack.emplace_back(0, '(');
        }
    }
    return out;
}

Combinator Combinator::parse(const std::string& text) {
    using NodeId = BinaryTree::NodeId;
    constexpr NodeId kPending = -2;
    std::vector<NodeId> left, right;
    std::vector<bool> bits;
    std::vector<NodeId> open;  // internal nodes still missing children
    std::size_t pos = 0;
    const std::size_t n = text.size();

    auto skip_ws = [&] {
        while (pos < n && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' || text[pos] == '\r')) ++pos;
    };
    auto fail = [&](const char* msg) -> ParseError { return ParseError(msg, pos); };

    NodeId done = BinaryTree::kNone;
    skip_ws();
    while (true) {
        if (pos >= n) throw fail("unexpected end of combinator input");
        const char c = text[pos];
        NodeId completed;
        if (c == '(') {
            ++pos;
            left.push_back(kPending);
            right.push_back(kPending);
            open.push_back(static_cast<NodeId>(left.size() - 1));
            skip_ws();
            continue;
        } else if (c == 'S' || c == 'K') {
            ++pos;
            left.push_back(BinaryTree::kNone);
            right.push_back(BinaryTree::kNone);
            bits.push_back(c == 'S');
            completed = static_cast<NodeId>(left.size() - 1);
        } else {
            throw fail("expected 'S', 'K' or '('");
        }
        // Attach the completed subtree upward, closing parents as they fill.
        while (true) {
            if (open.empty()) {
                done = completed;
                break;
            }
            const NodeId parent = open.back();
            if (left[static_cast<std::size_t>(parent)] == kPending) {
                left[static_cast<std::size_t>(parent)] = completed;
                skip_ws();
                break;
            }
            right[static_cast<std::size_t>(parent)] = completed;
            skip_ws();
            if (pos >= n || text[pos] != ')') throw fail("expected ')'");
            ++pos;
            open.pop_back();
            completed = parent;
        }
        if (done != BinaryTree::kNone) break;
    }
    skip_ws();
    if (pos != n) throw fail("trailing input after combinator");
    return Combinator(detail::TreeBuilder::make(std::move(left), std::move(right), done),
                      std::move(bits));
}

bool Combinator::operator==(const Combinator& other) const {
    return leaf_is_s_ == other.leaf_is_s_ && scaffold_ == other.scaffold_;
}

namespace {

// Leaves contained in each subtree, computed without recursion.
std::vector<std::int32_t> subtree_leaf_counts(const BinaryTree& t) {
    std::vector<std::int32_t> counts(t.total_nodes(), 0);
    std::vector<std::pair<BinaryTree::NodeId, bool>> stack{{t.root(), false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        if (t.is_leaf(id)) {
            counts[static_cast<std::size_t>(id)] = 1;
        } else if (!expanded) {
            stack.emplace_back(id, true);
            stack.emplace_back(t.left(id), false);
            stack.emplace_back(t.right(id), false);
        } else {
            counts[static_cast<std::size_t>(id)] =
                counts[static_cast<std::size_t>(t.left(id))] +
                counts[static_cast<std::size_t>(t.right(id))];
        }
    }
    return counts;
}

}  // namespace

Combinator::Cursor Combinator::cursor() const {
    auto counts = std::make_shared<const std::vector<std::int32_t>>(subtree_leaf_counts(scaffold_));
    return Cursor(this, std::move(counts), scaffold_.root(), 0);
}

bool Combinator::Cursor::is_app() const { return !owner_->scaffold_.is_leaf(id_); }

bool Combinator::Cursor::is_s() const {
    return owner_->leaf_is_s_[static_cast<std::size_t>(leaf_start_)];
}

Combinator::Cursor Combinator::Cursor::left() const {
    return Cursor(owner_, leaf_counts_, owner_->scaffold_.left(id_), leaf_start_);
}

Combinator::Cursor Combinator::Cursor::right() const {
    const auto l = owner_->scaffold_.left(id_);
    return Cursor(owner_, leaf_counts_, owner_->scaffold_.right(id_),
                  leaf_start_ + (*leaf_counts_)[static_cast<std::size_t>(l)]);
}

}  // namespace lambdagen
