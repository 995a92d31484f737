#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "gsat/types.hpp"

namespace gsat::baselines {

/// Classic node-splitting B-Tree: every node except the root holds between
/// B and 2B keys, internal nodes have one more child than keys.
class ClassicBTree {
 public:
  explicit ClassicBTree(std::size_t B = 8) : B_(B) {
    if (B_ < 1) throw contract_violation("B-Tree needs B >= 1");
  }

  std::optional<Value> get(Key key) {
    for (const Node* node = root_.get(); node != nullptr;) {
      ++stats_.nodes_visited;
      const std::size_t i = lower(*node, key);
      if (i < node->keys.size() && node->keys[i] == key) return node->values[i];
      if (node->leaf()) break;
      node = node->children[i].get();
    }
    return std::nullopt;
  }

  /// Adds the pair unless the key is already present.
  bool insert(Key key, Value value) {
    if (!root_) {
      root_ = std::make_unique<Node>();
      root_->keys.push_back(key);
      root_->values.push_back(value);
      ++size_;
      return true;
    }
    bool inserted = false;
    if (auto split = insert(*root_, key, value, inserted)) {
      auto root = std::make_unique<Node>();
      root->keys.push_back(split->key);
      root->values.push_back(split->value);
      root->children.push_back(std::move(root_));
      root->children.push_back(std::move(split->right));
      root_ = std::move(root);
    }
    size_ += inserted;
    return inserted;
  }

  bool erase(Key key) {
    if (!root_) return false;
    const bool erased = erase(*root_, key);
    if (root_->keys.empty()) {
      root_ = root_->leaf() ? nullptr : std::move(root_->children.front());
    }
    size_ -= erased;
    return erased;
  }

  std::size_t size() const { return size_; }
  std::size_t B() const { return B_; }
  const OpStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

  std::size_t height() const {
    std::size_t h = 0;
    for (const Node* node = root_.get(); node != nullptr;
         node = node->leaf() ? nullptr : node->children.front().get()) {
      ++h;
    }
    return h;
  }

  /// Sorted keys, occupancy bounds and equal leaf depth.
  bool check_invariants() const {
    if (!root_) return size_ == 0;
    std::size_t leaf_depth = 0, count = 0;
    return check(*root_, true, 1, leaf_depth, nullptr, nullptr, count) && count == size_;
  }

 private:
  struct Node {
    std::vector<Key> keys;
    std::vector<Value> values;
    std::vector<std::unique_ptr<Node>> children;
    bool leaf() const { return children.empty(); }
  };

  struct Split {
    Key key;
    Value value;
    std::unique_ptr<Node> right;
  };

  static std::size_t lower(const Node& node, Key key) {
    return static_cast<std::size_t>(std::lower_bound(node.keys.begin(), node.keys.end(), key) -
                                    node.keys.begin());
  }

  std::optional<Split> insert(Node& node, Key key, Value value, bool& inserted) {
    ++stats_.nodes_visited;
    const std::size_t i = lower(node, key);
    if (i < node.keys.size() && node.keys[i] == key) return std::nullopt;
    const auto at = static_cast<std::ptrdiff_t>(i);
    if (node.leaf()) {
      node.keys.insert(node.keys.begin() + at, key);
      node.values.insert(node.values.begin() + at, value);
      inserted = true;
    } else {
      auto split = insert(*node.children[i], key, value, inserted);
      if (!split) return std::nullopt;
      node.keys.insert(node.keys.begin() + at, split->key);
      node.values.insert(node.values.begin() + at, split->value);
      node.children.insert(node.children.begin() + at + 1, std::move(split->right));
    }
    if (node.keys.size() <= 2 * B_) return std::nullopt;

    // 2B + 1 keys: left keeps B, the median moves up, right takes B.
    auto right = std::make_unique<Node>();
    const auto mid = static_cast<std::ptrdiff_t>(B_);
    Split split{node.keys[B_], node.values[B_], nullptr};
    right->keys.assign(node.keys.begin() + mid + 1, node.keys.end());
    right->values.assign(node.values.begin() + mid + 1, node.values.end());
    node.keys.resize(B_);
    node.values.resize(B_);
    if (!node.leaf()) {
      for (auto it = node.children.begin() + mid + 1; it != node.children.end(); ++it) {
        right->children.push_back(std::move(*it));
      }
      node.children.resize(B_ + 1);
    }
    split.right = std::move(right);
    return split;
  }

  bool erase(Node& node, Key key) {
    ++stats_.nodes_visited;
    const std::size_t i = lower(node, key);
    const bool here = i < node.keys.size() && node.keys[i] == key;
    if (node.leaf()) {
      if (!here) return false;
      node.keys.erase(node.keys.begin() + static_cast<std::ptrdiff_t>(i));
      node.values.erase(node.values.begin() + static_cast<std::ptrdiff_t>(i));
      return true;
    }
    bool erased = false;
    if (here) {
      // Replace with the predecessor, then remove it from the left subtree.
      auto [pk, pv] = take_max(*node.children[i]);
      node.keys[i] = pk;
      node.values[i] = pv;
      erased = true;
    } else {
      erased = erase(*node.children[i], key);
    }
    if (node.children[i]->keys.size() < B_) fix_underflow(node, i);
    return erased;
  }

  std::pair<Key, Value> take_max(Node& node) {
    ++stats_.nodes_visited;
    if (node.leaf()) {
      std::pair<Key, Value> out{node.keys.back(), node.values.back()};
      node.keys.pop_back();
      node.values.pop_back();
      return out;
    }
    const std::size_t i = node.children.size() - 1;
    auto out = take_max(*node.children[i]);
    if (node.children[i]->keys.size() < B_) fix_underflow(node, i);
    return out;
  }

  void fix_underflow(Node& parent, std::size_t i) {
    Node& child = *parent.children[i];
    if (i > 0 && parent.children[i - 1]->keys.size() > B_) {
      Node& left = *parent.children[i - 1];
      child.keys.insert(child.keys.begin(), parent.keys[i - 1]);
      child.values.insert(child.values.begin(), parent.values[i - 1]);
      parent.keys[i - 1] = left.keys.back();
      parent.values[i - 1] = left.values.back();
      left.keys.pop_back();
      left.values.pop_back();
      if (!left.leaf()) {
        child.children.insert(child.children.begin(), std::move(left.children.back()));
        left.children.pop_back();
      }
      return;
    }
    if (i + 1 < parent.children.size() && parent.children[i + 1]->keys.size() > B_) {
      Node& right = *parent.children[i + 1];
      child.keys.push_back(parent.keys[i]);
      child.values.push_back(parent.values[i]);
      parent.keys[i] = right.keys.front();
      parent.values[i] = right.values.front();
      right.keys.erase(right.keys.begin());
      right.values.erase(right.values.begin());
      if (!right.leaf()) {
        child.children.push_back(std::move(right.children.front()));
        right.children.erase(right.children.begin());
      }
      return;
    }
    merge(parent, i > 0 ? i - 1 : i);
  }

  // Merges children j and j+1 around separator j.
  static void merge(Node& parent, std::size_t j) {
    Node& left = *parent.children[j];
    Node& right = *parent.children[j + 1];
    left.keys.push_back(parent.keys[j]);
    left.values.push_back(parent.values[j]);
    left.keys.insert(left.keys.end(), right.keys.begin(), right.keys.end());
    left.values.insert(left.values.end(), right.values.begin(), right.values.end());
    for (auto& c : right.children) left.children.push_back(std::move(c));
    const auto at = static_cast<std::ptrdiff_t>(j);
    parent.keys.erase(parent.keys.begin() + at);
    parent.values.erase(parent.values.begin() + at);
    parent.children.erase(parent.children.begin() + at + 1);
  }

  bool check(const Node& node, bool is_root, std::size_t depth, std::size_t& leaf_depth,
             const Key* lo, const Key* hi, std::size_t& count) const {
    const std::size_t k = node.keys.size();
    if (k > 2 * B_ || (!is_root && k < B_) || k == 0) return false;
    if (node.values.size() != k) return false;
    for (std::size_t i = 0; i < k; ++i) {
      if (i > 0 && node.keys[i - 1] >= node.keys[i]) return false;
      if ((lo && node.keys[i] <= *lo) || (hi && node.keys[i] >= *hi)) return false;
    }
    count += k;
    if (node.leaf()) {
      if (leaf_depth == 0) leaf_depth = depth;
      return leaf_depth == depth;
    }
    if (node.children.size() != k + 1) return false;
    for (std::size_t i = 0; i <= k; ++i) {
      const Key* clo = i == 0 ? lo : &node.keys[i - 1];
      const Key* chi = i == k ? hi : &node.keys[i];
      if (!check(*node.children[i], false, depth + 1, leaf_depth, clo, chi, count)) return false;
    }
    return true;
  }

  std::size_t B_;
  std::unique_ptr<Node> root_;
  std::size_t size_ = 0;
  OpStats stats_;
};

}  // namespace gsat::baselines
