#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gsat/types.hpp"

namespace gsat::baselines {

/// Bottom-up splay tree. Every operation splays the last node it touched,
/// including unsuccessful searches.
class SplayTree {
 public:
  SplayTree() = default;
  SplayTree(const SplayTree&) = delete;
  SplayTree& operator=(const SplayTree&) = delete;
  SplayTree(SplayTree&& other) noexcept : root_(other.root_), size_(other.size_), stats_(other.stats_) {
    other.root_ = nullptr;
    other.size_ = 0;
  }
  ~SplayTree() { destroy(root_); }

  std::optional<Value> get(Key key) {
    Node* x = find(key);
    if (x == nullptr || x->key != key) return std::nullopt;
    return x->value;
  }

  /// Adds the pair unless the key is already present.
  bool insert(Key key, Value value) {
    Node* x = find(key);
    if (x != nullptr && x->key == key) return false;
    Node* n = new Node{key, value};
    if (x == nullptr) {
      root_ = n;
    } else {
      // x is the root now; split it around the new key.
      if (key < x->key) {
        n->left = x->left;
        n->right = x;
        x->left = nullptr;
      } else {
        n->right = x->right;
        n->left = x;
        x->right = nullptr;
      }
      if (n->left) n->left->parent = n;
      if (n->right) n->right->parent = n;
      root_ = n;
    }
    ++size_;
    return true;
  }

  bool erase(Key key) {
    Node* x = find(key);
    if (x == nullptr || x->key != key) return false;
    Node* l = x->left;
    Node* r = x->right;
    delete x;
    --size_;
    if (l) l->parent = nullptr;
    if (r) r->parent = nullptr;
    if (l == nullptr) {
      root_ = r;
      return true;
    }
    // Splay the maximum of the left part to its root, then hang r off it.
    root_ = l;
    Node* m = l;
    while (m->right) m = m->right;
    splay(m);
    m->right = r;
    if (r) r->parent = m;
    return true;
  }

  std::size_t size() const { return size_; }
  Key root_key() const {
    if (root_ == nullptr) throw contract_violation("splay tree is empty");
    return root_->key;
  }
  const OpStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

  std::size_t height() const { return height(root_); }

  std::vector<Key> keys() const {
    std::vector<Key> out;
    out.reserve(size_);
    std::vector<const Node*> stack;
    for (const Node* x = root_; x != nullptr || !stack.empty();) {
      if (x != nullptr) {
        stack.push_back(x);
        x = x->left;
      } else {
        x = stack.back();
        stack.pop_back();
        out.push_back(x->key);
        x = x->right;
      }
    }
    return out;
  }

 private:
  struct Node {
    Key key;
    Value value;
    Node* left = nullptr;
    Node* right = nullptr;
    Node* parent = nullptr;
  };

  // Descends to the key or the last node on its search path and splays it.
  Node* find(Key key) {
    Node* x = root_;
    Node* last = nullptr;
    while (x != nullptr) {
      ++stats_.nodes_visited;
      last = x;
      if (key == x->key) break;
      x = key < x->key ? x->left : x->right;
    }
    if (last != nullptr) splay(last);
    return last;
  }

  void rotate(Node* x) {
    Node* p = x->parent;
    Node* g = p->parent;
    if (p->left == x) {
      p->left = x->right;
      if (x->right) x->right->parent = p;
      x->right = p;
    } else {
      p->right = x->left;
      if (x->left) x->left->parent = p;
      x->left = p;
    }
    p->parent = x;
    x->parent = g;
    if (g == nullptr) {
      root_ = x;
    } else if (g->left == p) {
      g->left = x;
    } else {
      g->right = x;
    }
  }

  void splay(Node* x) {
    while (Node* p = x->parent) {
      Node* g = p->parent;
      if (g != nullptr) rotate((g->left == p) == (p->left == x) ? p : x);
      rotate(x);
    }
  }

  // Iterative: splay trees can degenerate into long paths.
  static std::size_t height(const Node* root) {
    std::size_t h = 0;
    std::vector<std::pair<const Node*, std::size_t>> stack;
    if (root) stack.emplace_back(root, 1);
    while (!stack.empty()) {
      const auto [x, d] = stack.back();
      stack.pop_back();
      h = d > h ? d : h;
      if (x->left) stack.emplace_back(x->left, d + 1);
      if (x->right) stack.emplace_back(x->right, d + 1);
    }
    return h;
  }

  static void destroy(Node* x) {
    std::vector<Node*> stack;
    if (x) stack.push_back(x);
    while (!stack.empty()) {
      Node* n = stack.back();
      stack.pop_back();
      if (n->left) stack.push_back(n->left);
      if (n->right) stack.push_back(n->right);
      delete n;
    }
  }

  Node* root_ = nullptr;
  std::size_t size_ = 0;
  OpStats stats_;
};

}  // namespace gsat::baselines
