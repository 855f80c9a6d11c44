#pragma once

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "invh/interp.hpp"

namespace invh::detail {

/// Interned (pc, state) pairs with BFS parent links. Entries are stored in
/// one flat array; the hash set holds indices into it.
class ConfigTable {
 public:
  static constexpr std::uint32_t kNoParent = UINT32_MAX;

  explicit ConfigTable(std::size_t vars)
      : stride_(vars + 1), set_(64, Hash{this}, Eq{this}) {}

  /// Returns the entry index and whether it was newly inserted.
  std::pair<std::uint32_t, bool> insert(Position pc, std::span<const Value> state,
                                        std::uint32_t parent) {
    const auto idx = static_cast<std::uint32_t>(parents_.size());
    data_.push_back(pc.index);
    data_.insert(data_.end(), state.begin(), state.end());
    parents_.push_back(parent);
    auto [it, inserted] = set_.insert(idx);
    if (!inserted) {
      data_.resize(data_.size() - stride_);
      parents_.pop_back();
      return {*it, false};
    }
    return {idx, true};
  }

  std::size_t size() const { return parents_.size(); }
  Position pc(std::uint32_t i) const { return Position{data_[i * stride_]}; }
  std::span<const Value> state(std::uint32_t i) const {
    return {data_.data() + i * stride_ + 1, stride_ - 1};
  }
  std::uint32_t parent(std::uint32_t i) const { return parents_[i]; }

  std::vector<Configuration> path_to(std::uint32_t i) const {
    std::vector<Configuration> out;
    for (std::uint32_t k = i; k != kNoParent; k = parents_[k]) {
      auto s = state(k);
      out.push_back(Configuration{pc(k), State(s.begin(), s.end())});
    }
    return {out.rbegin(), out.rend()};
  }

 private:
  struct Hash {
    const ConfigTable* t;
    std::size_t operator()(std::uint32_t i) const {
      std::uint64_t h = 1469598103934665603ULL;
      const Value* p = t->data_.data() + i * t->stride_;
      for (std::size_t k = 0; k < t->stride_; ++k) {
        h ^= p[k];
        h *= 1099511628211ULL;
      }
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };
  struct Eq {
    const ConfigTable* t;
    bool operator()(std::uint32_t a, std::uint32_t b) const {
      const Value* pa = t->data_.data() + a * t->stride_;
      const Value* pb = t->data_.data() + b * t->stride_;
      for (std::size_t k = 0; k < t->stride_; ++k) {
        if (pa[k] != pb[k]) return false;
      }
      return true;
    }
  };

  std::size_t stride_;
  std::vector<Value> data_;
  std::vector<std::uint32_t> parents_;
  std::unordered_set<std::uint32_t, Hash, Eq> set_;
};

}  // namespace invh::detail
