#pragma once

#include <cstdint>
#include <queue>
#include <span>
#include <vector>

#include "morphgen/errors.hpp"
#include "morphgen/numeric.hpp"
#include "morphgen/rng.hpp"

namespace morphgen {

// Walker alias method for categorical sampling: O(n) build, O(1) draw.
// Weights may carry any positive scale; they are normalized internally.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights) {
    const std::size_t n = weights.size();
    if (n == 0) throw ValidationError("AliasTable: empty weight vector");
    const double total = neumaier_sum(weights);
    if (!(total > 0.0)) throw ValidationError("AliasTable: weights must sum > 0");

    threshold_.resize(n);
    alias_.assign(n, 0);
    std::queue<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
      if (weights[i] < 0.0) throw ValidationError("AliasTable: negative weight");
      threshold_[i] = weights[i] * static_cast<double>(n) / total;
      alias_[i] = static_cast<std::uint32_t>(i);
      if (threshold_[i] < 1.0) {
        small.push(static_cast<std::uint32_t>(i));
      } else {
        large.push(static_cast<std::uint32_t>(i));
      }
    }
    while (!small.empty() && !large.empty()) {
      const std::uint32_t s = small.front();
      const std::uint32_t l = large.front();
      small.pop();
      large.pop();
      alias_[s] = l;
      threshold_[l] -= 1.0 - threshold_[s];
      if (threshold_[l] < 1.0) {
        small.push(l);
      } else {
        large.push(l);
      }
    }
    // Residual buckets hold probability 1 up to rounding.
    while (!large.empty()) {
      threshold_[large.front()] = 1.0;
      large.pop();
    }
    while (!small.empty()) {
      threshold_[small.front()] = 1.0;
      small.pop();
    }
  }

  // Consumes one bounded draw and one unit draw.
  std::uint32_t sample(Rng& rng) const {
    const std::uint32_t i = rng.next_below(static_cast<std::uint32_t>(threshold_.size()));
    return rng.next_unit() < threshold_[i] ? i : alias_[i];
  }

  std::size_t size() const { return threshold_.size(); }

 private:
  std::vector<double> threshold_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace morphgen
