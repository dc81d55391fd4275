#include "crcs/isotonic.hpp"

#include <cassert>
#include <stdexcept>

namespace crcs {
namespace {

struct Block {
  double weighted_sum;
  double weight;
  std::size_t count;  // positive-weight entries pooled in this block
  double mean() const { return weighted_sum / weight; }
};

// sums[i] = w[i] * y[i]; pooling on the sums keeps ratio data exact.
std::vector<double> pool_adjacent_violators(std::span<const double> sums, std::span<const double> w) {
  std::vector<Block> blocks;
  blocks.reserve(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (!(w[i] > 0.0)) continue;
    blocks.push_back({sums[i], w[i], 1});
    // Pool while the previous block does not lie strictly below.
    while (blocks.size() > 1) {
      Block& last = blocks.back();
      Block& prev = blocks[blocks.size() - 2];
      if (prev.weighted_sum * last.weight < last.weighted_sum * prev.weight) break;
      prev.weighted_sum += last.weighted_sum;
      prev.weight += last.weight;
      prev.count += last.count;
      blocks.pop_back();
    }
  }

  std::vector<double> out(sums.size(), 0.0);
  std::size_t b = 0;
  std::size_t used = 0;  // positive-weight entries consumed in block b
  double current = 0.0;
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (w[i] > 0.0) {
      assert(b < blocks.size());
      current = blocks[b].mean();
      if (++used == blocks[b].count) {
        ++b;
        used = 0;
      }
    }
    out[i] = current;
  }
  return out;
}

}  // namespace

std::vector<double> isotonic_regression(std::span<const double> y, std::span<const double> w) {
  if (y.size() != w.size()) throw std::invalid_argument("isotonic_regression: size mismatch");
  std::vector<double> sums(y.size(), 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) sums[i] = w[i] * y[i];
  return pool_adjacent_violators(sums, w);
}

std::vector<double> isotonic_ratio(std::span<const double> num, std::span<const double> den) {
  if (num.size() != den.size()) throw std::invalid_argument("isotonic_ratio: size mismatch");
  return pool_adjacent_violators(num, den);
}

}  // namespace crcs
