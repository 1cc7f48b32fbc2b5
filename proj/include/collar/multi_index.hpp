#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace collar {

// A multi-index is a nondecreasing tuple of 0-based variable ids. Lookup of
// mixed partials is invariant under permutation of the tuple, so we sort on
// construction and treat the tuple as the canonical representative.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
  }
  MultiIndex(std::initializer_list<int> entries)
      : MultiIndex(std::vector<int>(entries)) {}

  int length() const { return static_cast<int>(entries_.size()); }
  const std::vector<int>& entries() const { return entries_; }
  int operator[](int i) const { return entries_[i]; }

  bool contains(int var) const {
    return std::binary_search(entries_.begin(), entries_.end(), var);
  }

  // Exponent vector over `dim` variables (counts of each id).
  std::vector<int> exponents(int dim) const {
    std::vector<int> e(dim, 0);
    for (int v : entries_) ++e[v];
    return e;
  }

  MultiIndex appended(int var, int count = 1) const {
    std::vector<int> e = entries_;
    for (int i = 0; i < count; ++i) e.push_back(var);
    return MultiIndex(std::move(e));
  }

  bool operator==(const MultiIndex& o) const { return entries_ == o.entries_; }

 private:
  std::vector<int> entries_;
};

// All nondecreasing tuples of length `len` over variable ids {0,...,vars-1}.
// Each unordered combination (with repeats) appears exactly once.
std::vector<MultiIndex> increasing_multi_indices(int vars, int len);

// Position subsets of a multi-index: the paper treats I as a function on k
// ordered slots, so a sub-multi-index is a subset of slots. enumerate_subsets
// yields every (J, I\J) split with |J| = subset_size, counted with slot
// multiplicity.
std::vector<std::pair<MultiIndex, MultiIndex>> slot_subsets(const MultiIndex& index,
                                                            int subset_size);

double factorial(int n);

// Product of factorials of exponent counts; converts between Taylor
// coefficients and mixed partials.
double exponent_factorial(const std::vector<int>& exps);

}  // namespace collar
