#ifndef DVS_INTERVAL_UNION_FIND_HPP
#define DVS_INTERVAL_UNION_FIND_HPP

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace dvs {

// Partition of {1..count} into contiguous integer ranges. Each set is named
// by its largest element, and sets can only be merged with their successor
// range. Union-by-size with path compression; an explicit root -> maximum
// table keeps the naming contract independent of the union heuristic.
//
// find() and the one lookup union_with_next() needs to locate the successor
// set are counted; callers assert the count bounds of the s-schedule driver.
class IntervalUnionFind {
 public:
  explicit IntervalUnionFind(std::size_t count) {
    if (count < 1)
      throw std::invalid_argument("interval union-find needs at least one element");
    count_ = count;
    parent_.resize(count + 1);
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    size_.assign(count + 1, 1);
    max_of_root_.resize(count + 1);
    std::iota(max_of_root_.begin(), max_of_root_.end(), std::size_t{0});
  }

  std::size_t size() const { return count_; }

  // Name (largest element) of the set containing i.
  std::size_t find(std::size_t i) {
    check_index(i);
    ++finds_;
    return max_of_root_[find_root(i)];
  }

  // Merges the set named p with the set containing p+1. The merged set takes
  // the successor set's name, which is returned. Locating the successor set
  // costs one counted find; the set containing p needs none since p names it.
  std::size_t union_with_next(std::size_t p) {
    check_index(p);
    std::size_t left_root = find_root(p);
    if (max_of_root_[left_root] != p)
      throw std::invalid_argument("union_with_next: " + std::to_string(p) +
                                  " is not a current set name");
    if (p == count_)
      throw std::invalid_argument("union_with_next: no successor set beyond " +
                                  std::to_string(p));
    ++finds_;
    std::size_t right_root = find_root(p + 1);
    std::size_t name = max_of_root_[right_root];
    if (size_[left_root] < size_[right_root]) std::swap(left_root, right_root);
    parent_[right_root] = left_root;
    size_[left_root] += size_[right_root];
    max_of_root_[left_root] = name;
    ++unions_;
    return name;
  }

  // Uncounted validation helper.
  bool is_name(std::size_t p) {
    if (p < 1 || p > count_) return false;
    return max_of_root_[find_root(p)] == p;
  }

  std::uint64_t finds() const { return finds_; }
  std::uint64_t unions() const { return unions_; }

  void reset_counters() {
    finds_ = 0;
    unions_ = 0;
  }

 private:
  void check_index(std::size_t i) const {
    if (i < 1 || i > count_)
      throw std::invalid_argument("union-find index " + std::to_string(i) +
                                  " outside 1.." + std::to_string(count_));
  }

  std::size_t find_root(std::size_t i) {
    std::size_t root = i;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[i] != root) {
      std::size_t next = parent_[i];
      parent_[i] = root;
      i = next;
    }
    return root;
  }

  std::size_t count_ = 0;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::size_t> max_of_root_;
  std::uint64_t finds_ = 0;
  std::uint64_t unions_ = 0;
};

}  // namespace dvs

#endif  // DVS_INTERVAL_UNION_FIND_HPP
