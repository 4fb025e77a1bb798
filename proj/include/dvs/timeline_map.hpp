#ifndef DVS_TIMELINE_MAP_HPP
#define DVS_TIMELINE_MAP_HPP

#include <algorithm>
#include <vector>

#include "dvs/model.hpp"

namespace dvs {

// Order-preserving correspondence between a parent timeline and the
// compressed timeline obtained by collapsing a set of excised parent
// intervals to points. Supports forward point mapping (parent to
// compressed), backward segment mapping (compressed to parent, splitting a
// segment wherever it spans a collapse point), and incremental excision
// expressed in compressed coordinates.
template <class N>
class TimelineMap {
 public:
  TimelineMap() = default;

  // Batch construction from disjoint parent-coordinate intervals.
  explicit TimelineMap(std::vector<Interval<N>> excised_parent) {
    std::sort(excised_parent.begin(), excised_parent.end(),
              [](const Interval<N>& a, const Interval<N>& b) { return a.lo < b.lo; });
    for (const Interval<N>& e : excised_parent) {
      if (!(e.lo < e.hi)) continue;
      if (!excised_.empty() && e.lo <= excised_.back().hi)
        excised_.back().hi = std::max(excised_.back().hi, e.hi);
      else
        excised_.push_back(e);
    }
    rebuild();
  }

  bool identity() const { return excised_.empty(); }
  const std::vector<Interval<N>>& excised() const { return excised_; }

  // Parent coordinate -> compressed coordinate. Points inside an excised
  // interval land on its collapse point.
  N to_compressed(const N& x) const {
    std::size_t k = 0;
    for (; k < excised_.size(); ++k) {
      if (x <= excised_[k].lo) break;
      if (x <= excised_[k].hi) return collapse_[k];
    }
    return k == 0 ? x : x - removed_before_[k - 1];
  }

  // Compressed coordinate -> parent coordinate, resolving collapse points to
  // the right edge of their excision.
  N to_parent(const N& x) const {
    std::size_t k = count_collapses_at_or_before(x);
    return k == 0 ? x : x + removed_before_[k - 1];
  }

  // Maps a compressed-coordinate segment back to the parent timeline,
  // splitting it at every interior collapse point. Pieces of negligible
  // length (float fuzz at a collapse boundary) are dropped.
  void map_segment_to_parent(const Segment<N>& seg, std::vector<Segment<N>>& out) const {
    N cursor = seg.start;
    std::size_t k = count_collapses_at_or_before(cursor);
    while (k < collapse_.size() && collapse_[k] < seg.end) {
      if (arith<N>::lt(cursor, collapse_[k]))
        out.push_back({to_parent_at(cursor, k), to_parent_at(collapse_[k], k),
                       seg.speed, seg.job});
      cursor = collapse_[k];
      ++k;
    }
    if (arith<N>::lt(cursor, seg.end))
      out.push_back({to_parent_at(cursor, k), to_parent_at(seg.end, k), seg.speed, seg.job});
  }

  std::vector<Segment<N>> map_segments_to_parent(const std::vector<Segment<N>>& segs) const {
    std::vector<Segment<N>> out;
    out.reserve(segs.size());
    for (const Segment<N>& s : segs) map_segment_to_parent(s, out);
    return out;
  }

  // Removes [lo, hi) of the *compressed* timeline, folding it into the
  // excision set in parent coordinates.
  void excise_compressed(const Interval<N>& span) {
    if (!(span.lo < span.hi)) return;
    std::vector<Segment<N>> pieces;
    map_segment_to_parent({span.lo, span.hi, N(0), kIdleJob}, pieces);
    for (const Segment<N>& piece : pieces) {
      Interval<N> add{piece.start, piece.end};
      auto it = std::lower_bound(
          excised_.begin(), excised_.end(), add,
          [](const Interval<N>& a, const Interval<N>& b) { return a.lo < b.lo; });
      it = excised_.insert(it, add);
      // Merge with touching neighbours.
      if (it != excised_.begin() && std::prev(it)->hi >= it->lo) {
        std::prev(it)->hi = std::max(std::prev(it)->hi, it->hi);
        it = excised_.erase(it);
        it = std::prev(it);
      }
      while (std::next(it) != excised_.end() && it->hi >= std::next(it)->lo) {
        it->hi = std::max(it->hi, std::next(it)->hi);
        excised_.erase(std::next(it));
      }
    }
    rebuild();
  }

 private:
  N to_parent_at(const N& x, std::size_t k) const {
    return k == 0 ? x : x + removed_before_[k - 1];
  }

  std::size_t count_collapses_at_or_before(const N& x) const {
    return std::upper_bound(collapse_.begin(), collapse_.end(), x) - collapse_.begin();
  }

  void rebuild() {
    collapse_.clear();
    removed_before_.clear();
    N total(0);
    for (const Interval<N>& e : excised_) {
      collapse_.push_back(e.lo - total);
      total += e.length();
      removed_before_.push_back(total);
    }
  }

  std::vector<Interval<N>> excised_;   // parent coords, disjoint, sorted
  std::vector<N> collapse_;            // compressed position of each excision
  std::vector<N> removed_before_;     // cumulative excised length
};

}  // namespace dvs

#endif  // DVS_TIMELINE_MAP_HPP
