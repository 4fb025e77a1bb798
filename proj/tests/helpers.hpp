#ifndef DVS_TESTS_HELPERS_HPP
#define DVS_TESTS_HELPERS_HPP

#include <string>
#include <vector>

#include "dvs/model.hpp"

namespace dvs::test {

inline Rational dec(const std::string& s) { return rational_from_string(s); }

inline Rational frac(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

template <class N>
JobSet<N> jobs(std::initializer_list<Job<N>> list) {
  return JobSet<N>(std::vector<Job<N>>(list));
}

template <class N>
bool same_segments(const std::vector<Segment<N>>& a, const std::vector<Segment<N>>& b) {
  std::vector<Segment<N>> ca = coalesce_segments(a);
  std::vector<Segment<N>> cb = coalesce_segments(b);
  if (ca.size() != cb.size()) return false;
  for (std::size_t i = 0; i < ca.size(); ++i)
    if (!(ca[i].start == cb[i].start && ca[i].end == cb[i].end &&
          ca[i].speed == cb[i].speed && ca[i].job == cb[i].job))
      return false;
  return true;
}

}  // namespace dvs::test

#endif
