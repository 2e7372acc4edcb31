#pragma once

#include <vector>

#include "segrelab/error.hpp"
#include "segrelab/incidence.hpp"

namespace segrelab {

inline constexpr int kHyperplaneEnumerationCap = 40;

namespace detail {

// Backtracking over in/out assignments with unit propagation of the rule
// "every line meets X in exactly one or all of its points".
class HyperplaneSearch {
 public:
  explicit HyperplaneSearch(const IncidenceStructure& s)
      : s_(s), state_(s.num_points(), kUnknown), in_(s.num_lines(), 0), out_(s.num_lines(), 0) {}

  std::vector<PointSet> run() {
    branch();
    return std::move(found_);
  }

 private:
  static constexpr signed char kUnknown = -1;

  bool assign(int a, signed char v) {
    if (state_[a] != kUnknown) return state_[a] == v;
    state_[a] = v;
    trail_.push_back(a);
    for (int l : s_.lines_through(a)) {
      (v ? in_[l] : out_[l])++;
      queue_.push_back(l);
    }
    return true;
  }

  bool propagate() {
    while (!queue_.empty()) {
      const int l = queue_.back();
      queue_.pop_back();
      const int size = static_cast<int>(s_.line(l).size());
      const int in = in_[l], out = out_[l];
      if (out == size) return false;
      if (in >= 2 && out > 0) return false;
      if (in >= 2) {
        for (int b : s_.line(l))
          if (!assign(b, 1)) return false;
      } else if (in == 1 && out > 0) {
        for (int b : s_.line(l))
          if (state_[b] == kUnknown && !assign(b, 0)) return false;
      } else if (in == 0 && out == size - 1) {
        for (int b : s_.line(l))
          if (state_[b] == kUnknown && !assign(b, 1)) return false;
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const int a = trail_.back();
      trail_.pop_back();
      for (int l : s_.lines_through(a)) (state_[a] ? in_[l] : out_[l])--;
      state_[a] = kUnknown;
    }
    queue_.clear();
  }

  void branch() {
    int next = -1;
    for (int a = 0; a < s_.num_points(); ++a)
      if (state_[a] == kUnknown) {
        next = a;
        break;
      }
    if (next < 0) {
      PointSet x;
      bool proper = false;
      for (int a = 0; a < s_.num_points(); ++a) {
        if (state_[a])
          x.push_back(a);
        else
          proper = true;
      }
      if (proper) found_.push_back(std::move(x));
      return;
    }
    for (signed char v : {static_cast<signed char>(1), static_cast<signed char>(0)}) {
      const std::size_t mark = trail_.size();
      if (assign(next, v) && propagate()) branch();
      undo(mark);
    }
  }

  const IncidenceStructure& s_;
  std::vector<signed char> state_;
  std::vector<int> in_, out_;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<PointSet> found_;
};

}  // namespace detail

/// All hyperplanes of a small structure, sorted lexicographically.
inline std::vector<PointSet> enumerate_hyperplanes(const IncidenceStructure& s, int cap = kHyperplaneEnumerationCap) {
  if (s.num_points() > cap)
    fail(ErrorKind::CapExceeded, "hyperplane enumeration is limited to " + std::to_string(cap) + " points");
  auto out = detail::HyperplaneSearch(s).run();
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace segrelab
