#pragma once

#include "nctorus/torus_element.hpp"

namespace nctorus {

/// Square truncation window |n1|, |n2| <= N of the mode lattice, with the
/// fixed row-major enumeration index = (n1 + N) * (2N + 1) + (n2 + N).
/// The ordering is part of the file-format contract: serialized matrices are
/// reproducible bit for bit.
class LatticeWindow {
 public:
  explicit LatticeWindow(int half_width);

  int half_width() const { return half_width_; }
  int side() const { return 2 * half_width_ + 1; }
  int dim() const { return side() * side(); }

  bool contains(Mode n) const;
  int index(Mode n) const;
  Mode mode(int index) const;

  /// Chebyshev distance to the window boundary is at least `margin`.
  bool interior(Mode n, int margin) const;

  friend bool operator==(const LatticeWindow& a, const LatticeWindow& b) {
    return a.half_width_ == b.half_width_;
  }

 private:
  int half_width_;
};

}  // namespace nctorus
