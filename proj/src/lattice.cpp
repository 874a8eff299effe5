#include "nctorus/lattice.hpp"

#include <stdexcept>

namespace nctorus {

LatticeWindow::LatticeWindow(int half_width) : half_width_(half_width) {
  if (half_width < 1) {
    throw std::invalid_argument("window half-width must be positive");
  }
}

bool LatticeWindow::contains(Mode n) const {
  return std::abs(n.n1) <= half_width_ && std::abs(n.n2) <= half_width_;
}

int LatticeWindow::index(Mode n) const {
  if (!contains(n)) {
    throw std::out_of_range("mode outside lattice window");
  }
  return (n.n1 + half_width_) * side() + (n.n2 + half_width_);
}

Mode LatticeWindow::mode(int index) const {
  if (index < 0 || index >= dim()) {
    throw std::out_of_range("index outside lattice window");
  }
  return Mode{index / side() - half_width_, index % side() - half_width_};
}

bool LatticeWindow::interior(Mode n, int margin) const {
  return std::abs(n.n1) <= half_width_ - margin && std::abs(n.n2) <= half_width_ - margin;
}

}  // namespace nctorus
