#include "rhfluid/tail.hpp"

#include <algorithm>

namespace rhfluid {

Tail::Tail(std::span<const double> values) : v_(values.size() + 2, 0.0) {
  std::copy(values.begin(), values.end(), v_.begin() + 1);
}

std::size_t Tail::support() const noexcept {
  for (std::size_t i = depth(); i >= 1; --i) {
    if (v_[i] > 0.0) return i;
  }
  return 0;
}

bool Tail::is_non_increasing(double slack) const noexcept {
  for (std::size_t i = 1; i < depth(); ++i) {
    if (v_[i + 1] > v_[i] + slack) return false;
  }
  return depth() == 0 || (v_[1] <= 1.0 + slack && v_[depth()] >= -slack);
}

}  // namespace rhfluid
