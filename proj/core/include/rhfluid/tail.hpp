#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <vector>

namespace rhfluid {

// Age -> fraction, ordered by age.
using AgeFractions = std::map<std::uint32_t, double>;

/// Tail fractions t_1 >= t_2 >= ... >= t_K: t_i is the fraction of cells
/// holding an entry of age at least i. Indexing is 1-based; ages beyond the
/// stored depth read as 0.
class Tail {
 public:
  Tail() : v_(2, 0.0) {}
  explicit Tail(std::size_t depth) : v_(depth + 2, 0.0) {}
  // values[0] is the tail at age 1.
  explicit Tail(std::span<const double> values);
  static Tail of(std::initializer_list<double> values) {
    return Tail(std::span<const double>(values.begin(), values.size()));
  }

  std::size_t depth() const noexcept { return v_.size() - 2; }

  double operator()(std::size_t age) const noexcept {
    return age >= 1 && age < v_.size() ? v_[age] : 0.0;
  }
  double& operator[](std::size_t age) noexcept { return v_[age]; }
  double operator[](std::size_t age) const noexcept { return v_[age]; }

  std::span<const double> values() const noexcept { return {v_.data() + 1, depth()}; }

  // Padded storage: [0] unused, [1..depth] values, [depth + 1] == 0.
  double* padded() noexcept { return v_.data(); }
  const double* padded() const noexcept { return v_.data(); }

  void resize(std::size_t depth) { v_.resize(depth + 2, 0.0); v_.back() = 0.0; }

  // Largest age with a positive value, 0 if none.
  std::size_t support() const noexcept;

  bool is_non_increasing(double slack = 0.0) const noexcept;

  friend bool operator==(const Tail&, const Tail&) = default;

 private:
  std::vector<double> v_;
};

}  // namespace rhfluid
