#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace pathent {

/// Neumaier (improved Kahan-Babuska) running sum.
class CompensatedSum {
public:
  constexpr CompensatedSum& operator+=(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
    return *this;
  }
  constexpr double value() const noexcept { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> values) noexcept {
  CompensatedSum acc;
  for (double v : values) acc += v;
  return acc.value();
}

/// Maps one 64-bit draw to the open interval (0, 1) using the top 53 bits.
/// Unlike std::uniform_real_distribution the result is identical on every
/// standard library, which keeps seeded output reproducible.
inline double open_unit_uniform(std::mt19937_64& gen) {
  const std::uint64_t bits = gen() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace pathent
