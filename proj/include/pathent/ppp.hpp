#pragma once

// Independent event pairs on an equiprobable sample space of n points.
// Events of sizes x and y with an intersection of size z are independent
// exactly when n z = x y. The trivial events (empty set, whole space) are
// excluded by requiring 1 <= x, y, z <= n-1 and z strictly below both x and y.

#include <pathent/error.hpp>

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

namespace pathent::ppp {

struct Triple {
  std::int64_t x = 0;
  std::int64_t y = 0;
  std::int64_t z = 0;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

struct PppSolution {
  std::int64_t n = 0;
  std::vector<Triple> triples;  // lexicographic in (x, y, z)
};

/// All (x, y, z) with n z = x y, 1 <= x, y <= n-1, z < x and z < y.
///
/// For a fixed x, n | x y iff y is a multiple of n / gcd(n, x), so only those
/// y are visited. z < x and z < y then follow from x, y < n, and z >= 1 from
/// x y >= n.
inline PppSolution independent_event_triples(std::int64_t n) {
  if (n < 2) throw DomainError("independent_event_triples requires n >= 2");
  PppSolution out;
  out.n = n;
  for (std::int64_t x = 1; x < n; ++x) {
    const std::int64_t step = n / std::gcd(n, x);
    for (std::int64_t y = step; y < n; y += step) {
      out.triples.push_back({x, y, x * y / n});
    }
  }
  return out;
}

inline bool has_independent_events(std::int64_t n) {
  return !independent_event_triples(n).triples.empty();
}

/// (n, number of triples) for n = 2, ..., n_max.
inline std::vector<std::pair<std::int64_t, std::int64_t>> scan(std::int64_t n_max) {
  if (n_max < 2) throw DomainError("scan requires n_max >= 2");
  std::vector<std::pair<std::int64_t, std::int64_t>> rows;
  rows.reserve(static_cast<std::size_t>(n_max - 1));
  for (std::int64_t n = 2; n <= n_max; ++n) {
    rows.emplace_back(n, static_cast<std::int64_t>(independent_event_triples(n).triples.size()));
  }
  return rows;
}

}  // namespace pathent::ppp
