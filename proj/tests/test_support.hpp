#pragma once

#include <random>

#include "pmrig/holomap.hpp"

namespace pmrig::testing {

inline Complex random_point(std::mt19937& rng, double r_max) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(r_max * std::sqrt(u(rng)), 2 * kPi * u(rng));
}

/// Random self-map of the disk built from certified pieces.
inline HoloMap random_selfmap(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (pick(rng)) {
    case 0: return HoloMap::automorphism(random_point(rng, 0.9), 2 * kPi * u(rng));
    case 1: {
      std::vector<Complex> zeros(1 + rng() % 3);
      for (auto& a : zeros) a = random_point(rng, 0.9);
      return HoloMap::blaschke(std::move(zeros), 2 * kPi * u(rng));
    }
    case 2: return maps::power(1 + static_cast<int>(rng() % 3));
    case 3: return maps::f_epsilon(0.25 * u(rng));
    case 4: return HoloMap::compose(random_selfmap(rng, depth - 1), random_selfmap(rng, depth - 1));
    default:
      return HoloMap::scale(std::polar(0.5 + 0.5 * u(rng), 2 * kPi * u(rng)), random_selfmap(rng, depth - 1));
  }
}

}  // namespace pmrig::testing
