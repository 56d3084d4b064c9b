// Derivative-free minimization (Nelder-Mead simplex, GSL nmsimplex2) with
// an evaluation budget and simplex re-initialisation on stagnation.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace naimark_lab {

using Objective = std::function<double(std::span<const double>)>;

struct SimplexOptions {
  int budget = 5000;          // objective evaluations
  double target = 0.0;        // stop as soon as f <= target
  double initial_step = 0.5;
  double min_size = 1e-13;    // simplex size treated as collapsed
  int max_reinits = 20;       // fresh simplices around the incumbent
};

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool reached_target = false;
  bool collapsed = false;  // terminated by simplex size rather than budget
};

SimplexResult minimize_simplex(const Objective& f, std::vector<double> x0, const SimplexOptions& opts);

/// Independent, reproducible stream for restart `index` under `seed`.
std::mt19937_64 restart_rng(std::uint64_t seed, std::uint64_t index);

}  // namespace naimark_lab
