#include "naimark_lab/optimize.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace naimark_lab {

namespace {

struct Context {
  const Objective* f = nullptr;
  int evaluations = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<Context*>(params);
  std::span<const double> x(v->data, v->size);
  double value = (*ctx->f)(x);
  if (!std::isfinite(value)) value = std::numeric_limits<double>::max();
  ++ctx->evaluations;
  if (value < ctx->best) {
    ctx->best = value;
    ctx->best_x.assign(x.begin(), x.end());
  }
  return value;
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

SimplexResult minimize_simplex(const Objective& f, std::vector<double> x0, const SimplexOptions& opts) {
  Context ctx;
  ctx.f = &f;
  SimplexResult out;
  if (x0.empty()) {
    out.value = f(std::span<const double>{});
    out.evaluations = 1;
    out.reached_target = out.value <= opts.target;
    out.collapsed = true;
    return out;
  }

  gsl_set_error_handler_off();
  const size_t n = x0.size();
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(n));
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));

  gsl_multimin_function fn{&trampoline, n, &ctx};
  double step_size = opts.initial_step;
  std::vector<double> start = std::move(x0);

  for (int round = 0; round <= opts.max_reinits; ++round) {
    for (size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, start[i]);
    gsl_vector_set_all(step.get(), step_size);
    if (gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get()) != GSL_SUCCESS) break;

    bool collapsed = false;
    while (ctx.evaluations < opts.budget && ctx.best > opts.target) {
      if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) {
        collapsed = true;
        break;
      }
      if (gsl_multimin_fminimizer_size(solver.get()) < opts.min_size) {
        collapsed = true;
        break;
      }
    }
    out.collapsed = collapsed;
    if (!collapsed) break;
    // Stagnated above target: restart a smaller simplex at the incumbent.
    start = ctx.best_x;
    step_size = std::max(step_size * 0.1, 1e-6);
  }

  out.x = ctx.best_x;
  out.value = ctx.best;
  out.evaluations = ctx.evaluations;
  out.reached_target = ctx.best <= opts.target;
  return out;
}

std::mt19937_64 restart_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace naimark_lab
