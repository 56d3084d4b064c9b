#include "naimark_lab/compatibility.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include "naimark_lab/optimize.hpp"

namespace naimark_lab {

namespace {

struct Family {
  int sys_dim = 0;
  int anc_dim = 0;
  int complement = 0;        // d * (anc_dim - 1)
  int params_per_povm = 0;   // complement^2
  std::vector<ComplexMatrix> dilations;
  std::vector<int> outcomes;

  int parameter_count() const {
    return outcomes.size() < 2 ? 0 : static_cast<int>(outcomes.size() - 1) * params_per_povm;
  }

  // Rotation of the completion columns for POVM i. POVM 0 keeps the identity:
  // only the relative rotation between extensions affects commutation.
  ComplexMatrix rotation(size_t i, std::span<const double> params) const {
    if (i == 0 || complement == 0) return identity(complement);
    const double* p = params.data() + (i - 1) * static_cast<size_t>(params_per_povm);
    return unitary_from_generator(hermitian_from_params(p, complement));
  }

  std::vector<std::vector<ComplexMatrix>> projectors(std::span<const double> params) const {
    std::vector<std::vector<ComplexMatrix>> out;
    for (size_t i = 0; i < dilations.size(); ++i) {
      const ComplexMatrix g = rotation(i, params);
      out.push_back(dilation_projectors(dilations[i], sys_dim, anc_dim, outcomes[i], &g));
    }
    return out;
  }
};

Family make_family(std::span<const Povm> povms, int anc_dim) {
  if (povms.empty()) throw std::invalid_argument("incompatibility_estimate: no POVMs given");
  Family f;
  f.sys_dim = povms[0].dim();
  int max_outcomes = 0;
  for (size_t i = 0; i < povms.size(); ++i) {
    if (povms[i].dim() != f.sys_dim) {
      std::ostringstream os;
      os << "incompatibility_estimate: POVM " << i << " has dimension " << povms[i].dim()
         << ", POVM 0 has " << f.sys_dim;
      throw DimensionError(os.str());
    }
    max_outcomes = std::max(max_outcomes, povms[i].size());
  }
  f.anc_dim = anc_dim > 0 ? anc_dim : max_outcomes;
  if (f.anc_dim < max_outcomes) {
    std::ostringstream os;
    os << "incompatibility_estimate: ancilla dimension " << f.anc_dim << " is below the largest outcome count "
       << max_outcomes;
    throw std::invalid_argument(os.str());
  }
  f.complement = f.sys_dim * (f.anc_dim - 1);
  f.params_per_povm = hermitian_param_count(f.complement);
  for (const auto& p : povms) {
    f.dilations.push_back(canonical_dilation(p, f.anc_dim));
    f.outcomes.push_back(p.size());
  }
  return f;
}

double commutator_sum(const std::vector<std::vector<ComplexMatrix>>& pvms) {
  double total = 0.0;
  for (size_t i = 0; i < pvms.size(); ++i)
    for (size_t l = i + 1; l < pvms.size(); ++l)
      for (const auto& p : pvms[i])
        for (const auto& q : pvms[l]) total += frobenius_norm(commutator(p, q));
  return total;
}

}  // namespace

std::vector<NaimarkExtension> estimator_family_member(std::span<const Povm> povms, int anc_dim,
                                                      std::span<const double> params) {
  const Family f = make_family(povms, anc_dim);
  if (static_cast<int>(params.size()) != f.parameter_count()) {
    std::ostringstream os;
    os << "estimator_family_member: expected " << f.parameter_count() << " parameters, got " << params.size();
    throw std::invalid_argument(os.str());
  }
  std::vector<NaimarkExtension> out;
  for (size_t i = 0; i < povms.size(); ++i)
    out.push_back(rotated_extension(povms[i], f.anc_dim, f.rotation(i, params)));
  return out;
}

IncompatibilityEstimate incompatibility_estimate(std::span<const Povm> povms, const EstimatorOptions& opts) {
  const Family family = make_family(povms, opts.anc_dim);
  IncompatibilityEstimate out;
  out.anc_dim = family.anc_dim;
  out.parameters = family.parameter_count();

  const Objective objective = [&family](std::span<const double> x) {
    return commutator_sum(family.projectors(x));
  };

  SimplexOptions simplex;
  simplex.budget = opts.budget;
  simplex.target = opts.tol * 1e-3;

  out.value = std::numeric_limits<double>::infinity();
  bool any_collapsed = false;
  const int restarts = std::max(opts.restarts, 1);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x0(static_cast<size_t>(out.parameters), 0.0);
    if (r > 0) {
      auto rng = restart_rng(opts.seed, static_cast<std::uint64_t>(r));
      std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
      for (auto& v : x0) v = angle(rng);
    }
    const SimplexResult res = minimize_simplex(objective, std::move(x0), simplex);
    out.restart_values.push_back(res.value);
    out.evaluations += res.evaluations;
    any_collapsed = any_collapsed || res.collapsed;
    out.value = std::min(out.value, res.value);
    if (out.value <= opts.tol) break;
  }
  out.converged = out.value <= opts.tol || any_collapsed;
  return out;
}

}  // namespace naimark_lab
