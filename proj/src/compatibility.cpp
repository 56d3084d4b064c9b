#include "naimark_lab/compatibility.hpp"

#include <algorithm>
#include <sstream>

namespace naimark_lab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::compatible_certified: return "compatible-certified";
    case Verdict::incompatible_certified: return "incompatible-certified";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

CommutationReport pvms_pairwise_commute(std::span<const Pvm> pvms, double tol) {
  const int n = static_cast<int>(pvms.size());
  for (int i = 1; i < n; ++i) {
    if (pvms[static_cast<size_t>(i)].dim() != pvms[0].dim()) {
      std::ostringstream os;
      os << "pvms_pairwise_commute: PVM " << i << " has dimension " << pvms[static_cast<size_t>(i)].dim()
         << ", PVM 0 has " << pvms[0].dim();
      throw DimensionError(os.str());
    }
  }
  CommutationReport out;
  out.pair_norms = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int l = i + 1; l < n; ++l) {
      double worst = 0.0;
      for (const auto& p : pvms[static_cast<size_t>(i)].effects())
        for (const auto& q : pvms[static_cast<size_t>(l)].effects())
          worst = std::max(worst, frobenius_norm(commutator(p, q)));
      out.pair_norms(i, l) = out.pair_norms(l, i) = worst;
      if (worst > out.max_norm || out.worst_first < 0) {
        out.max_norm = worst;
        out.worst_first = i;
        out.worst_second = l;
      }
    }
  }
  out.commute = out.max_norm <= tol;
  return out;
}

double commutator_norm_sum(std::span<const Pvm> pvms) {
  double total = 0.0;
  for (size_t i = 0; i < pvms.size(); ++i)
    for (size_t l = i + 1; l < pvms.size(); ++l)
      for (const auto& p : pvms[i].effects())
        for (const auto& q : pvms[l].effects()) total += frobenius_norm(commutator(p, q));
  return total;
}

JointPovm joint_pvm_from_commuting(std::span<const Pvm> pvms, double tol) {
  if (pvms.empty()) throw std::invalid_argument("joint_pvm_from_commuting: no PVMs given");
  const CommutationReport report = pvms_pairwise_commute(pvms, tol);
  if (!report.commute) {
    std::ostringstream os;
    os << "PVMs " << report.worst_first << " and " << report.worst_second
       << " do not commute: max ||[P, Q]||_F = " << report.max_norm;
    throw NonCommutingError(os.str(), report.worst_first, report.worst_second, report.max_norm);
  }
  std::vector<int> shape;
  for (const auto& p : pvms) shape.push_back(p.size());
  const int cells = grid_size(shape);
  std::vector<ComplexMatrix> grid;
  grid.reserve(static_cast<size_t>(cells));
  for (int flat = 0; flat < cells; ++flat) {
    const auto multi = unravel_index(flat, shape);
    ComplexMatrix prod = pvms[0][multi[0]];
    for (size_t i = 1; i < pvms.size(); ++i) prod = prod * pvms[i][multi[i]];
    grid.push_back(hermitian_part(prod));
  }
  return JointPovm::validate(std::move(grid), std::move(shape), pvms[0].dim(), tol);
}

CompatReport joint_povm_from_common_extension(std::span<const NaimarkExtension> exts, double tol) {
  if (exts.empty()) throw std::invalid_argument("joint_povm_from_common_extension: no extensions given");
  const auto& first = exts.front();
  for (size_t i = 1; i < exts.size(); ++i) {
    const auto& e = exts[i];
    if (e.sys_dim() != first.sys_dim()) {
      std::ostringstream os;
      os << "extension " << i << " acts on system dimension " << e.sys_dim() << ", extension 0 on "
         << first.sys_dim();
      throw DimensionError(os.str());
    }
    if (e.anc_dim() != first.anc_dim()) {
      std::ostringstream os;
      os << "extension " << i << " uses a " << e.anc_dim() << "-level ancilla, extension 0 a "
         << first.anc_dim() << "-level one";
      throw AncillaMismatchError(os.str());
    }
    const double diff = (e.ancilla_state() - first.ancilla_state()).cwiseAbs().maxCoeff();
    if (diff > tol) {
      std::ostringstream os;
      os << "extension " << i << " uses a different ancilla state (max entry difference " << diff
         << "); commutation of extensions with distinct ancilla states does not decide joint "
            "measurability";
      throw AncillaMismatchError(os.str());
    }
  }

  std::vector<Pvm> pvms;
  for (const auto& e : exts) pvms.push_back(e.pvm());

  CompatReport out;
  out.commutation = pvms_pairwise_commute(pvms, tol);
  if (!out.commutation.commute) {
    std::ostringstream os;
    os << "extensions " << out.commutation.worst_first << " and " << out.commutation.worst_second
       << " do not commute (max ||[P, Q]||_F = " << out.commutation.max_norm
       << "); compatible measurements may still have non-commuting extensions";
    out.note = os.str();
    return out;
  }

  const JointPovm grid = joint_pvm_from_commuting(pvms, tol);
  std::vector<ComplexMatrix> reduced;
  for (const auto& p : grid.cells())
    reduced.push_back(hermitian_part(reduce_with_ancilla_state(p, first.ancilla_state())));
  JointPovm joint = JointPovm::validate(std::move(reduced), grid.shape(), first.sys_dim(), tol);

  for (int axis = 0; axis < joint.axes(); ++axis) {
    const auto sums = marginal_sums(joint.cells(), joint.shape(), axis);
    const auto induced = exts[static_cast<size_t>(axis)].induced_effects();
    double worst = 0.0;
    for (size_t j = 0; j < sums.size(); ++j) worst = std::max(worst, (sums[j] - induced[j]).norm());
    out.marginal_deltas.push_back(worst);
    out.max_marginal_delta = std::max(out.max_marginal_delta, worst);
  }
  if (out.max_marginal_delta > tol) {
    std::ostringstream os;
    os << "joint marginals deviate from the induced effects by " << out.max_marginal_delta;
    out.note = os.str();
    return out;
  }
  out.verdict = Verdict::compatible_certified;
  out.witness = std::move(joint);
  return out;
}

}  // namespace naimark_lab
