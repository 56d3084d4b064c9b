// Compatibility tests built on Naimark extensions, and an independent
// convex-feasibility oracle for joint measurability.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "naimark_lab/linalg.hpp"
#include "naimark_lab/measurements.hpp"
#include "naimark_lab/naimark.hpp"

namespace naimark_lab {

enum class Verdict { compatible_certified, incompatible_certified, inconclusive };
const char* to_string(Verdict v);

struct CommutationReport {
  /// Entry (i, l): max over outcomes j, k of ||[P_i(j), P_l(k)]||_F. Symmetric,
  /// zero diagonal.
  Eigen::MatrixXd pair_norms;
  double max_norm = 0.0;
  int worst_first = -1;
  int worst_second = -1;
  bool commute = true;
};

/// Throws DimensionError when the PVMs live on different dimensions.
CommutationReport pvms_pairwise_commute(std::span<const Pvm> pvms, double tol = kDefaultTol);

/// Sum over pairs i < l and outcomes j, k of ||[P_i(j), P_l(k)]||_F. Zero iff
/// the PVMs pairwise commute.
double commutator_norm_sum(std::span<const Pvm> pvms);

class NonCommutingError : public std::invalid_argument {
 public:
  NonCommutingError(const std::string& what, int first, int second, double norm)
      : std::invalid_argument(what), first_(first), second_(second), norm_(norm) {}
  int first() const { return first_; }
  int second() const { return second_; }
  double norm() const { return norm_; }

 private:
  int first_, second_;
  double norm_;
};

/// Unique joint PVM of pairwise commuting PVMs: cell (j_1..j_N) is the ordered
/// product P_1(j_1) ... P_N(j_N).
JointPovm joint_pvm_from_commuting(std::span<const Pvm> pvms, double tol = kDefaultTol);

/// Raised when extensions do not share one ancilla space and one ancilla
/// state. With distinct ancilla states commuting extensions say nothing about
/// joint measurability.
class AncillaMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CompatReport {
  Verdict verdict = Verdict::inconclusive;
  std::optional<JointPovm> witness;
  CommutationReport commutation;
  std::vector<double> marginal_deltas;  // per input, max_j ||marginal(j) - E(j)||_F
  double max_marginal_delta = 0.0;
  std::string note;
};

/// Commuting common extensions certify compatibility and yield the joint
/// POVM Tr_A[(I (x) sigma_A) P(j_1..j_N)]. Non-commuting extensions are
/// inconclusive: compatible POVMs also admit non-commuting common extensions.
CompatReport joint_povm_from_common_extension(std::span<const NaimarkExtension> exts,
                                              double tol = kDefaultTol);

// ---------------------------------------------------------------------------
// Feasibility oracle

enum class FeasibilityStatus { feasible, infeasible, inconclusive };
const char* to_string(FeasibilityStatus s);

struct FeasibilityOptions {
  int max_iter = 50000;
  double tol = 1e-9;          // inter-set residual declaring feasibility
  int stall_window = 200;
  double stall_rel = 1e-6;    // relative improvement over the window that counts as a stall
  int max_cells = 64;
  double witness_tol = 1e-8;  // validation tolerance for the returned grid
};

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::inconclusive;
  bool feasible = false;
  int iterations = 0;
  double residual = 0.0;  // Frobenius distance between the last iterates of the two sets
  std::optional<JointPovm> joint;
};

/// Alternating projections between the product of PSD cones (one per grid
/// cell) and the affine set of grids with the prescribed marginals. Throws
/// std::invalid_argument when the grid would exceed options.max_cells and
/// DimensionError on mismatched dimensions.
FeasibilityResult feasibility_oracle(std::span<const Povm> povms, const FeasibilityOptions& opts = {});

// ---------------------------------------------------------------------------
// Incompatibility estimator

struct EstimatorOptions {
  int restarts = 8;
  int budget = 5000;      // objective evaluations per restart
  std::uint64_t seed = 0;
  double tol = 1e-6;      // estimates at or below this certify compatibility
  int anc_dim = 0;        // 0 selects max_i n_i
};

struct IncompatibilityEstimate {
  double value = 0.0;                 // best f found
  bool converged = false;
  std::vector<double> restart_values; // best f per restart actually run
  int evaluations = 0;
  int anc_dim = 0;
  int parameters = 0;
};

/// Restricted-family estimate of min f over common Naimark extensions with
/// ancilla |0><0| on anc_dim levels. Every family member is a valid common
/// extension, so the result is an upper bound on the true minimum and a value
/// <= tol certifies compatibility.
IncompatibilityEstimate incompatibility_estimate(std::span<const Povm> povms,
                                                 const EstimatorOptions& opts = {});

/// The extensions probed by the estimator for a given parameter vector.
std::vector<NaimarkExtension> estimator_family_member(std::span<const Povm> povms, int anc_dim,
                                                      std::span<const double> params);

}  // namespace naimark_lab
