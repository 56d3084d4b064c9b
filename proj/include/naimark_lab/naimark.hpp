// Tensor-product Naimark extensions: a POVM {E(i)} on H_S is realised by a
// PVM {P(i)} on H_S (x) H_A together with a fixed ancilla state sigma_A, so
// that Tr_A[(I (x) sigma_A) P(i)] = E(i).

#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "naimark_lab/linalg.hpp"
#include "naimark_lab/measurements.hpp"

namespace naimark_lab {

class NaimarkExtension {
 public:
  /// Validates the projectors as a PVM on sys_dim * anc_dim, the ancilla
  /// state as a density matrix, and the induced effects as a POVM.
  static NaimarkExtension make(int sys_dim, int anc_dim, ComplexMatrix ancilla_state,
                               std::vector<ComplexMatrix> projectors, double tol = kDefaultTol);

  int sys_dim() const { return sys_dim_; }
  int anc_dim() const { return anc_dim_; }
  const ComplexMatrix& ancilla_state() const { return ancilla_state_; }
  const Pvm& pvm() const { return pvm_; }

  /// Tr_A[(I (x) sigma_A) P(i)] for every outcome.
  std::vector<ComplexMatrix> induced_effects() const;

 private:
  NaimarkExtension(int sys_dim, int anc_dim, ComplexMatrix sigma, Pvm pvm)
      : sys_dim_(sys_dim), anc_dim_(anc_dim), ancilla_state_(std::move(sigma)), pvm_(std::move(pvm)) {}

  int sys_dim_;
  int anc_dim_;
  ComplexMatrix ancilla_state_;
  Pvm pvm_;
};

class CompletionError : public std::runtime_error {
 public:
  CompletionError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

struct AncillaDimension {
  int dim = 1;                    // max(sum_i rank E(i) - d, 1)
  int rank_sum = 0;               // sum_i rank E(i)
  bool already_projective = false;  // sum of ranks equals d
};

/// Smallest ancilla dimension for a tensor-product extension. Ranks count
/// eigenvalues above rank_tol.
AncillaDimension minimal_ancilla_dim(const Povm& povm, double rank_tol = 1e-9);

/// Two-outcome extension on a qubit ancilla in state |0><0|:
///
///   P(1) = [ E(1)                 -sqrt(E(1)E(2)) U^dagger ]
///          [ -U sqrt(E(1)E(2))     U E(2) U^dagger          ]
///
/// in ancilla blocks, and P(2) = I - P(1). Negating u flips the sign of the
/// off-diagonal blocks.
NaimarkExtension dichotomic_extension(const Povm& povm, const ComplexMatrix& u,
                                      double tol = kDefaultTol);

/// n-outcome extension on an n-dimensional ancilla in state |0><0|. The
/// isometry |psi> -> sum_m U_m sqrt(E(m)) |psi> (x) |m> is completed to a
/// unitary V by Gram-Schmidt over the canonical basis and
/// P(i) = V^dagger (I (x) |i><i|) V. An empty `unitaries` means U_m = I.
NaimarkExtension general_extension(const Povm& povm, std::span<const ComplexMatrix> unitaries = {},
                                   double tol = kDefaultTol);

/// Member of the extension family explored by the incompatibility estimator.
/// The POVM is padded with zero effects up to anc_dim ancilla levels; the
/// completion columns of V are rotated by `rotation`, a unitary of size
/// d * (anc_dim - 1); padding level l >= n is assigned to outcome l mod n.
/// Every tensor-product extension whose projector ranks match that level
/// assignment is reachable by some rotation.
NaimarkExtension rotated_extension(const Povm& povm, int anc_dim, const ComplexMatrix& rotation,
                                   double tol = kDefaultTol);

/// Unitary dilation behind general_extension (all U_m = I) padded to anc_dim
/// levels: column (k, 0) is sum_m sqrt(E(m))|k> (x) |m>, the rest is the
/// Gram-Schmidt completion.
ComplexMatrix canonical_dilation(const Povm& povm, int anc_dim, double tol = kDefaultTol);

/// Projectors V^dagger (I (x) Pi_i) V where Pi_i collects the ancilla levels
/// assigned to outcome i, after rotating V's completion columns by `rotation`
/// (null means no rotation). No validation is performed.
std::vector<ComplexMatrix> dilation_projectors(const ComplexMatrix& v, int sys_dim, int anc_dim,
                                               int outcomes, const ComplexMatrix* rotation = nullptr);

struct ExtensionCheck {
  std::vector<double> deltas;  // ||Tr_A[(I (x) sigma) P(i)] - E(i)||_F
  double max_delta = 0.0;
  bool passed = false;
};

/// Compares the extension's induced POVM against `povm`. Mismatched values are
/// reported, never thrown; mismatched shapes throw DimensionError.
ExtensionCheck verify_extension(const NaimarkExtension& ext, const Povm& povm,
                                double tol = kDefaultTol);

/// Marginal of a projector grid. Throws InvalidMeasurementError when the
/// flattened grid is not a PVM.
Pvm pvm_marginal(const JointPovm& grid, int axis, double tol = kDefaultTol);

/// Assemble sum_{a,b} blocks[a][b] (x) |a><b| (system-first ordering).
ComplexMatrix from_ancilla_blocks(const std::vector<std::vector<ComplexMatrix>>& blocks);

/// Block (a, b) of an operator on H_S (x) H_A, i.e. (I (x) <a|) m (I (x) |b>).
ComplexMatrix ancilla_block(const ComplexMatrix& m, int anc_dim, int a, int b);

}  // namespace naimark_lab
