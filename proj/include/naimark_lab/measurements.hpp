// Validated measurement value types: POVMs, PVMs and joint POVMs on an
// outcome grid, plus the unsharp spin-1/2 families.
//
// Outcomes are 0-based everywhere in the API. Reports render them 1-based.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "naimark_lab/linalg.hpp"

namespace naimark_lab {

enum class MeasurementDefect {
  empty,
  dimension_mismatch,
  not_hermitian,
  not_psd,
  exceeds_identity,
  incomplete,
  not_idempotent,
  not_orthogonal,
};

const char* to_string(MeasurementDefect d);

/// Which invariant failed, where, and by how much.
struct MeasurementDiagnosis {
  MeasurementDefect defect;
  int effect = -1;  // offending effect (0-based), -1 when not effect-specific
  int other = -1;   // second effect for orthogonality failures
  double magnitude = 0.0;

  std::string message() const;
};

class InvalidMeasurementError : public std::invalid_argument {
 public:
  explicit InvalidMeasurementError(MeasurementDiagnosis d)
      : std::invalid_argument(d.message()), diagnosis_(d) {}
  const MeasurementDiagnosis& diagnosis() const { return diagnosis_; }

 private:
  MeasurementDiagnosis diagnosis_;
};

std::optional<MeasurementDiagnosis> diagnose_povm(std::span<const ComplexMatrix> effects, int dim,
                                                  double tol = kDefaultTol);
std::optional<MeasurementDiagnosis> diagnose_pvm(std::span<const ComplexMatrix> effects, int dim,
                                                 double tol = kDefaultTol);

class Povm {
 public:
  /// Throws InvalidMeasurementError when any POVM invariant fails.
  static Povm validate(std::vector<ComplexMatrix> effects, int dim, double tol = kDefaultTol);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(effects_.size()); }
  const ComplexMatrix& operator[](int i) const { return effects_[static_cast<size_t>(i)]; }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }

 private:
  Povm(int dim, std::vector<ComplexMatrix> effects) : dim_(dim), effects_(std::move(effects)) {}

  int dim_;
  std::vector<ComplexMatrix> effects_;
};

class Pvm {
 public:
  static Pvm validate(std::vector<ComplexMatrix> projectors, int dim, double tol = kDefaultTol);

  int dim() const { return povm_.dim(); }
  int size() const { return povm_.size(); }
  const ComplexMatrix& operator[](int i) const { return povm_[i]; }
  const std::vector<ComplexMatrix>& effects() const { return povm_.effects(); }
  const Povm& as_povm() const { return povm_; }

 private:
  explicit Pvm(Povm p) : povm_(std::move(p)) {}
  Povm povm_;
};

inline Povm validate_povm(std::vector<ComplexMatrix> effects, int dim, double tol = kDefaultTol) {
  return Povm::validate(std::move(effects), dim, tol);
}
inline Pvm validate_pvm(std::vector<ComplexMatrix> effects, int dim, double tol = kDefaultTol) {
  return Pvm::validate(std::move(effects), dim, tol);
}

// Outcome grids. Cells are stored row-major: the last axis varies fastest.

int grid_size(std::span<const int> shape);
int ravel_index(std::span<const int> multi, std::span<const int> shape);
std::vector<int> unravel_index(int flat, std::span<const int> shape);

/// Coarse-grain a grid of operators onto one axis.
std::vector<ComplexMatrix> marginal_sums(std::span<const ComplexMatrix> cells,
                                         std::span<const int> shape, int axis);

class JointPovm {
 public:
  static JointPovm validate(std::vector<ComplexMatrix> cells, std::vector<int> shape, int dim,
                            double tol = kDefaultTol);

  int dim() const { return flat_.dim(); }
  const std::vector<int>& shape() const { return shape_; }
  int axes() const { return static_cast<int>(shape_.size()); }
  const ComplexMatrix& cell(std::span<const int> multi) const {
    return flat_[ravel_index(multi, shape_)];
  }
  const std::vector<ComplexMatrix>& cells() const { return flat_.effects(); }
  const Povm& as_povm() const { return flat_; }

 private:
  JointPovm(Povm flat, std::vector<int> shape) : flat_(std::move(flat)), shape_(std::move(shape)) {}
  Povm flat_;
  std::vector<int> shape_;
};

/// Effect k of the result is the sum of all cells whose index on `axis` is k.
Povm marginal(const JointPovm& joint, int axis, double tol = kDefaultTol);

class UnsharpSpin {
 public:
  /// Throws std::invalid_argument unless ||axis|| = 1 within 1e-12 and
  /// lambda lies in [0, 1].
  UnsharpSpin(std::array<double, 3> axis, double lambda);

  const std::array<double, 3>& axis() const { return axis_; }
  double lambda() const { return lambda_; }

 private:
  std::array<double, 3> axis_;
  double lambda_;
};

inline constexpr std::array<double, 3> kAxisX{1.0, 0.0, 0.0};
inline constexpr std::array<double, 3> kAxisY{0.0, 1.0, 0.0};
inline constexpr std::array<double, 3> kAxisZ{0.0, 0.0, 1.0};

/// {(I + lambda n.sigma)/2, (I - lambda n.sigma)/2}.
Povm unsharp_spin(const UnsharpSpin& obs);

/// The eight-cell parent of the unsharp x, y, z spins. Cell (i, j, k) is
/// [I + s_i lambda sigma_x + s_j lambda sigma_y + s_k lambda sigma_z] / 8 with
/// s_0 = +1, s_1 = -1. The grid is returned even when some cell fails to be
/// PSD so the boundary at lambda = 1/sqrt(3) can be probed.
struct TrioJoint {
  double lambda = 0.0;
  std::vector<int> shape{2, 2, 2};
  std::vector<ComplexMatrix> cells;
  std::vector<double> min_eigenvalues;
  bool valid = false;

  double min_eigenvalue() const;
  /// Throws InvalidMeasurementError when !valid.
  JointPovm joint(double tol = kDefaultTol) const;
};

TrioJoint unsharp_trio_joint(double lambda, double tol = 1e-12);

}  // namespace naimark_lab
