#include "naimark_lab/measurements.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace naimark_lab {

const char* to_string(MeasurementDefect d) {
  switch (d) {
    case MeasurementDefect::empty: return "empty";
    case MeasurementDefect::dimension_mismatch: return "dimension_mismatch";
    case MeasurementDefect::not_hermitian: return "not_hermitian";
    case MeasurementDefect::not_psd: return "not_psd";
    case MeasurementDefect::exceeds_identity: return "exceeds_identity";
    case MeasurementDefect::incomplete: return "incomplete";
    case MeasurementDefect::not_idempotent: return "not_idempotent";
    case MeasurementDefect::not_orthogonal: return "not_orthogonal";
  }
  return "unknown";
}

std::string MeasurementDiagnosis::message() const {
  std::ostringstream os;
  switch (defect) {
    case MeasurementDefect::empty: os << "no effects given"; break;
    case MeasurementDefect::dimension_mismatch:
      os << "effect " << effect + 1 << " has the wrong shape";
      break;
    case MeasurementDefect::not_hermitian:
      os << "effect " << effect + 1 << " is not Hermitian (||E - E^dagger||_F = " << magnitude << ")";
      break;
    case MeasurementDefect::not_psd:
      os << "effect " << effect + 1 << " is not positive semidefinite (min eigenvalue " << -magnitude
         << ")";
      break;
    case MeasurementDefect::exceeds_identity:
      os << "effect " << effect + 1 << " exceeds the identity (max eigenvalue " << 1.0 + magnitude
         << ")";
      break;
    case MeasurementDefect::incomplete:
      os << "completeness fails: ||sum E - I||_F = " << magnitude;
      break;
    case MeasurementDefect::not_idempotent:
      os << "effect " << effect + 1 << " is not a projector (||P^2 - P||_F = " << magnitude << ")";
      break;
    case MeasurementDefect::not_orthogonal:
      os << "projectors " << effect + 1 << " and " << other + 1
         << " are not orthogonal (||P_i P_j||_F = " << magnitude << ")";
      break;
  }
  return os.str();
}

std::optional<MeasurementDiagnosis> diagnose_povm(std::span<const ComplexMatrix> effects, int dim,
                                                  double tol) {
  if (effects.empty()) return MeasurementDiagnosis{MeasurementDefect::empty};
  for (size_t i = 0; i < effects.size(); ++i) {
    const auto& e = effects[i];
    if (e.rows() != dim || e.cols() != dim)
      return MeasurementDiagnosis{MeasurementDefect::dimension_mismatch, static_cast<int>(i)};
  }
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (size_t i = 0; i < effects.size(); ++i) {
    const auto& e = effects[i];
    const int idx = static_cast<int>(i);
    const double defect = hermiticity_defect(e);
    if (defect > tol) return MeasurementDiagnosis{MeasurementDefect::not_hermitian, idx, -1, defect};
    const RealVector ev = hermitian_eigen(e, tol).values;
    if (ev.minCoeff() < -tol)
      return MeasurementDiagnosis{MeasurementDefect::not_psd, idx, -1, -ev.minCoeff()};
    if (ev.maxCoeff() > 1.0 + tol)
      return MeasurementDiagnosis{MeasurementDefect::exceeds_identity, idx, -1, ev.maxCoeff() - 1.0};
    total += e;
  }
  const double incompleteness = (total - identity(dim)).norm();
  if (incompleteness > tol)
    return MeasurementDiagnosis{MeasurementDefect::incomplete, -1, -1, incompleteness};
  return std::nullopt;
}

std::optional<MeasurementDiagnosis> diagnose_pvm(std::span<const ComplexMatrix> effects, int dim,
                                                 double tol) {
  if (auto d = diagnose_povm(effects, dim, tol)) return d;
  for (size_t i = 0; i < effects.size(); ++i) {
    const double idem = (effects[i] * effects[i] - effects[i]).norm();
    if (idem > tol)
      return MeasurementDiagnosis{MeasurementDefect::not_idempotent, static_cast<int>(i), -1, idem};
  }
  for (size_t i = 0; i < effects.size(); ++i)
    for (size_t j = i + 1; j < effects.size(); ++j) {
      const double overlap = (effects[i] * effects[j]).norm();
      if (overlap > tol)
        return MeasurementDiagnosis{MeasurementDefect::not_orthogonal, static_cast<int>(i),
                                    static_cast<int>(j), overlap};
    }
  return std::nullopt;
}

Povm Povm::validate(std::vector<ComplexMatrix> effects, int dim, double tol) {
  if (auto d = diagnose_povm(effects, dim, tol)) throw InvalidMeasurementError(*d);
  return Povm(dim, std::move(effects));
}

Pvm Pvm::validate(std::vector<ComplexMatrix> projectors, int dim, double tol) {
  if (auto d = diagnose_pvm(projectors, dim, tol)) throw InvalidMeasurementError(*d);
  return Pvm(Povm::validate(std::move(projectors), dim, tol));
}

int grid_size(std::span<const int> shape) {
  return std::accumulate(shape.begin(), shape.end(), 1, std::multiplies<>());
}

int ravel_index(std::span<const int> multi, std::span<const int> shape) {
  if (multi.size() != shape.size()) throw DimensionError("ravel_index: rank mismatch");
  int flat = 0;
  for (size_t a = 0; a < shape.size(); ++a) {
    if (multi[a] < 0 || multi[a] >= shape[a]) throw std::out_of_range("ravel_index: index out of range");
    flat = flat * shape[a] + multi[a];
  }
  return flat;
}

std::vector<int> unravel_index(int flat, std::span<const int> shape) {
  std::vector<int> multi(shape.size());
  for (size_t a = shape.size(); a-- > 0;) {
    multi[a] = flat % shape[a];
    flat /= shape[a];
  }
  return multi;
}

std::vector<ComplexMatrix> marginal_sums(std::span<const ComplexMatrix> cells,
                                         std::span<const int> shape, int axis) {
  if (axis < 0 || axis >= static_cast<int>(shape.size())) {
    std::ostringstream os;
    os << "marginal: axis " << axis << " out of range for a grid with " << shape.size() << " axes";
    throw std::out_of_range(os.str());
  }
  if (static_cast<int>(cells.size()) != grid_size(shape))
    throw DimensionError("marginal: cell count does not match the grid shape");
  const auto dim = cells.front().rows();
  std::vector<ComplexMatrix> out(static_cast<size_t>(shape[axis]), ComplexMatrix::Zero(dim, dim));
  for (int c = 0; c < static_cast<int>(cells.size()); ++c)
    out[static_cast<size_t>(unravel_index(c, shape)[axis])] += cells[c];
  return out;
}

JointPovm JointPovm::validate(std::vector<ComplexMatrix> cells, std::vector<int> shape, int dim,
                              double tol) {
  if (shape.empty() || std::any_of(shape.begin(), shape.end(), [](int n) { return n <= 0; }))
    throw std::invalid_argument("joint POVM: shape must be a nonempty list of positive integers");
  if (static_cast<int>(cells.size()) != grid_size(shape)) {
    std::ostringstream os;
    os << "joint POVM: " << cells.size() << " cells for a grid of size " << grid_size(shape);
    throw DimensionError(os.str());
  }
  return JointPovm(Povm::validate(std::move(cells), dim, tol), std::move(shape));
}

Povm marginal(const JointPovm& joint, int axis, double tol) {
  return Povm::validate(marginal_sums(joint.cells(), joint.shape(), axis), joint.dim(), tol);
}

UnsharpSpin::UnsharpSpin(std::array<double, 3> axis, double lambda) : axis_(axis), lambda_(lambda) {
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "unsharp spin axis must be a unit vector, got norm " << norm;
    throw std::invalid_argument(os.str());
  }
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "unsharpness parameter must lie in [0, 1], got " << lambda;
    throw std::invalid_argument(os.str());
  }
}

Povm unsharp_spin(const UnsharpSpin& obs) {
  const ComplexMatrix half_id = 0.5 * identity(2);
  const ComplexMatrix shift = 0.5 * obs.lambda() * bloch_operator(obs.axis());
  return Povm::validate({half_id + shift, half_id - shift}, 2);
}

double TrioJoint::min_eigenvalue() const {
  return *std::min_element(min_eigenvalues.begin(), min_eigenvalues.end());
}

JointPovm TrioJoint::joint(double tol) const { return JointPovm::validate(cells, shape, 2, tol); }

TrioJoint unsharp_trio_joint(double lambda, double tol) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw std::invalid_argument("unsharp_trio_joint: lambda must lie in [0, 1]");
  TrioJoint out;
  out.lambda = lambda;
  const ComplexMatrix sx = pauli::x(), sy = pauli::y(), sz = pauli::z();
  for (int c = 0; c < 8; ++c) {
    const auto idx = unravel_index(c, out.shape);
    const double si = idx[0] == 0 ? 1.0 : -1.0;
    const double sj = idx[1] == 0 ? 1.0 : -1.0;
    const double sk = idx[2] == 0 ? 1.0 : -1.0;
    ComplexMatrix cell = (identity(2) + lambda * (si * sx + sj * sy + sk * sz)) / 8.0;
    out.min_eigenvalues.push_back(naimark_lab::min_eigenvalue(cell));
    out.cells.push_back(std::move(cell));
  }
  out.valid = out.min_eigenvalue() >= -tol;
  return out;
}

}  // namespace naimark_lab
