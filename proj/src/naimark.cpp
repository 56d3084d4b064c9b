#include "naimark_lab/naimark.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace naimark_lab {

namespace {

constexpr double kCompletionThreshold = 1e-8;

void require_unitary(const ComplexMatrix& u, int dim, double tol, const char* what) {
  if (u.rows() != dim || u.cols() != dim) {
    std::ostringstream os;
    os << what << ": expected a " << dim << "x" << dim << " unitary, got " << u.rows() << "x"
       << u.cols();
    throw DimensionError(os.str());
  }
  const double defect = unitarity_defect(u);
  if (defect > tol) {
    std::ostringstream os;
    os << what << ": matrix is not unitary (||U^dagger U - I||_F = " << defect << ")";
    throw NotUnitaryError(os.str(), defect);
  }
}

// Full unitary on H_S (x) H_A whose columns (k, a = 0) carry the isometry
// sum_m A_m |k> (x) |m>. Remaining columns are the Gram-Schmidt completion,
// in increasing column order.
ComplexMatrix completed_isometry(const std::vector<ComplexMatrix>& kraus, int anc_dim, double tol) {
  const int d = static_cast<int>(kraus.front().rows());
  const int total = d * anc_dim;

  ComplexMatrix iso = ComplexMatrix::Zero(total, d);
  for (int m = 0; m < static_cast<int>(kraus.size()); ++m)
    for (int s = 0; s < d; ++s)
      for (int k = 0; k < d; ++k) iso(s * anc_dim + m, k) = kraus[static_cast<size_t>(m)](s, k);

  const double iso_defect = (iso.adjoint() * iso - identity(d)).norm();
  if (iso_defect > std::max(tol, 1e-10) * 10.0) {
    std::ostringstream os;
    os << "Naimark isometry is not isometric: ||V^dagger V - I||_F = " << iso_defect;
    throw CompletionError(os.str(), iso_defect);
  }

  ComplexMatrix basis(total, total);
  basis.leftCols(d) = iso;
  int filled = d;
  for (int j = 0; j < total && filled < total; ++j) {
    ComplexVector v = ComplexVector::Zero(total);
    v(j) = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      v -= basis.leftCols(filled) * (basis.leftCols(filled).adjoint() * v);
    const double n = v.norm();
    if (n > kCompletionThreshold) basis.col(filled++) = v / n;
  }
  if (filled < total) {
    std::ostringstream os;
    os << "orthonormal completion found only " << filled << " of " << total << " columns";
    throw CompletionError(os.str(), static_cast<double>(total - filled));
  }

  ComplexMatrix v(total, total);
  int next_completion = d;
  for (int col = 0; col < total; ++col) {
    if (col % anc_dim == 0)
      v.col(col) = basis.col(col / anc_dim);
    else
      v.col(col) = basis.col(next_completion++);
  }
  return v;
}

std::vector<ComplexMatrix> level_projectors(const ComplexMatrix& v, int d, int anc_dim, int outcomes) {
  std::vector<ComplexMatrix> out;
  for (int i = 0; i < outcomes; ++i) {
    std::vector<Eigen::Index> rows;
    for (int s = 0; s < d; ++s)
      for (int level = 0; level < anc_dim; ++level)
        if (level % outcomes == i) rows.push_back(static_cast<Eigen::Index>(s) * anc_dim + level);
    ComplexMatrix r(static_cast<Eigen::Index>(rows.size()), v.cols());
    for (size_t k = 0; k < rows.size(); ++k) r.row(static_cast<Eigen::Index>(k)) = v.row(rows[k]);
    out.push_back(hermitian_part(r.adjoint() * r));
  }
  return out;
}

std::vector<ComplexMatrix> kraus_operators(const Povm& povm, std::span<const ComplexMatrix> unitaries,
                                           double tol) {
  if (!unitaries.empty() && static_cast<int>(unitaries.size()) != povm.size()) {
    std::ostringstream os;
    os << "general_extension: expected " << povm.size() << " unitaries, got " << unitaries.size();
    throw std::invalid_argument(os.str());
  }
  std::vector<ComplexMatrix> kraus;
  for (int m = 0; m < povm.size(); ++m) {
    ComplexMatrix root = psd_sqrt(povm[m], tol);
    if (!unitaries.empty()) {
      require_unitary(unitaries[static_cast<size_t>(m)], povm.dim(), tol, "general_extension");
      root = unitaries[static_cast<size_t>(m)] * root;
    }
    kraus.push_back(std::move(root));
  }
  return kraus;
}

ComplexMatrix ground_state(int anc_dim) { return basis_operator(anc_dim, 0, 0); }

}  // namespace

NaimarkExtension NaimarkExtension::make(int sys_dim, int anc_dim, ComplexMatrix ancilla_state,
                                        std::vector<ComplexMatrix> projectors, double tol) {
  if (sys_dim <= 0 || anc_dim <= 0)
    throw std::invalid_argument("Naimark extension: dimensions must be positive");
  if (ancilla_state.rows() != anc_dim || ancilla_state.cols() != anc_dim)
    throw DimensionError("Naimark extension: ancilla state has the wrong dimension");
  if (!is_psd(ancilla_state, tol) || std::abs(ancilla_state.trace() - Complex(1.0)) > tol)
    throw std::invalid_argument("Naimark extension: ancilla state must be a density matrix");
  Pvm pvm = Pvm::validate(std::move(projectors), sys_dim * anc_dim, tol);
  NaimarkExtension ext(sys_dim, anc_dim, std::move(ancilla_state), std::move(pvm));
  Povm::validate(ext.induced_effects(), sys_dim, tol);
  return ext;
}

std::vector<ComplexMatrix> NaimarkExtension::induced_effects() const {
  std::vector<ComplexMatrix> out;
  for (const auto& p : pvm_.effects()) out.push_back(hermitian_part(reduce_with_ancilla_state(p, ancilla_state_)));
  return out;
}

AncillaDimension minimal_ancilla_dim(const Povm& povm, double rank_tol) {
  AncillaDimension out;
  for (const auto& e : povm.effects()) {
    const RealVector ev = hermitian_eigen(e).values;
    out.rank_sum += static_cast<int>((ev.array() > rank_tol).count());
  }
  const int raw = out.rank_sum - povm.dim();
  out.already_projective = raw <= 0;
  out.dim = std::max(raw, 1);
  return out;
}

ComplexMatrix from_ancilla_blocks(const std::vector<std::vector<ComplexMatrix>>& blocks) {
  const int anc = static_cast<int>(blocks.size());
  const auto d = blocks.front().front().rows();
  ComplexMatrix out = ComplexMatrix::Zero(d * anc, d * anc);
  for (int a = 0; a < anc; ++a)
    for (int b = 0; b < anc; ++b)
      out += kron(blocks[static_cast<size_t>(a)][static_cast<size_t>(b)], basis_operator(anc, a, b));
  return out;
}

ComplexMatrix ancilla_block(const ComplexMatrix& m, int anc_dim, int a, int b) {
  if (m.rows() % anc_dim != 0) throw DimensionError("ancilla_block: incompatible ancilla dimension");
  const int d = static_cast<int>(m.rows()) / anc_dim;
  ComplexMatrix out(d, d);
  for (int s = 0; s < d; ++s)
    for (int t = 0; t < d; ++t) out(s, t) = m(s * anc_dim + a, t * anc_dim + b);
  return out;
}

NaimarkExtension dichotomic_extension(const Povm& povm, const ComplexMatrix& u, double tol) {
  if (povm.size() != 2) {
    std::ostringstream os;
    os << "dichotomic_extension: expected 2 outcomes, got " << povm.size();
    throw std::invalid_argument(os.str());
  }
  const int d = povm.dim();
  require_unitary(u, d, tol, "dichotomic_extension");
  const ComplexMatrix& e1 = povm[0];
  const ComplexMatrix& e2 = povm[1];
  const ComplexMatrix x = psd_sqrt(e1 * e2, tol);
  const ComplexMatrix p1 = from_ancilla_blocks({{e1, -x * u.adjoint()}, {-u * x, u * e2 * u.adjoint()}});
  const ComplexMatrix id = identity(2 * d);
  return NaimarkExtension::make(d, 2, ground_state(2), {hermitian_part(p1), hermitian_part(id - p1)}, tol);
}

NaimarkExtension general_extension(const Povm& povm, std::span<const ComplexMatrix> unitaries,
                                   double tol) {
  const int n = povm.size();
  const ComplexMatrix v = completed_isometry(kraus_operators(povm, unitaries, tol), n, tol);
  return NaimarkExtension::make(povm.dim(), n, ground_state(n), level_projectors(v, povm.dim(), n, n), tol);
}

ComplexMatrix canonical_dilation(const Povm& povm, int anc_dim, double tol) {
  if (anc_dim < povm.size()) {
    std::ostringstream os;
    os << "ancilla dimension " << anc_dim << " is smaller than the " << povm.size() << " outcomes";
    throw std::invalid_argument(os.str());
  }
  return completed_isometry(kraus_operators(povm, {}, tol), anc_dim, tol);
}

std::vector<ComplexMatrix> dilation_projectors(const ComplexMatrix& v, int sys_dim, int anc_dim,
                                               int outcomes, const ComplexMatrix* rotation) {
  if (rotation == nullptr || anc_dim == 1) return level_projectors(v, sys_dim, anc_dim, outcomes);
  const int complement = sys_dim * (anc_dim - 1);
  ComplexMatrix comp(v.rows(), complement);
  int k = 0;
  for (int col = 0; col < v.cols(); ++col)
    if (col % anc_dim != 0) comp.col(k++) = v.col(col);
  comp = comp * (*rotation);
  ComplexMatrix rotated = v;
  k = 0;
  for (int col = 0; col < v.cols(); ++col)
    if (col % anc_dim != 0) rotated.col(col) = comp.col(k++);
  return level_projectors(rotated, sys_dim, anc_dim, outcomes);
}

NaimarkExtension rotated_extension(const Povm& povm, int anc_dim, const ComplexMatrix& rotation,
                                   double tol) {
  const int d = povm.dim();
  const ComplexMatrix v = canonical_dilation(povm, anc_dim, tol);
  const int complement = d * (anc_dim - 1);
  if (complement > 0) require_unitary(rotation, complement, tol, "rotated_extension");
  return NaimarkExtension::make(d, anc_dim, ground_state(anc_dim),
                                dilation_projectors(v, d, anc_dim, povm.size(), &rotation), tol);
}

ExtensionCheck verify_extension(const NaimarkExtension& ext, const Povm& povm, double tol) {
  if (ext.sys_dim() != povm.dim() || ext.pvm().size() != povm.size()) {
    std::ostringstream os;
    os << "verify_extension: extension has " << ext.pvm().size() << " outcomes on dimension "
       << ext.sys_dim() << ", POVM has " << povm.size() << " on dimension " << povm.dim();
    throw DimensionError(os.str());
  }
  ExtensionCheck out;
  const auto induced = ext.induced_effects();
  for (int i = 0; i < povm.size(); ++i) {
    const double delta = (induced[static_cast<size_t>(i)] - povm[i]).norm();
    out.deltas.push_back(delta);
    out.max_delta = std::max(out.max_delta, delta);
  }
  out.passed = out.max_delta <= tol;
  return out;
}

Pvm pvm_marginal(const JointPovm& grid, int axis, double tol) {
  if (auto d = diagnose_pvm(grid.cells(), grid.dim(), tol)) throw InvalidMeasurementError(*d);
  return Pvm::validate(marginal_sums(grid.cells(), grid.shape(), axis), grid.dim(), tol);
}

}  // namespace naimark_lab
