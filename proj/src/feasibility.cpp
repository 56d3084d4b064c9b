#include "naimark_lab/compatibility.hpp"

#include <cmath>
#include <deque>
#include <sstream>

namespace naimark_lab {

const char* to_string(FeasibilityStatus s) {
  switch (s) {
    case FeasibilityStatus::feasible: return "feasible";
    case FeasibilityStatus::infeasible: return "infeasible";
    case FeasibilityStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

using Grid = std::vector<ComplexMatrix>;

ComplexMatrix psd_part(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
  const RealVector clamped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clamped.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double distance(const Grid& a, const Grid& b) {
  double sq = 0.0;
  for (size_t c = 0; c < a.size(); ++c) sq += (a[c] - b[c]).squaredNorm();
  return std::sqrt(sq);
}

// Orthogonal projection onto {X : every marginal of X equals the target}.
// The constraint acts on the cell index only, so one real C x C projector
// onto the row space of the marginal operator handles every matrix entry.
class AffineProjector {
 public:
  AffineProjector(std::span<const Povm> povms, const std::vector<int>& shape) {
    const int cells = grid_size(shape);
    int rows = 0;
    for (int n : shape) rows += n;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cells);
    for (int c = 0; c < cells; ++c) {
      const auto multi = unravel_index(c, shape);
      int offset = 0;
      for (size_t i = 0; i < shape.size(); ++i) {
        m(offset + multi[i], c) = 1.0;
        offset += shape[i];
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m.transpose());
    const auto rank = qr.rank();
    const Eigen::MatrixXd q = Eigen::MatrixXd(qr.householderQ()).leftCols(rank);
    row_space_ = q * q.transpose();

    const int d = povms[0].dim();
    const auto n_axes = static_cast<double>(shape.size());
    base_.assign(static_cast<size_t>(cells), ComplexMatrix::Zero(d, d));
    for (int c = 0; c < cells; ++c) {
      const auto multi = unravel_index(c, shape);
      ComplexMatrix& x = base_[static_cast<size_t>(c)];
      for (size_t i = 0; i < shape.size(); ++i)
        x += povms[i][multi[i]] * (static_cast<double>(shape[i]) / cells);
      x -= identity(d) * ((n_axes - 1.0) / cells);
    }
  }

  const Grid& particular() const { return base_; }

  Grid project(const Grid& x) const {
    Grid diff(x.size());
    for (size_t c = 0; c < x.size(); ++c) diff[c] = x[c] - base_[c];
    Grid out = x;
    for (size_t c = 0; c < x.size(); ++c)
      for (size_t k = 0; k < x.size(); ++k) {
        const double w = row_space_(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k));
        if (w != 0.0) out[c] -= w * diff[k];
      }
    for (auto& cell : out) cell = hermitian_part(cell);
    return out;
  }

 private:
  Eigen::MatrixXd row_space_;
  Grid base_;
};

}  // namespace

FeasibilityResult feasibility_oracle(std::span<const Povm> povms, const FeasibilityOptions& opts) {
  if (povms.empty()) throw std::invalid_argument("feasibility_oracle: no POVMs given");
  const int d = povms[0].dim();
  std::vector<int> shape;
  for (size_t i = 0; i < povms.size(); ++i) {
    if (povms[i].dim() != d) {
      std::ostringstream os;
      os << "feasibility_oracle: POVM " << i << " has dimension " << povms[i].dim() << ", POVM 0 has " << d;
      throw DimensionError(os.str());
    }
    shape.push_back(povms[i].size());
  }
  const int cells = grid_size(shape);
  if (cells > opts.max_cells) {
    std::ostringstream os;
    os << "feasibility_oracle: outcome grid has " << cells << " cells, limit is " << opts.max_cells;
    throw std::invalid_argument(os.str());
  }

  const AffineProjector affine(povms, shape);
  FeasibilityResult out;
  Grid x = affine.particular();
  std::deque<double> history;

  auto try_witness = [&](const Grid& candidate) -> bool {
    try {
      out.joint = JointPovm::validate(candidate, shape, d, opts.witness_tol);
      return true;
    } catch (const InvalidMeasurementError&) {
      return false;
    }
  };

  for (int it = 1; it <= opts.max_iter; ++it) {
    Grid y(x.size());
    for (size_t c = 0; c < x.size(); ++c) y[c] = psd_part(x[c]);
    Grid next = affine.project(y);
    out.iterations = it;
    out.residual = distance(y, next);
    x = std::move(next);

    if (out.residual <= opts.tol && try_witness(x)) {
      out.status = FeasibilityStatus::feasible;
      out.feasible = true;
      return out;
    }
    history.push_back(out.residual);
    if (static_cast<int>(history.size()) > opts.stall_window) {
      const double old = history.front();
      history.pop_front();
      if (old - out.residual < opts.stall_rel * old) {
        out.status = FeasibilityStatus::infeasible;
        return out;
      }
    }
  }
  out.status = FeasibilityStatus::inconclusive;
  return out;
}

}  // namespace naimark_lab
