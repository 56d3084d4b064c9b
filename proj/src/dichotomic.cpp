#include "naimark_lab/dichotomic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

#include "naimark_lab/naimark.hpp"
#include "naimark_lab/optimize.hpp"

namespace naimark_lab {

namespace {

void require_unitary_w(const ComplexMatrix& w, int dim, double tol) {
  if (w.rows() != dim || w.cols() != dim) {
    std::ostringstream os;
    os << "W must be " << dim << "x" << dim << ", got " << w.rows() << "x" << w.cols();
    throw DimensionError(os.str());
  }
  const double defect = unitarity_defect(w);
  if (defect > tol) {
    std::ostringstream os;
    os << "W is not unitary: ||W^dagger W - I||_F = " << defect;
    throw NotUnitaryError(os.str(), defect);
  }
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

}  // namespace

DichotomicPair DichotomicPair::make(Povm a, Povm b, double tol) {
  if (a.size() != 2 || b.size() != 2) {
    std::ostringstream os;
    os << "dichotomic pair needs two-outcome POVMs, got " << a.size() << " and " << b.size() << " outcomes";
    throw std::invalid_argument(os.str());
  }
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "dichotomic pair: dimensions " << a.dim() << " and " << b.dim() << " differ";
    throw DimensionError(os.str());
  }
  ComplexMatrix x = psd_sqrt(a[0] * a[1], tol);
  ComplexMatrix y = psd_sqrt(b[0] * b[1], tol);
  return DichotomicPair(std::move(a), std::move(b), std::move(x), std::move(y));
}

DichotomicPair unsharp_pair(const UnsharpSpin& first, const UnsharpSpin& second) {
  return DichotomicPair::make(unsharp_spin(first), unsharp_spin(second));
}

WResidualTerms w_residual_terms(const DichotomicPair& pair, const ComplexMatrix& w, double unitary_tol) {
  require_unitary_w(w, pair.dim(), unitary_tol);
  const ComplexMatrix& a1 = pair.a()[0];
  const ComplexMatrix& b1 = pair.b()[0];
  const ComplexMatrix& x = pair.x();
  const ComplexMatrix& y = pair.y();
  const ComplexMatrix wx = w * x;
  const ComplexMatrix yw = y * w;

  WResidualTerms t;
  t.r1 = frobenius_norm(commutator(a1, b1) - (y * wx - wx.adjoint() * y));
  t.r2 = frobenius_norm(anticommutator(a1, yw) - anticommutator(x * w.adjoint(), b1) * w - (yw - x));
  t.r3 = frobenius_norm(commutator(w * a1 * w.adjoint(), b1) + wx * y - y * wx.adjoint());
  t.total = t.r1 + t.r2 + t.r3;
  return t;
}

double w_residual(const DichotomicPair& pair, const ComplexMatrix& w, double unitary_tol) {
  return w_residual_terms(pair, w, unitary_tol).total;
}

ComplexMatrix spin_anticommutator_condition(const std::array<double, 3>& axis1, double lambda1,
                                            const std::array<double, 3>& axis2, double lambda2,
                                            const ComplexMatrix& w) {
  const ComplexMatrix s1 = bloch_operator(axis1) / 2.0;
  const ComplexMatrix s2 = bloch_operator(axis2) / 2.0;
  const double c1 = std::sqrt(std::max(0.0, 1.0 - lambda1 * lambda1));
  const double c2 = std::sqrt(std::max(0.0, 1.0 - lambda2 * lambda2));
  return lambda1 * c2 * anticommutator(s1, w) - lambda2 * c1 * w.adjoint() * anticommutator(s2, w);
}

double spin_w_residual(const std::array<double, 3>& axis1, double lambda1,
                       const std::array<double, 3>& axis2, double lambda2, const ComplexMatrix& w,
                       double unitary_tol) {
  UnsharpSpin(axis1, lambda1);
  UnsharpSpin(axis2, lambda2);
  require_unitary_w(w, 2, unitary_tol);
  const ComplexMatrix s1 = bloch_operator(axis1);
  const ComplexMatrix s2 = bloch_operator(axis2);
  const double c1 = std::sqrt(std::max(0.0, 1.0 - lambda1 * lambda1));
  const double c2 = std::sqrt(std::max(0.0, 1.0 - lambda2 * lambda2));
  const ComplexMatrix skew = w - w.adjoint();

  const ComplexMatrix t1 = lambda1 * lambda2 * commutator(s1, s2) - c1 * c2 * skew;
  const ComplexMatrix t2 = spin_anticommutator_condition(axis1, lambda1, axis2, lambda2, w);
  const ComplexMatrix t3 = lambda1 * lambda2 * commutator(w * s1 * w.adjoint(), s2) + c1 * c2 * skew;
  return frobenius_norm(t1) / 4.0 + frobenius_norm(t2) / 2.0 + frobenius_norm(t3) / 4.0;
}

std::optional<double> xy_closed_form_theta(double lambda1, double lambda2) {
  if (lambda1 < 0.0 || lambda1 > 1.0 || lambda2 < 0.0 || lambda2 > 1.0)
    throw std::invalid_argument("xy_closed_form_theta: lambdas must lie in [0, 1]");
  if (lambda1 * lambda1 + lambda2 * lambda2 > 1.0 + 1e-12) return std::nullopt;
  const double prod = lambda1 * lambda2;
  if (prod == 0.0) return 0.0;
  const double denom = std::sqrt((1.0 - lambda1 * lambda1) * (1.0 - lambda2 * lambda2));
  const double s = denom > 0.0 ? std::min(1.0, prod / denom) : 1.0;
  return std::asin(s);
}

ComplexMatrix orthogonal_closed_form_w(const std::array<double, 3>& axis1,
                                       const std::array<double, 3>& axis2, double theta) {
  if (std::abs(dot(axis1, axis2)) > 1e-12)
    throw std::invalid_argument("orthogonal_closed_form_w: axes are not orthogonal");
  return std::polar(1.0, theta) * bloch_operator(cross(axis1, axis2));
}

WSearch search_w(const DichotomicPair& pair, const FindWOptions& opts) {
  const int d = pair.dim();
  const Objective objective = [&pair, d](std::span<const double> p) {
    return w_residual(pair, unitary_from_generator(hermitian_from_params(p.data(), d)));
  };

  SimplexOptions simplex;
  simplex.budget = opts.budget;
  simplex.target = opts.polish;

  WSearch out;
  std::vector<double> best_x;
  out.best.residual = std::numeric_limits<double>::infinity();
  const int restarts = std::max(opts.restarts, 1);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x0(static_cast<size_t>(hermitian_param_count(d)), 0.0);
    if (r > 0) {
      auto rng = restart_rng(opts.seed, static_cast<std::uint64_t>(r));
      std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
      for (auto& v : x0) v = angle(rng);
    }
    const SimplexResult res = minimize_simplex(objective, std::move(x0), simplex);
    ++out.restarts_run;
    out.evaluations += res.evaluations;
    if (res.value < out.best.residual) {
      out.best.residual = res.value;
      best_x = res.x;
    }
    if (out.best.residual <= opts.tol) break;
  }
  out.best.generator = hermitian_from_params(best_x.data(), d);
  out.best.w = unitary_from_generator(out.best.generator);
  out.best.residual = w_residual(pair, out.best.w);
  out.found = out.best.residual <= opts.tol;
  return out;
}

std::optional<WCandidate> find_w(const DichotomicPair& pair, const FindWOptions& opts) {
  WSearch s = search_w(pair, opts);
  if (!s.found) return std::nullopt;
  return std::move(s.best);
}

double extension_commutator_norm(const DichotomicPair& pair, const ComplexMatrix& w) {
  const NaimarkExtension p = dichotomic_extension(pair.a(), w);
  const NaimarkExtension q = dichotomic_extension(pair.b(), identity(pair.dim()));
  double worst = 0.0;
  for (const auto& pj : p.pvm().effects())
    for (const auto& qk : q.pvm().effects()) worst = std::max(worst, frobenius_norm(commutator(pj, qk)));
  return worst;
}

JointPovm joint_from_w(const DichotomicPair& pair, const ComplexMatrix& w, double tol) {
  const double residual = w_residual(pair, w);
  if (residual > tol) {
    std::ostringstream os;
    os << "joint_from_w: W residual " << residual << " exceeds " << tol;
    throw std::invalid_argument(os.str());
  }
  const NaimarkExtension p = dichotomic_extension(pair.a(), w);
  const NaimarkExtension q = dichotomic_extension(pair.b(), identity(pair.dim()));

  // ||[P(1), Q(1)]||_F <= sqrt(2) * residual; anything larger is a bug.
  const double bound = std::sqrt(2.0) * residual + 1e-9;
  double worst = 0.0;
  for (const auto& pj : p.pvm().effects())
    for (const auto& qk : q.pvm().effects()) worst = std::max(worst, frobenius_norm(commutator(pj, qk)));
  if (worst > bound) {
    std::ostringstream os;
    os << "joint_from_w: extensions fail to commute (" << worst << ") although the W residual is "
       << residual;
    throw std::logic_error(os.str());
  }

  const ComplexMatrix ground = basis_operator(2, 0, 0);
  std::vector<ComplexMatrix> cells;
  for (const auto& pj : p.pvm().effects())
    for (const auto& qk : q.pvm().effects())
      cells.push_back(hermitian_part(reduce_with_ancilla_state((pj * qk + qk * pj) / 2.0, ground)));
  return JointPovm::validate(std::move(cells), {2, 2}, pair.dim(), std::max(tol, kDefaultTol));
}

const char* to_string(RegionVerdict v) {
  switch (v) {
    case RegionVerdict::compatible: return "compatible";
    case RegionVerdict::incompatible: return "incompatible";
    case RegionVerdict::inconclusive: return "inconclusive";
    case RegionVerdict::not_applicable: return "n/a";
  }
  return "unknown";
}

std::vector<std::pair<double, double>> square_grid(int n) {
  if (n < 2) throw std::invalid_argument("square_grid: need at least 2 points per axis");
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.emplace_back(static_cast<double>(i) / (n - 1), static_cast<double>(j) / (n - 1));
  return out;
}

namespace {

RegionRow scan_point(const std::array<double, 3>& axis1, const std::array<double, 3>& axis2, double l1,
                     double l2, const RegionOptions& options, std::uint64_t point_seed, bool orthogonal) {
  RegionRow row;
  row.lambda1 = l1;
  row.lambda2 = l2;
  try {
    const UnsharpSpin s1(axis1, l1), s2(axis2, l2);
    const DichotomicPair pair = unsharp_pair(s1, s2);

    FindWOptions search = options.search;
    search.seed = point_seed;
    const WSearch found = search_w(pair, search);
    row.residual = found.best.residual;
    row.w_search = found.found ? RegionVerdict::compatible : RegionVerdict::inconclusive;

    const std::vector<Povm> povms{pair.a(), pair.b()};
    const FeasibilityResult oracle = feasibility_oracle(povms, options.oracle);
    switch (oracle.status) {
      case FeasibilityStatus::feasible: row.oracle = RegionVerdict::compatible; break;
      case FeasibilityStatus::infeasible: row.oracle = RegionVerdict::incompatible; break;
      case FeasibilityStatus::inconclusive: row.oracle = RegionVerdict::inconclusive; break;
    }

    if (orthogonal) {
      row.theta = xy_closed_form_theta(l1, l2);
      row.closed_form = row.theta ? RegionVerdict::compatible : RegionVerdict::incompatible;
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

std::vector<RegionRow> region_scan(const std::array<double, 3>& axis1, const std::array<double, 3>& axis2,
                                   std::vector<std::pair<double, double>> grid, const RegionOptions& options) {
  UnsharpSpin(axis1, 0.0);
  UnsharpSpin(axis2, 0.0);
  std::sort(grid.begin(), grid.end());
  const bool orthogonal = std::abs(dot(axis1, axis2)) <= 1e-12;

  std::vector<RegionRow> rows(grid.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t k = next++; k < grid.size(); k = next++) {
      const std::uint64_t seed = restart_rng(options.search.seed, k)();
      rows[k] = scan_point(axis1, axis2, grid[k].first, grid[k].second, options, seed, orthogonal);
    }
  };

  unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<size_t>(grid.size(), 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return rows;
}

}  // namespace naimark_lab
