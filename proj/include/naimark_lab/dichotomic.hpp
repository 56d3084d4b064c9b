// Two-outcome pairs: the unitary-W conditions under which the pair's
// two-level extensions commute, the spin-1/2 specialisation with its closed
// form, a simplex search for W, and (lambda1, lambda2) region scans.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "naimark_lab/compatibility.hpp"
#include "naimark_lab/linalg.hpp"
#include "naimark_lab/measurements.hpp"

namespace naimark_lab {

class DichotomicPair {
 public:
  /// Throws std::invalid_argument unless both POVMs have two outcomes on the
  /// same dimension.
  static DichotomicPair make(Povm a, Povm b, double tol = kDefaultTol);

  const Povm& a() const { return a_; }
  const Povm& b() const { return b_; }
  const ComplexMatrix& x() const { return x_; }  // sqrt(A(1) A(2))
  const ComplexMatrix& y() const { return y_; }  // sqrt(B(1) B(2))
  int dim() const { return a_.dim(); }

 private:
  DichotomicPair(Povm a, Povm b, ComplexMatrix x, ComplexMatrix y)
      : a_(std::move(a)), b_(std::move(b)), x_(std::move(x)), y_(std::move(y)) {}
  Povm a_, b_;
  ComplexMatrix x_, y_;
};

DichotomicPair unsharp_pair(const UnsharpSpin& first, const UnsharpSpin& second);

struct WResidualTerms {
  double r1 = 0.0;  // ||[A1,B1] - (YWX - (WX)^dagger Y)||
  double r2 = 0.0;  // ||{A1,YW} - {XW^dagger,B1}W - (YW - X)||
  double r3 = 0.0;  // ||[W A1 W^dagger, B1] + WXY - Y(WX)^dagger||
  double total = 0.0;
};

/// Throws NotUnitaryError when w is not unitary within unitary_tol.
WResidualTerms w_residual_terms(const DichotomicPair& pair, const ComplexMatrix& w,
                                double unitary_tol = 1e-8);
double w_residual(const DichotomicPair& pair, const ComplexMatrix& w, double unitary_tol = 1e-8);

/// The same three conditions written for unsharp spins with scalar X and Y,
/// each term rescaled so the result equals w_residual on the matching pair.
double spin_w_residual(const std::array<double, 3>& axis1, double lambda1,
                       const std::array<double, 3>& axis2, double lambda2, const ComplexMatrix& w,
                       double unitary_tol = 1e-8);

/// lambda1 {n1.sigma/2, W} sqrt(1-lambda2^2) - lambda2 sqrt(1-lambda1^2) W^dagger {n2.sigma/2, W}.
ComplexMatrix spin_anticommutator_condition(const std::array<double, 3>& axis1, double lambda1,
                                            const std::array<double, 3>& axis2, double lambda2,
                                            const ComplexMatrix& w);

/// theta with W = e^{i theta} sigma_z solving the conditions for orthogonal
/// unsharp spins, or nothing when lambda1^2 + lambda2^2 > 1. For
/// lambda1 lambda2 = 0 the answer is theta = 0, i.e. W = sigma_z.
std::optional<double> xy_closed_form_theta(double lambda1, double lambda2);

/// e^{i theta} (n1 x n2).sigma; for x and y axes this is e^{i theta} sigma_z.
ComplexMatrix orthogonal_closed_form_w(const std::array<double, 3>& axis1,
                                       const std::array<double, 3>& axis2, double theta);

struct WCandidate {
  ComplexMatrix generator;
  ComplexMatrix w;
  double residual = 0.0;
};

struct FindWOptions {
  int restarts = 8;
  int budget = 5000;        // residual evaluations per restart
  double tol = 1e-6;        // residual accepted as a solution
  double polish = 1e-12;    // keep refining a solution down to this
  std::uint64_t seed = 0;
};

struct WSearch {
  WCandidate best;
  bool found = false;
  int restarts_run = 0;
  int evaluations = 0;
};

/// Simplex search over Hermitian generators, W = exp(iH). Restart 0 starts
/// at H = 0; later restarts draw parameters uniformly from [-pi, pi].
WSearch search_w(const DichotomicPair& pair, const FindWOptions& opts = {});

/// The best candidate when its residual is at most opts.tol. Absence means
/// the search was inconclusive, not that the pair is incompatible.
std::optional<WCandidate> find_w(const DichotomicPair& pair, const FindWOptions& opts = {});

/// Joint POVM from the extensions P of a (with U = w) and Q of b (with
/// V = I): cell (j1, j2) is <0|(P(j1)Q(j2) + Q(j2)P(j1))/2|0>. Throws
/// std::invalid_argument when w_residual exceeds tol and std::logic_error
/// when the extensions fail to commute despite a small residual.
JointPovm joint_from_w(const DichotomicPair& pair, const ComplexMatrix& w, double tol = 1e-6);

/// Largest ||[P(j1), Q(j2)]||_F for the extensions used by joint_from_w.
double extension_commutator_norm(const DichotomicPair& pair, const ComplexMatrix& w);

// ---------------------------------------------------------------------------
// Region scans

enum class RegionVerdict { compatible, incompatible, inconclusive, not_applicable };
const char* to_string(RegionVerdict v);

struct RegionRow {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  RegionVerdict w_search = RegionVerdict::inconclusive;
  RegionVerdict oracle = RegionVerdict::inconclusive;
  RegionVerdict closed_form = RegionVerdict::not_applicable;
  double residual = 0.0;               // best W residual found
  std::optional<double> theta;         // closed-form angle when defined
  std::string error;                   // per-point failure, empty when none
};

struct RegionOptions {
  FindWOptions search;
  FeasibilityOptions oracle;
  int threads = 0;  // 0 uses the hardware concurrency
};

/// n x n points lambda = k / (n - 1), k = 0..n-1.
std::vector<std::pair<double, double>> square_grid(int n);

/// Rows sorted by (lambda1, lambda2). Point k uses search seed derived from
/// (options.search.seed, k) in that sorted order, so results do not depend on
/// scheduling.
std::vector<RegionRow> region_scan(const std::array<double, 3>& axis1, const std::array<double, 3>& axis2,
                                   std::vector<std::pair<double, double>> grid,
                                   const RegionOptions& options = {});

}  // namespace naimark_lab
