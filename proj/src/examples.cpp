#include "naimark_lab/examples.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "naimark_lab/compatibility.hpp"
#include "naimark_lab/dichotomic.hpp"
#include "naimark_lab/naimark.hpp"

namespace naimark_lab {

namespace {

constexpr Complex kI{0.0, 1.0};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

ExampleCheck check(std::string example, std::string name, bool passed, std::string detail) {
  return {std::move(example), std::move(name), passed, std::move(detail)};
}

ExampleCheck near(std::string example, std::string name, double computed, double expected, double tol) {
  const bool ok = std::abs(computed - expected) <= tol;
  return check(std::move(example), std::move(name), ok,
               "expected " + fmt(expected) + ", computed " + fmt(computed) + " (tol " + fmt(tol) + ")");
}

ExampleCheck at_most(std::string example, std::string name, double computed, double bound) {
  return check(std::move(example), std::move(name), computed <= bound,
               "expected <= " + fmt(bound) + ", computed " + fmt(computed));
}

ExampleCheck above(std::string example, std::string name, double computed, double bound) {
  return check(std::move(example), std::move(name), computed > bound,
               "expected > " + fmt(bound) + ", computed " + fmt(computed));
}

ComplexVector ket(std::initializer_list<Complex> v) {
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (Complex c : v) out(i++) = c;
  return out;
}

double max_commutator(const Pvm& a, const Pvm& b) {
  double worst = 0.0;
  for (const auto& p : a.effects())
    for (const auto& q : b.effects()) worst = std::max(worst, frobenius_norm(commutator(p, q)));
  return worst;
}

// One projector on qubit (x) qubit-ancilla reproduces the z basis with the
// ancilla in |0> and the x basis with the ancilla in |1>.
std::vector<ExampleCheck> example_one() {
  std::vector<ExampleCheck> out;
  const double r = 1.0 / std::sqrt(2.0);
  const ComplexVector zero = ket({1, 0}), one = ket({0, 1}), plus = ket({r, r}), minus = ket({r, -r});
  const ComplexMatrix p1 = outer(kron(zero, zero)) + outer(kron(plus, one));
  const ComplexMatrix p2 = identity(4) - p1;

  const Povm z_basis = Povm::validate({outer(zero), outer(one)}, 2);
  const Povm x_basis = Povm::validate({outer(plus), outer(minus)}, 2);
  const NaimarkExtension with0 = NaimarkExtension::make(2, 2, outer(zero), {p1, p2});
  const NaimarkExtension with1 = NaimarkExtension::make(2, 2, outer(one), {p1, p2});

  out.push_back(at_most("1", "ancilla |0> reproduces {|0><0|, |1><1|}", verify_extension(with0, z_basis).max_delta, 1e-12));
  out.push_back(at_most("1", "ancilla |1> reproduces {|+><+|, |-><-|}", verify_extension(with1, x_basis).max_delta, 1e-12));
  out.push_back(at_most("1", "partial trace of P(1) is |0><0| + |+><+|",
                        frobenius_norm(partial_trace_ancilla(p1, 2, 2) - outer(zero) - outer(plus)), 1e-12));

  const std::vector<NaimarkExtension> mixed{with0, with1};
  bool rejected = false;
  try {
    joint_povm_from_common_extension(mixed);
  } catch (const AncillaMismatchError&) {
    rejected = true;
  }
  out.push_back(check("1", "extensions with different ancilla states are rejected", rejected,
                      rejected ? "AncillaMismatchError raised" : "no error raised"));
  return out;
}

std::vector<ExampleCheck> example_two() {
  std::vector<ExampleCheck> out;
  const double lambda = 0.5;
  const TrioJoint trio = unsharp_trio_joint(lambda);
  out.push_back(check("2", "trio joint valid at lambda = 0.5", trio.valid,
                      "min eigenvalue " + fmt(trio.min_eigenvalue())));
  const JointPovm joint = trio.joint();
  const NaimarkExtension ext = general_extension(joint.as_povm());
  out.push_back(near("2", "8-level ancilla gives 16x16 projectors", static_cast<double>(ext.pvm()[0].rows()), 16, 0));

  const JointPovm grid = JointPovm::validate(ext.pvm().effects(), joint.shape(), 16);
  const std::array<std::array<double, 3>, 3> axes{kAxisX, kAxisY, kAxisZ};
  std::vector<Pvm> marginals;
  std::vector<NaimarkExtension> exts;
  for (int axis = 0; axis < 3; ++axis) {
    marginals.push_back(pvm_marginal(grid, axis));
    exts.push_back(NaimarkExtension::make(2, 8, basis_operator(8, 0, 0), marginals.back().effects()));
    const Povm expected = unsharp_spin(UnsharpSpin(axes[static_cast<size_t>(axis)], lambda));
    out.push_back(at_most("2", std::string("marginal extension ") + "xyz"[axis] + " reproduces the unsharp spin",
                          verify_extension(exts.back(), expected).max_delta, 1e-9));
  }
  const CommutationReport comm = pvms_pairwise_commute(marginals);
  out.push_back(at_most("2", "marginal PVMs pairwise commute", comm.max_norm, 1e-9));

  const JointPovm rebuilt = joint_pvm_from_commuting(marginals);
  double worst = 0.0;
  for (size_t c = 0; c < rebuilt.cells().size(); ++c)
    worst = std::max(worst, frobenius_norm(rebuilt.cells()[c] - grid.cells()[c]));
  out.push_back(at_most("2", "product of marginals equals the 8-outcome PVM", worst, 1e-9));

  const CompatReport report = joint_povm_from_common_extension(exts);
  out.push_back(check("2", "common extension certifies the trio", report.verdict == Verdict::compatible_certified,
                      std::string("verdict ") + to_string(report.verdict)));
  return out;
}

// u = -I gives the +sqrt(E1 E2) off-diagonal form with E(2) in block (1,1).
std::vector<ExampleCheck> example_three() {
  std::vector<ExampleCheck> out;
  const ComplexMatrix minus_id = -identity(2);
  for (int k = 1; k <= 10; ++k) {
    const double lambda = k / 10.0;
    const Povm a = unsharp_spin(UnsharpSpin(kAxisX, lambda));
    const Povm b = unsharp_spin(UnsharpSpin(kAxisY, lambda));
    const NaimarkExtension p = dichotomic_extension(a, minus_id);
    const NaimarkExtension q = dichotomic_extension(b, minus_id);
    const double c = std::sqrt(1.0 - lambda * lambda) / 2.0;
    const double block = frobenius_norm(ancilla_block(p.pvm()[0], 2, 0, 1) - c * identity(2)) +
                         frobenius_norm(ancilla_block(p.pvm()[0], 2, 1, 1) - a[1]);
    const double norm = frobenius_norm(commutator(p.pvm()[0], q.pvm()[0]));
    const std::string tag = "lambda = " + fmt(lambda);
    out.push_back(at_most("3", tag + ": P(1) has the stated blocks", block, 1e-12));
    out.push_back(near("3", tag + ": ||[P(1),Q(1)]||_F = sqrt(2 l^2 - l^4)", norm,
                       std::sqrt(2 * lambda * lambda - std::pow(lambda, 4)), 1e-10));

    // Block form of the commutator, assembled independently.
    const ComplexMatrix diag = (lambda * lambda / 2.0) * kI * pauli::z();
    const ComplexMatrix off = (lambda * std::sqrt(1 - lambda * lambda) / 2.0) * (pauli::x() - pauli::y());
    const ComplexMatrix expected = from_ancilla_blocks({{diag, off}, {-off, diag}});
    out.push_back(at_most("3", tag + ": commutator matches the block expansion",
                          frobenius_norm(commutator(p.pvm()[0], q.pvm()[0]) - expected), 1e-12));
    out.push_back(above("3", tag + ": extensions do not commute", norm, 0.0));
  }

  const Povm a = unsharp_spin(UnsharpSpin(kAxisX, 0.5));
  const Povm b = unsharp_spin(UnsharpSpin(kAxisY, 0.5));
  const std::vector<NaimarkExtension> exts{dichotomic_extension(a, minus_id), dichotomic_extension(b, minus_id)};
  const CompatReport report = joint_povm_from_common_extension(exts);
  out.push_back(check("3", "lambda = 0.5: non-commuting extensions are inconclusive",
                      report.verdict == Verdict::inconclusive, std::string("verdict ") + to_string(report.verdict)));
  const std::vector<Povm> povms{a, b};
  const FeasibilityResult oracle = feasibility_oracle(povms);
  out.push_back(check("3", "lambda = 0.5: pair is nevertheless compatible", oracle.feasible,
                      std::string("oracle ") + to_string(oracle.status)));
  return out;
}

// Unitaries whose two-level extensions carry the stated off-diagonal blocks.
std::vector<ExampleCheck> example_four() {
  std::vector<ExampleCheck> out;
  const double lambda = 1.0 / std::sqrt(2.0);
  const Povm a1 = unsharp_spin(UnsharpSpin(kAxisX, lambda));
  const Povm a2 = unsharp_spin(UnsharpSpin(kAxisY, lambda));
  const Povm a3 = unsharp_spin(UnsharpSpin(kAxisZ, lambda));

  const Pvm q1 = dichotomic_extension(a1, identity(2)).pvm();
  const Pvm q2 = dichotomic_extension(a2, -kI * pauli::z()).pvm();
  const Pvm q3 = dichotomic_extension(a3, kI * pauli::y()).pvm();
  const Pvm q2p = dichotomic_extension(a2, identity(2)).pvm();
  const Pvm q3p = dichotomic_extension(a3, -kI * pauli::x()).pvm();

  const ComplexMatrix x2 = psd_sqrt(a2[0] * a2[1]);
  out.push_back(at_most("4", "Q2(1) off-diagonal block is -i sqrt(A2(1)A2(2)) sigma_z",
                        frobenius_norm(ancilla_block(q2[0], 2, 0, 1) + kI * x2 * pauli::z()), 1e-12));

  out.push_back(at_most("4", "[Q1(1), Q2(1)] = 0", max_commutator(q1, q2), 1e-12));
  out.push_back(at_most("4", "[Q1(1), Q3(1)] = 0", max_commutator(q1, q3), 1e-12));
  out.push_back(above("4", "[Q2(1), Q3(1)] != 0", max_commutator(q2, q3), 1e-3));
  out.push_back(at_most("4", "[Q2'(1), Q3'(1)] = 0", max_commutator(q2p, q3p), 1e-12));

  const std::vector<Povm> triple{a1, a2, a3};
  const FeasibilityResult oracle = feasibility_oracle(triple);
  out.push_back(check("4", "the triple itself is incompatible", oracle.status == FeasibilityStatus::infeasible,
                      std::string("oracle ") + to_string(oracle.status)));
  return out;
}

}  // namespace

std::vector<ExampleCheck> run_example(int which) {
  switch (which) {
    case 1: return example_one();
    case 2: return example_two();
    case 3: return example_three();
    case 4: return example_four();
  }
  throw std::invalid_argument("unknown example " + std::to_string(which) + " (expected 1-4)");
}

std::vector<ExampleCheck> run_all_examples() {
  std::vector<ExampleCheck> out;
  for (int k = 1; k <= 4; ++k) {
    auto part = run_example(k);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace naimark_lab
