#include <doctest.h>

#include <cmath>

#include "naimark_lab/compatibility.hpp"
#include "naimark_lab/naimark.hpp"
#include "../support/random_measurements.hpp"

using namespace naimark_lab;
using naimark_lab::testing::random_povm;
using naimark_lab::testing::random_unitary;

namespace {

constexpr Complex kI{0.0, 1.0};

double max_projector_defect(const NaimarkExtension& ext) {
  double worst = 0.0;
  const auto& p = ext.pvm().effects();
  for (size_t i = 0; i < p.size(); ++i) {
    worst = std::max(worst, frobenius_norm(p[i] * p[i] - p[i]));
    for (size_t j = i + 1; j < p.size(); ++j) worst = std::max(worst, frobenius_norm(p[i] * p[j]));
  }
  return worst;
}

}  // namespace

TEST_CASE("minimal ancilla dimension") {
  CHECK(minimal_ancilla_dim(unsharp_spin(UnsharpSpin(kAxisX, 0.5))).dim == 2);
  const AncillaDimension sharp = minimal_ancilla_dim(unsharp_spin(UnsharpSpin(kAxisZ, 1.0)));
  CHECK(sharp.dim == 1);
  CHECK(sharp.already_projective);
  CHECK(minimal_ancilla_dim(unsharp_trio_joint(0.5).joint().as_povm()).dim == 14);
}

TEST_CASE("dichotomic extension") {
  for (double lambda : {0.0, 0.3, 0.5, 0.9, 1.0}) {
    const Povm a = unsharp_spin(UnsharpSpin(kAxisX, lambda));
    const NaimarkExtension ext = dichotomic_extension(a, identity(2));
    CHECK(ext.anc_dim() == 2);
    CHECK(frobenius_norm(ext.ancilla_state() - basis_operator(2, 0, 0)) == 0.0);
    CHECK(verify_extension(ext, a, 1e-10).passed);
    CHECK(max_projector_defect(ext) <= 1e-10);
    const ComplexMatrix off = ancilla_block(ext.pvm()[0], 2, 0, 1);
    CHECK(frobenius_norm(off + std::sqrt(1 - lambda * lambda) / 2.0 * identity(2)) <= 1e-12);
    CHECK(frobenius_norm(ext.pvm()[0] + ext.pvm()[1] - identity(4)) <= 1e-12);
  }

  // Sharp input: X = 0 and P(1) = |00><00| + |11><11|.
  const NaimarkExtension se = dichotomic_extension(unsharp_spin(UnsharpSpin(kAxisZ, 1.0)), identity(2));
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 0) = 1;
  expected(3, 3) = 1;
  CHECK(frobenius_norm(se.pvm()[0] - expected) <= 1e-15);

  const double lambda = 1 / std::sqrt(2.0);
  const Povm b = unsharp_spin(UnsharpSpin(kAxisY, lambda));
  const NaimarkExtension q2 = dichotomic_extension(b, -kI * pauli::z());
  const ComplexMatrix y = psd_sqrt(b[0] * b[1]);
  CHECK(frobenius_norm(ancilla_block(q2.pvm()[0], 2, 0, 1) + kI * y * pauli::z()) <= 1e-12);
  CHECK(frobenius_norm(ancilla_block(q2.pvm()[0], 2, 1, 0) - kI * pauli::z() * y) <= 1e-12);

  std::mt19937_64 rng(31);
  CHECK_THROWS_AS(dichotomic_extension(random_povm(rng, 2, 3), identity(2)), std::invalid_argument);
  CHECK_THROWS_AS(dichotomic_extension(b, 2.0 * identity(2)), NotUnitaryError);
}

TEST_CASE("reconstruction does not depend on the unitary freedom") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 3;
    const Povm two = random_povm(rng, d, 2);
    const NaimarkExtension e1 = dichotomic_extension(two, random_unitary(rng, d));
    const NaimarkExtension e2 = dichotomic_extension(two, random_unitary(rng, d));
    CHECK(verify_extension(e1, two, 1e-9).passed);
    CHECK(verify_extension(e2, two, 1e-9).passed);

    const Povm many = random_povm(rng, d, 2 + trial % 5);
    std::vector<ComplexMatrix> us;
    for (int m = 0; m < many.size(); ++m) us.push_back(random_unitary(rng, d));
    const NaimarkExtension g = general_extension(many, us);
    CHECK(g.anc_dim() == many.size());
    CHECK(verify_extension(g, many, 1e-9).passed);
    CHECK(max_projector_defect(g) <= 1e-10);
  }
}

TEST_CASE("general extension agrees with the dichotomic one on induced effects") {
  std::mt19937_64 rng(33);
  const Povm p = random_povm(rng, 3, 2);
  const auto a = general_extension(p).induced_effects();
  const auto b = dichotomic_extension(p, identity(3)).induced_effects();
  for (int k = 0; k < 2; ++k) CHECK(frobenius_norm(a[static_cast<size_t>(k)] - b[static_cast<size_t>(k)]) <= 1e-10);

  const Povm sharp = Povm::validate({basis_operator(3, 0, 0), basis_operator(3, 1, 1) + basis_operator(3, 2, 2)}, 3);
  const auto induced = general_extension(sharp).induced_effects();
  for (int k = 0; k < 2; ++k) CHECK(frobenius_norm(induced[static_cast<size_t>(k)] - sharp[k]) <= 1e-12);
}

TEST_CASE("verify_extension reports instead of throwing") {
  const Povm x = unsharp_spin(UnsharpSpin(kAxisX, 0.5));
  const Povm y = unsharp_spin(UnsharpSpin(kAxisY, 0.5));
  const ExtensionCheck mismatch = verify_extension(dichotomic_extension(x, identity(2)), y);
  CHECK_FALSE(mismatch.passed);
  CHECK(mismatch.deltas.size() == 2);
  CHECK(mismatch.max_delta == doctest::Approx(0.5).epsilon(1e-12));

  std::mt19937_64 rng(34);
  CHECK_THROWS_AS(verify_extension(dichotomic_extension(x, identity(2)), random_povm(rng, 3, 2)), DimensionError);
}

TEST_CASE("one projector, two ancilla states") {
  const double r = 1 / std::sqrt(2.0);
  ComplexVector zero(2), one(2), plus(2), minus(2);
  zero << 1, 0;
  one << 0, 1;
  plus << r, r;
  minus << r, -r;
  const ComplexMatrix p1 = outer(kron(zero, zero)) + outer(kron(plus, one));
  const std::vector<ComplexMatrix> pvm{p1, identity(4) - p1};

  const Povm z = Povm::validate({outer(zero), outer(one)}, 2);
  const Povm xb = Povm::validate({outer(plus), outer(minus)}, 2);
  CHECK(verify_extension(NaimarkExtension::make(2, 2, outer(zero), pvm), z, 1e-12).passed);
  CHECK(verify_extension(NaimarkExtension::make(2, 2, outer(one), pvm), xb, 1e-12).passed);
  CHECK_THROWS_AS(NaimarkExtension::make(2, 2, identity(2), pvm), std::invalid_argument);
}

TEST_CASE("PVM marginals of a projector grid") {
  const Povm sz = unsharp_spin(UnsharpSpin(kAxisZ, 1.0));
  const Povm sx = unsharp_spin(UnsharpSpin(kAxisX, 1.0));
  std::vector<ComplexMatrix> cells;
  for (int j1 = 0; j1 < 2; ++j1)
    for (int j2 = 0; j2 < 2; ++j2) cells.push_back(kron(sz[j1], sx[j2]));
  const JointPovm grid = JointPovm::validate(cells, {2, 2}, 4);
  const Pvm m0 = pvm_marginal(grid, 0);
  const Pvm m1 = pvm_marginal(grid, 1);
  for (int k = 0; k < 2; ++k) {
    CHECK(frobenius_norm(m0[k] - kron(sz[k], identity(2))) <= 1e-15);
    CHECK(frobenius_norm(m1[k] - kron(identity(2), sx[k])) <= 1e-15);
  }

  const JointPovm single = JointPovm::validate(sz.effects(), {2}, 2);
  const Pvm same = pvm_marginal(single, 0);
  for (int k = 0; k < 2; ++k) CHECK(frobenius_norm(same[k] - sz[k]) == 0.0);

  const JointPovm soft = unsharp_trio_joint(0.5).joint();
  CHECK_THROWS_AS(pvm_marginal(soft, 0), InvalidMeasurementError);

  // Trio extension: three 16-dimensional marginals, pairwise commuting, and
  // marginalising in either order gives the same operators.
  const NaimarkExtension ext = general_extension(soft.as_povm());
  const JointPovm pgrid = JointPovm::validate(ext.pvm().effects(), {2, 2, 2}, 16);
  std::vector<Pvm> marginals;
  for (int axis = 0; axis < 3; ++axis) marginals.push_back(pvm_marginal(pgrid, axis));
  CHECK(marginals[0][0].rows() == 16);
  CHECK(pvms_pairwise_commute(marginals, 1e-9).commute);
}

TEST_CASE("rotated extensions stay valid") {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + trial % 2, n = 2 + trial % 3, anc = n + trial % 2;
    const Povm p = random_povm(rng, d, n);
    const NaimarkExtension ext = rotated_extension(p, anc, random_unitary(rng, d * (anc - 1)));
    CHECK(ext.anc_dim() == anc);
    CHECK(verify_extension(ext, p, 1e-9).passed);
  }
  CHECK_THROWS_AS(rotated_extension(random_povm(rng, 2, 3), 2, identity(2)), std::invalid_argument);
}
