// Dense complex linear algebra used throughout naimark_lab.
//
// Every operator (effects, projectors, states, unitaries) is an
// Eigen::MatrixXcd. Composite spaces are always ordered system-first, so an
// operator on H_S (x) H_A has row index s * d_A + a.

#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace naimark_lab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance used by every algebraic predicate unless the caller overrides it.
inline constexpr double kDefaultTol = 1e-9;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotHermitianError : public std::domain_error {
 public:
  NotHermitianError(const std::string& what, double deviation)
      : std::domain_error(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

class NotPsdError : public std::domain_error {
 public:
  NotPsdError(const std::string& what, double eigenvalue)
      : std::domain_error(what), eigenvalue_(eigenvalue) {}
  /// The most negative eigenvalue found.
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

class NotUnitaryError : public std::domain_error {
 public:
  NotUnitaryError(const std::string& what, double deviation)
      : std::domain_error(what), deviation_(deviation) {}
  double deviation() const { return deviation_; }

 private:
  double deviation_;
};

ComplexMatrix identity(int n);

/// |i><j| on an n-dimensional space.
ComplexMatrix basis_operator(int n, int i, int j);

/// |v><v| for an arbitrary (not necessarily normalized) vector.
ComplexMatrix outer(const ComplexVector& v);

namespace pauli {
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

/// n . sigma for a real 3-vector n.
ComplexMatrix bloch_operator(const std::array<double, 3>& n);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr_A of an operator on H_S (x) H_A (ancilla is the trailing factor).
ComplexMatrix partial_trace_ancilla(const ComplexMatrix& m, int d_sys, int d_anc);

/// Tr_A[(I (x) sigma) m], the system operator seen through ancilla state sigma.
ComplexMatrix reduce_with_ancilla_state(const ComplexMatrix& m, const ComplexMatrix& sigma);

double frobenius_norm(const ComplexMatrix& a);
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// ||a - a^dagger||_F.
double hermiticity_defect(const ComplexMatrix& a);
ComplexMatrix hermitian_part(const ComplexMatrix& a);

bool is_square(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double tol = kDefaultTol);
bool is_projector(const ComplexMatrix& p, double tol = kDefaultTol);
bool is_psd(const ComplexMatrix& a, double tol = kDefaultTol);
bool is_unitary(const ComplexMatrix& u, double tol = kDefaultTol);

/// ||u^dagger u - I||_F.
double unitarity_defect(const ComplexMatrix& u);

struct HermitianSpectrum {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

/// Spectral decomposition of a Hermitian matrix. Throws NotHermitianError when
/// ||a - a^dagger||_F > tol; the Hermitian part is decomposed otherwise.
HermitianSpectrum hermitian_eigen(const ComplexMatrix& a, double tol = kDefaultTol);

/// V f(D) V^dagger.
ComplexMatrix spectral_apply(const HermitianSpectrum& s, const std::function<Complex(double)>& f);

double min_eigenvalue(const ComplexMatrix& a, double tol = kDefaultTol);
double max_eigenvalue(const ComplexMatrix& a, double tol = kDefaultTol);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol, 0) are
/// clamped to zero; anything below -tol raises NotPsdError.
ComplexMatrix psd_sqrt(const ComplexMatrix& a, double tol = kDefaultTol);

/// Inverse square root of a positive definite matrix.
ComplexMatrix pd_inverse_sqrt(const ComplexMatrix& a, double tol = kDefaultTol);

/// W = exp(i h) for Hermitian h.
ComplexMatrix unitary_from_generator(const ComplexMatrix& h, double tol = kDefaultTol);

/// Hermitian d x d matrix from d^2 real parameters: the diagonal first, then
/// (re, im) of each strictly-upper entry in row-major order.
ComplexMatrix hermitian_from_params(const double* params, int d);
inline int hermitian_param_count(int d) { return d * d; }

}  // namespace naimark_lab
