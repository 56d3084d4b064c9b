#include "naimark_lab/linalg.hpp"

#include <cmath>
#include <sstream>

namespace naimark_lab {

namespace {

void require_square(const ComplexMatrix& a, const char* what) {
  if (!is_square(a)) {
    std::ostringstream os;
    os << what << ": expected a square matrix, got " << a.rows() << "x" << a.cols();
    throw DimensionError(os.str());
  }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << what << ": dimension mismatch " << a.rows() << "x" << a.cols() << " vs " << b.rows()
       << "x" << b.cols();
    throw DimensionError(os.str());
  }
}

}  // namespace

ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

ComplexMatrix basis_operator(int n, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix outer(const ComplexVector& v) { return v * v.adjoint(); }

namespace pauli {
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

ComplexMatrix bloch_operator(const std::array<double, 3>& n) {
  return n[0] * pauli::x() + n[1] * pauli::y() + n[2] * pauli::z();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rb = b.rows(), cb = b.cols();
  ComplexMatrix out(a.rows() * rb, a.cols() * cb);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace_ancilla(const ComplexMatrix& m, int d_sys, int d_anc) {
  const Eigen::Index n = static_cast<Eigen::Index>(d_sys) * d_anc;
  if (d_sys <= 0 || d_anc <= 0 || m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << "partial_trace_ancilla: expected a " << n << "x" << n << " matrix (d_sys=" << d_sys
       << ", d_anc=" << d_anc << "), got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
  ComplexMatrix out = ComplexMatrix::Zero(d_sys, d_sys);
  for (int s = 0; s < d_sys; ++s)
    for (int t = 0; t < d_sys; ++t)
      for (int a = 0; a < d_anc; ++a) out(s, t) += m(s * d_anc + a, t * d_anc + a);
  return out;
}

ComplexMatrix reduce_with_ancilla_state(const ComplexMatrix& m, const ComplexMatrix& sigma) {
  require_square(sigma, "reduce_with_ancilla_state");
  const int d_anc = static_cast<int>(sigma.rows());
  if (d_anc == 0 || m.rows() % d_anc != 0 || m.rows() != m.cols()) {
    std::ostringstream os;
    os << "reduce_with_ancilla_state: operator of size " << m.rows() << "x" << m.cols()
       << " is not compatible with an ancilla of dimension " << d_anc;
    throw DimensionError(os.str());
  }
  const int d_sys = static_cast<int>(m.rows()) / d_anc;
  ComplexMatrix out = ComplexMatrix::Zero(d_sys, d_sys);
  for (int s = 0; s < d_sys; ++s)
    for (int t = 0; t < d_sys; ++t) {
      Complex acc = 0;
      for (int a = 0; a < d_anc; ++a)
        for (int b = 0; b < d_anc; ++b) acc += sigma(a, b) * m(s * d_anc + b, t * d_anc + a);
      out(s, t) = acc;
    }
  return out;
}

double frobenius_norm(const ComplexMatrix& a) { return a.norm(); }

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator");
  require_same_shape(a, b, "commutator");
  return a * b - b * a;
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "anticommutator");
  require_same_shape(a, b, "anticommutator");
  return a * b + b * a;
}

double hermiticity_defect(const ComplexMatrix& a) { return (a - a.adjoint()).norm(); }

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

bool is_square(const ComplexMatrix& a) { return a.rows() == a.cols() && a.rows() > 0; }

bool is_hermitian(const ComplexMatrix& a, double tol) {
  return is_square(a) && hermiticity_defect(a) <= tol;
}

bool is_projector(const ComplexMatrix& p, double tol) {
  return is_hermitian(p, tol) && (p * p - p).norm() <= tol;
}

bool is_psd(const ComplexMatrix& a, double tol) {
  return is_hermitian(a, tol) && min_eigenvalue(a, tol) >= -tol;
}

double unitarity_defect(const ComplexMatrix& u) {
  return (u.adjoint() * u - ComplexMatrix::Identity(u.cols(), u.cols())).norm();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  return is_square(u) && unitarity_defect(u) <= tol;
}

HermitianSpectrum hermitian_eigen(const ComplexMatrix& a, double tol) {
  require_square(a, "hermitian_eigen");
  const double defect = hermiticity_defect(a);
  if (defect > tol) {
    std::ostringstream os;
    os << "matrix is not Hermitian: ||A - A^dagger||_F = " << defect << " > " << tol;
    throw NotHermitianError(os.str(), defect);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(a));
  return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix spectral_apply(const HermitianSpectrum& s, const std::function<Complex(double)>& f) {
  ComplexVector fd(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) fd(i) = f(s.values(i));
  return s.vectors * fd.asDiagonal() * s.vectors.adjoint();
}

double min_eigenvalue(const ComplexMatrix& a, double tol) {
  return hermitian_eigen(a, tol).values.minCoeff();
}

double max_eigenvalue(const ComplexMatrix& a, double tol) {
  return hermitian_eigen(a, tol).values.maxCoeff();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a, double tol) {
  const HermitianSpectrum s = hermitian_eigen(a, tol);
  const double lowest = s.values.minCoeff();
  if (lowest < -tol) {
    std::ostringstream os;
    os << "matrix is not PSD: eigenvalue " << lowest << " < -" << tol;
    throw NotPsdError(os.str(), lowest);
  }
  ComplexMatrix r = spectral_apply(s, [](double v) { return Complex(std::sqrt(std::max(v, 0.0))); });
  return hermitian_part(r);
}

ComplexMatrix pd_inverse_sqrt(const ComplexMatrix& a, double tol) {
  const HermitianSpectrum s = hermitian_eigen(a, tol);
  const double lowest = s.values.minCoeff();
  if (lowest <= tol) {
    std::ostringstream os;
    os << "matrix is not positive definite: eigenvalue " << lowest;
    throw NotPsdError(os.str(), lowest);
  }
  return hermitian_part(spectral_apply(s, [](double v) { return Complex(1.0 / std::sqrt(v)); }));
}

ComplexMatrix unitary_from_generator(const ComplexMatrix& h, double tol) {
  const HermitianSpectrum s = hermitian_eigen(h, tol);
  return spectral_apply(s, [](double v) { return std::polar(1.0, v); });
}

ComplexMatrix hermitian_from_params(const double* params, int d) {
  ComplexMatrix h(d, d);
  int k = 0;
  for (int i = 0; i < d; ++i) h(i, i) = params[k++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const Complex v(params[k], params[k + 1]);
      k += 2;
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  return h;
}

}  // namespace naimark_lab
