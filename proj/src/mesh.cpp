#include "qnc/mesh.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "qnc/rng.hpp"

namespace qnc {

using std::complex;

MeshElement MeshElement::beamsplitter(int a, int b, double theta, double phi) {
  if (a == b || a < 0 || b < 0) throw std::invalid_argument("beamsplitter: invalid mode pair");
  MeshElement e;
  e.kind = Kind::BeamSplitter;
  e.mode_a = a;
  e.mode_b = b;
  e.theta = theta;
  e.phi = phi;
  return e;
}

MeshElement MeshElement::phase_shifter(int mode, double phi) {
  if (mode < 0) throw std::invalid_argument("phase_shifter: invalid mode");
  MeshElement e;
  e.kind = Kind::PhaseShifter;
  e.mode_a = mode;
  e.mode_b = mode;
  e.phi = phi;
  return e;
}

Eigen::MatrixXcd MeshElement::matrix(int dim) const {
  if (mode_a >= dim || mode_b >= dim)
    throw std::invalid_argument("mesh element: mode index out of range");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  if (kind == Kind::PhaseShifter) {
    m(mode_a, mode_a) = std::polar(1.0, phi);
  } else {
    const double c = std::cos(theta), s = std::sin(theta);
    m(mode_a, mode_a) = c;
    m(mode_a, mode_b) = -std::polar(1.0, -phi) * s;
    m(mode_b, mode_a) = std::polar(1.0, phi) * s;
    m(mode_b, mode_b) = c;
  }
  return m;
}

double unitarity_error(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd g = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return g.cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& u, double* adjustment) {
  if (u.rows() != u.cols() || u.rows() < 1)
    throw std::invalid_argument("orthonormalize: matrix must be square and nonempty");
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(u);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase freedom so Q stays close to the input columns.
  for (int j = 0; j < q.cols(); ++j) {
    const complex<double> rjj = r(j, j);
    if (std::abs(rjj) > 0.0) q.col(j) *= rjj / std::abs(rjj);
  }
  if (adjustment) *adjustment = (q - u).cwiseAbs().maxCoeff();
  return q;
}

MeshPlan decompose(const Eigen::MatrixXcd& u_in) {
  const int d = static_cast<int>(u_in.rows());
  if (u_in.cols() != d || d < 1) throw std::invalid_argument("decompose: matrix must be square");
  const double uerr = unitarity_error(u_in);
  if (uerr > 1e-10)
    throw std::invalid_argument("decompose: input deviates from unitarity by " +
                                std::to_string(uerr) + " (max-norm); orthonormalize first");

  // Null the strict lower triangle column by column with Givens rotations
  // G acting on adjacent rows, so G_m ... G_1 U = D and U = G_1^H ... G_m^H D.
  Eigen::MatrixXcd u = u_in;
  std::vector<MeshElement> rotations;
  for (int col = 0; col < d - 1; ++col) {
    for (int row = d - 1; row > col; --row) {
      const complex<double> a = u(row - 1, col);
      const complex<double> b = u(row, col);
      if (std::abs(b) < 1e-300) continue;
      double theta, phi;
      if (std::abs(a) < 1e-300) {
        theta = M_PI / 2.0;
        phi = std::arg(b);
      } else {
        theta = std::atan2(std::abs(b), std::abs(a));
        phi = M_PI + std::arg(b) - std::arg(a);
      }
      const MeshElement g = MeshElement::beamsplitter(row - 1, row, theta, phi);
      u = g.matrix(d) * u;
      u(row, col) = 0.0;
      rotations.push_back(g);
    }
  }

  MeshPlan plan;
  for (int k = 0; k < d; ++k) {
    const double ph = std::arg(u(k, k));
    if (std::abs(ph) > 0.0) plan.push_back(MeshElement::phase_shifter(k, ph));
  }
  // Adjoint of each rotation, applied in reverse nulling order.
  for (auto it = rotations.rbegin(); it != rotations.rend(); ++it) {
    MeshElement adj = *it;
    adj.theta = -adj.theta;
    plan.push_back(adj);
  }
  return plan;
}

Eigen::MatrixXcd reconstruct(const MeshPlan& plan, int dim) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
  for (const MeshElement& e : plan) m = e.matrix(dim) * m;
  return m;
}

Eigen::MatrixXcd random_orthogonal(int dim, uint64_t seed) {
  SplitMix64 rng(seed);
  Eigen::MatrixXd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      // Box-Muller from two uniforms.
      const double u1 = std::max(rng.uniform(), 1e-16);
      const double u2 = rng.uniform();
      g(i, j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
  return orthonormalize(g.cast<complex<double>>());
}

Eigen::MatrixXcd bundled_unitary6() {
  Eigen::MatrixXd m(6, 6);
  m << -0.14, -0.59, 0.25, -0.64, 0.23, -0.32,
        0.28,  0.10, -0.80, -0.33, 0.40, -0.00,
        0.46,  0.31, 0.15, -0.58, -0.57, 0.09,
       -0.59,  0.40, 0.12, -0.38, 0.24, 0.53,
       -0.17,  0.60, 0.10, -0.04, 0.14, -0.76,
       -0.56, -0.15, -0.50, -0.07, -0.62, -0.17;
  return orthonormalize(m.cast<complex<double>>());
}

} // namespace qnc
