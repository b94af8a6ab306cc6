#include "qnc/sym_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qnc {

namespace {

double offdiag_norm(const Eigen::MatrixXd& a) {
  double s = 0.0;
  const int n = static_cast<int>(a.rows());
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) s += a(p, q) * a(p, q);
  return std::sqrt(2.0 * s);
}

} // namespace

SymEigenResult jacobi_eigen(const Eigen::MatrixXd& a_in) {
  const int n = static_cast<int>(a_in.rows());
  if (a_in.cols() != n) throw std::invalid_argument("jacobi_eigen: matrix must be square");
  if (n > 256) throw std::invalid_argument("jacobi_eigen: dimension exceeds 256");

  Eigen::MatrixXd a = 0.5 * (a_in + a_in.transpose()); // enforce exact symmetry
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  const double tol = 1e-15 * scale * n;
  const int max_sweeps = 64;

  for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a) > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        const double app = a(p, p), aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int r = 0; r < n; ++r) {
          if (r != p && r != q) {
            const double arp = a(r, p), arq = a(r, q);
            a(r, p) = arp - s * (arq + tau * arp);
            a(p, r) = a(r, p);
            a(r, q) = arq + s * (arp - tau * arq);
            a(q, r) = a(r, q);
          }
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  SymEigenResult res;
  res.values.resize(n);
  res.vectors.resize(n, n);
  for (int i = 0; i < n; ++i) {
    res.values[i] = a(idx[i], idx[i]);
    res.vectors.col(i) = v.col(idx[i]);
  }
  return res;
}

double min_eigenvalue(const Eigen::MatrixXd& a) { return jacobi_eigen(a).values[0]; }

Eigen::VectorXd min_eigenvector(const Eigen::MatrixXd& a) { return jacobi_eigen(a).vectors.col(0); }

} // namespace qnc
