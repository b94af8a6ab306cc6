#pragma once

#include <Eigen/Dense>
#include <vector>

namespace qnc {

/// One passive linear-optics element. A beamsplitter on modes (a, b) acts as
///   [ cos(theta)              -e^{-i phi} sin(theta) ]
///   [ e^{i phi} sin(theta)     cos(theta)            ]
/// on the single-photon amplitudes; a phase shifter multiplies mode a by
/// e^{i phi}.
struct MeshElement {
  enum class Kind { BeamSplitter, PhaseShifter };
  Kind kind = Kind::PhaseShifter;
  int mode_a = 0;
  int mode_b = 0;
  double theta = 0.0;
  double phi = 0.0;

  static MeshElement beamsplitter(int a, int b, double theta, double phi);
  static MeshElement phase_shifter(int mode, double phi);

  /// Dense dim x dim single-photon matrix of this element.
  Eigen::MatrixXcd matrix(int dim) const;
};

using MeshPlan = std::vector<MeshElement>;

/// Max-norm deviation from unitarity, ||U^dag U - I||_max.
double unitarity_error(const Eigen::MatrixXcd& u);

/// Nearest-in-spirit orthonormalization via Householder QR with a positive
/// diagonal; returns the adjusted matrix and reports the max-norm adjustment.
Eigen::MatrixXcd orthonormalize(const Eigen::MatrixXcd& u, double* adjustment = nullptr);

/// Triangular (Reck-style) decomposition into adjacent-mode Givens
/// beamsplitters plus input phase shifters. Throws if the input deviates
/// from unitarity by more than 1e-10.
MeshPlan decompose(const Eigen::MatrixXcd& u);

/// Product of the element matrices in plan order (element 0 applied first).
Eigen::MatrixXcd reconstruct(const MeshPlan& plan, int dim);

/// Seeded random real orthogonal matrix (QR of a Gaussian matrix).
Eigen::MatrixXcd random_orthogonal(int dim, uint64_t seed);

/// The bundled 6-mode test unitary (orthonormalized from a 2-decimal table).
Eigen::MatrixXcd bundled_unitary6();

} // namespace qnc
