#pragma once

#include <Eigen/Dense>
#include <string>

namespace qnc {

enum class StateFamily {
  Coherent,       // |alpha>, Poisson photon statistics
  MixedCoherent,  // equal mixture of |alpha1>, |alpha2>
  Thermal,        // mean photon number nbar
  SqueezedVacuum, // squeezing parameter r, even photon numbers only
  Spats,          // single-photon-added thermal state, mean nbar
  LossyFock,      // |n> with single-photon loss probability p_loss
};

/// Parameters of one input state. Use the factory functions; construction
/// validates the family-specific parameter ranges.
struct StateSpec {
  StateFamily family = StateFamily::Coherent;
  double alpha1 = 0.0; // Coherent / MixedCoherent
  double alpha2 = 0.0; // MixedCoherent
  double nbar = 0.0;   // Thermal / Spats
  double r = 0.0;      // SqueezedVacuum
  int fock_n = 1;      // LossyFock
  double p_loss = 0.0; // LossyFock

  static StateSpec coherent(double alpha);
  static StateSpec mixed_coherent(double alpha1, double alpha2);
  static StateSpec thermal(double nbar);
  static StateSpec squeezed_vacuum(double r);
  static StateSpec spats(double nbar);
  static StateSpec lossy_fock(int n, double p_loss);

  /// Nonclassical is a pure function of the family.
  bool nonclassical() const;

  std::string family_name() const;
};

StateFamily family_from_name(const std::string& name);

/// Photon-number probabilities p_0..p_cutoff plus the mass beyond the cutoff.
struct PhotonDistribution {
  Eigen::VectorXd probs;
  double tail_mass = 0.0;

  int cutoff() const { return static_cast<int>(probs.size()) - 1; }
};

/// Exact distribution from the family's closed form. cutoff >= 0.
PhotonDistribution photon_distribution(const StateSpec& spec, int cutoff);

/// Smallest cutoff with tail_mass < 1e-10, capped at `cap` (default 200).
int adaptive_cutoff(const StateSpec& spec, int cap = 200);

/// Factorial-moment generating function <z^n> in closed form, |z| <= 1.
/// Equals sum_m p_m z^m including all tail mass.
double factorial_moment_gf(const StateSpec& spec, double z);

} // namespace qnc
