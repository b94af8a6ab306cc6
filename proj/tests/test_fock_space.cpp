#include <doctest.h>

#include <cmath>

#include "qnc/fock_space.hpp"
#include "qnc/special.hpp"

using namespace qnc;

TEST_CASE("basis sizes follow stars and bars") {
  CHECK(FockBasis::up_to(2, 3)->size() == 10);   // C(3+2,2)
  CHECK(FockBasis::sector(2, 3)->size() == 4);   // (0,3)..(3,0)
  CHECK(FockBasis::up_to(6, 12)->size() == 18564);
  CHECK(FockBasis::sector(6, 12)->size() == 6188);
}

TEST_CASE("basis index lookup round-trips") {
  auto basis = FockBasis::up_to(3, 4);
  for (size_t t = 0; t < basis->size(); ++t) {
    Eigen::VectorXi row = basis->tuples().row(static_cast<Eigen::Index>(t));
    CHECK(basis->index_of(row) == static_cast<long>(t));
  }
}

TEST_CASE("vacuum stays vacuum") {
  const MultimodeState vac = fock_product(Eigen::VectorXi::Zero(3));
  const MeshPlan plan = decompose(random_orthogonal(3, 5));
  const JointDistribution out = output_distribution(evolve(vac, plan));
  CHECK(out.prob_of(Eigen::VectorXi::Zero(3)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identity plan leaves amplitudes unchanged") {
  Eigen::VectorXd rs(2);
  rs << 0.4, 0.6;
  const MultimodeState st = product_squeezed(rs, 10);
  const MeshPlan plan = decompose(Eigen::MatrixXcd::Identity(2, 2));
  const MultimodeState ev = evolve(st, plan);
  CHECK((ev.components[0].amps - st.components[0].amps).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single photon splits 50:50") {
  Eigen::VectorXi ns(2);
  ns << 1, 0;
  const MultimodeState st = fock_product(ns);
  const MeshPlan plan{MeshElement::beamsplitter(0, 1, M_PI / 4.0, 0.0)};
  const JointDistribution out = output_distribution(evolve(st, plan));
  Eigen::VectorXi t10(2), t01(2);
  t10 << 1, 0;
  t01 << 0, 1;
  CHECK(out.prob_of(t10) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.prob_of(t01) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("Hong-Ou-Mandel dip") {
  Eigen::VectorXi ns(2);
  ns << 1, 1;
  const MultimodeState st = fock_product(ns);
  const MeshPlan plan{MeshElement::beamsplitter(0, 1, M_PI / 4.0, 0.0)};
  const JointDistribution out = output_distribution(evolve(st, plan));
  Eigen::VectorXi t11(2), t20(2), t02(2);
  t11 << 1, 1;
  t20 << 2, 0;
  t02 << 0, 2;
  CHECK(out.prob_of(t11) < 1e-12);
  CHECK(out.prob_of(t20) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(out.prob_of(t02) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("evolution preserves photon-number sector norms") {
  Eigen::VectorXd rs(3);
  rs << 0.5, 0.0, 0.7;
  const MultimodeState st = product_squeezed(rs, 8);
  const MeshPlan plan = decompose(random_orthogonal(3, 42));
  const MultimodeState ev = evolve(st, plan);

  auto basis = st.components[0].basis;
  Eigen::VectorXd norm_before = Eigen::VectorXd::Zero(9);
  Eigen::VectorXd norm_after = Eigen::VectorXd::Zero(9);
  for (size_t t = 0; t < basis->size(); ++t) {
    int total = 0;
    for (int i = 0; i < 3; ++i) total += basis->occupation(t, i);
    norm_before[total] += std::norm(st.components[0].amps[static_cast<Eigen::Index>(t)]);
    norm_after[total] += std::norm(ev.components[0].amps[static_cast<Eigen::Index>(t)]);
  }
  CHECK((norm_before - norm_after).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("coherent shortcut matches the Fock-space path") {
  // |alpha, 0> through a 50:50 beamsplitter
  Eigen::VectorXcd alphas(2);
  alphas << 1.0, 0.0;
  const MeshPlan plan{MeshElement::beamsplitter(0, 1, M_PI / 4.0, 0.0)};
  const Eigen::MatrixXcd u = reconstruct(plan, 2);

  const Eigen::VectorXd means = coherent_shortcut(alphas, u);
  CHECK(means[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(means[1] == doctest::Approx(0.5).epsilon(1e-12));

  const JointDistribution exact = joint_poisson_product(means, 14);
  const JointDistribution fock =
      output_distribution(evolve(product_coherent(alphas, 14), plan));
  double tv = 0.0;
  for (long r = 0; r < exact.tuples.rows(); ++r) {
    Eigen::VectorXi row = exact.tuples.row(r);
    tv += std::abs(exact.probs[r] - fock.prob_of(row));
  }
  CHECK(0.5 * tv < 1e-9);
}

TEST_CASE("single-photon output distribution reads off the unitary column") {
  const Eigen::MatrixXcd u = bundled_unitary6();
  Eigen::VectorXi ns = Eigen::VectorXi::Zero(6);
  ns[0] = 1;
  const JointDistribution out = output_distribution(evolve(fock_product(ns), decompose(u)));
  for (int i = 0; i < 6; ++i) {
    Eigen::VectorXi t = Eigen::VectorXi::Zero(6);
    t[i] = 1;
    CHECK(out.prob_of(t) == doctest::Approx(std::norm(u(i, 0))).epsilon(1e-10));
  }
}

TEST_CASE("fock mixtures renormalize their weights") {
  Eigen::VectorXi a(2), b(2);
  a << 2, 2;
  b << 1, 2;
  const MultimodeState mix = fock_mixture({{0.95, a}, {0.0167, b}, {0.0167, b}});
  double wsum = 0.0;
  for (const auto& c : mix.components) wsum += c.weight;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("multimode sampling is deterministic and respects point masses") {
  Eigen::VectorXi ns(2);
  ns << 1, 0;
  const MultimodeState st = fock_product(ns);
  const DetectorModel det = DetectorModel::ideal_pnr(4);
  const SampleSet s1 = sample_multimode(st, det, 200, 31);
  const SampleSet s2 = sample_multimode(st, det, 200, 31);
  CHECK((s1.samples == s2.samples));
  for (int a = 0; a < 200; ++a) {
    CHECK(s1.samples(a, 0) == 1);
    CHECK(s1.samples(a, 1) == 0);
  }
}

TEST_CASE("per-mode detector acts independently on the joint table") {
  Eigen::VectorXi ns(2);
  ns << 2, 1;
  const JointDistribution joint = output_distribution(fock_product(ns));
  const DetectorModel det = DetectorModel::binned_pnr(0.5, 0.0);
  const JointDistribution obs = apply_detector_joint(joint, det);
  // P(outcome (1,1)) = Binom(2,0.5 at 1) * Binom(1,0.5 at 1) = 0.5 * 0.5
  Eigen::VectorXi t(2);
  t << 1, 1;
  CHECK(obs.prob_of(t) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(obs.probs.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("squeezed product truncation loss is declared") {
  Eigen::VectorXd rs(6);
  rs << 0.8, 0.8, 0.8, 0.0, 0.0, 0.0;
  const MultimodeState st = product_squeezed(rs, 12);
  CHECK(st.components[0].truncation_loss < 0.02);
  CHECK(st.components[0].truncation_loss >= 0.0);
  const JointDistribution out = output_distribution(st);
  CHECK(out.probs.sum() == doctest::Approx(1.0 - out.truncation_loss).epsilon(1e-9));
}

TEST_CASE("basis dimension cap raises") {
  CHECK_THROWS(FockBasis::up_to(6, 12, 1000));
}

TEST_CASE("two-photon beamsplitter amplitudes match the closed form") {
  // |2,0> -> c^2 |2,0> + sqrt(2) c s e^{i phi}|1,1> + s^2 e^{2 i phi}|0,2>
  const double theta = 0.7, phi = 0.4;
  Eigen::VectorXi ns(2);
  ns << 2, 0;
  const MeshPlan plan{MeshElement::beamsplitter(0, 1, theta, phi)};
  const MultimodeState out = evolve(fock_product(ns), plan);
  const auto& comp = out.components[0];
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::VectorXi t20(2), t11(2), t02(2);
  t20 << 2, 0;
  t11 << 1, 1;
  t02 << 0, 2;
  const std::complex<double> a20 = comp.amps[comp.basis->index_of(t20)];
  const std::complex<double> a11 = comp.amps[comp.basis->index_of(t11)];
  const std::complex<double> a02 = comp.amps[comp.basis->index_of(t02)];
  CHECK(std::abs(a20 - std::complex<double>(c * c)) < 1e-12);
  CHECK(std::abs(a11 - std::sqrt(2.0) * c * s * std::polar(1.0, phi)) < 1e-12);
  CHECK(std::abs(a02 - s * s * std::polar(1.0, 2.0 * phi)) < 1e-12);
}

TEST_CASE("beamsplitter action is unitary on every photon-number sector") {
  // evolve an equal superposition over a full sector back and forth
  for (int total : {1, 2, 5, 9}) {
    auto basis = FockBasis::sector(2, total);
    MultimodeState st;
    st.d_x = 2;
    MultimodeState::Component comp;
    comp.basis = basis;
    comp.amps.resize(static_cast<Eigen::Index>(basis->size()));
    for (size_t t = 0; t < basis->size(); ++t)
      comp.amps[static_cast<Eigen::Index>(t)] =
          std::polar(1.0 / std::sqrt(static_cast<double>(basis->size())),
                     0.3 * static_cast<double>(t));
    st.components.push_back(comp);

    const MeshPlan fwd{MeshElement::beamsplitter(0, 1, 0.93, -0.6)};
    const MeshPlan bwd{MeshElement::beamsplitter(0, 1, -0.93, -0.6)}; // adjoint
    const MultimodeState round = evolve(evolve(st, fwd), bwd);
    CHECK((round.components[0].amps - comp.amps).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(evolve(st, fwd).components[0].amps.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}
