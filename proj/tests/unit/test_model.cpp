#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "beatsim/model.hpp"

namespace beatsim {
namespace {

const double s2 = std::sqrt(0.5);

ModelParams params(double E0, double W) {
  ModelParams p;
  p.E0 = E0;
  p.W = W;
  return p;
}

Vector4c random_state(std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vector4c v;
  for (int i = 0; i < 4; ++i) v[i] = cplx(g(rng), g(rng));
  return v.normalized();
}

TEST(ModelParams, DefaultsAreValid) { EXPECT_NO_THROW(ModelParams{}.validate()); }

TEST(ModelParams, FromBeatHalvesCoupling) {
  const ModelParams p = ModelParams::from_beat(8.0, 0.05, 1.0);
  EXPECT_DOUBLE_EQ(p.W, 4.0);
  EXPECT_DOUBLE_EQ(p.delta_omega(), 8.0);
  EXPECT_DOUBLE_EQ(p.omega_plus() - p.omega_minus(), p.delta_omega());
}

TEST(ModelParams, RejectsInvalidFields) {
  ModelParams p;
  p.gamma_L = -1e-3;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.gamma_N = -1.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.c = 0.0;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p = {};
  p.W = std::nan("");
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(ModelParams, NegativeCouplingIsAllowed) {
  ModelParams p;
  p.W = -3.0;
  EXPECT_NO_THROW(p.validate());
  EXPECT_DOUBLE_EQ(p.delta_omega(), -6.0);
}

TEST(Hamiltonian, ZeroCouplingProductIsDiagonal) {
  const Matrix4c h = build_hamiltonian(params(1.0, 0.0), Basis::Product);
  Matrix4c expected = Matrix4c::Zero();
  expected.diagonal() << 2.0, 1.0, 1.0, 0.0;
  EXPECT_EQ(h, expected);
}

TEST(Hamiltonian, EigenBasisIsDiagonal) {
  const Matrix4c h = build_hamiltonian(params(1.0, 0.3), Basis::Eigen);
  Matrix4c expected = Matrix4c::Zero();
  expected.diagonal() << 2.0, 1.3, 0.7, 0.0;
  EXPECT_LT((h - expected).norm(), 1e-15);
}

TEST(Hamiltonian, ProductSpectrum) {
  const Matrix4c h = build_hamiltonian(params(1.0, 0.3), Basis::Product);
  Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h);
  const Eigen::Vector4d ev = solver.eigenvalues();
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[1], 0.7, 1e-12);
  EXPECT_NEAR(ev[2], 1.3, 1e-12);
  EXPECT_NEAR(ev[3], 2.0, 1e-12);
}

TEST(Hamiltonian, ExactlyHermitianAndSpectrumOverRandomParams) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1000.0, 1000.0);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = params(u(rng), u(rng));
    const Matrix4c h = build_hamiltonian(p, Basis::Product);
    EXPECT_EQ(h, h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix4c> solver(h);
    std::array<double, 4> expected{2 * p.E0, p.E0 + p.W, p.E0 - p.W, 0.0};
    std::sort(expected.begin(), expected.end());
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(solver.eigenvalues()[k], expected[k], 1e-10);
  }
}

TEST(Hamiltonian, ParitySuperselection) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  // (+) labels: 2+, 1+, 0+; (-) label: 1-.
  for (int i = 0; i < 100; ++i) {
    const Matrix4c h = build_hamiltonian(params(u(rng), u(rng)), Basis::Eigen);
    for (int plus : {index::two_plus, index::one_plus, index::zero_plus}) {
      EXPECT_EQ(h(plus, index::one_minus), cplx(0.0));
      EXPECT_EQ(h(index::one_minus, plus), cplx(0.0));
    }
  }
}

TEST(Hamiltonian, EigenMatrixDiagonalizesProduct) {
  const ModelParams p = params(3.0, -0.7);
  const Matrix4c& u = eigen_basis_matrix();
  EXPECT_LT((u.adjoint() * u - Matrix4c::Identity()).norm(), 1e-15);
  const Matrix4c rotated = u.adjoint() * build_hamiltonian(p, Basis::Product) * u;
  EXPECT_LT((rotated - build_hamiltonian(p, Basis::Eigen)).norm(), 1e-14);
}

TEST(BasisChange, ExcitedOneEmitter) {
  const SystemState s = to_eigen_basis(SystemState::product(0, 1, 0, 0));
  EXPECT_EQ(s.basis, Basis::Eigen);
  EXPECT_LT((s.amplitudes - Vector4c(0, s2, s2, 0)).norm(), 1e-15);
}

TEST(BasisChange, OtherEmitterGetsMinusSign) {
  const SystemState s = to_eigen_basis(SystemState::product(0, 0, 1, 0));
  EXPECT_LT((s.amplitudes - Vector4c(0, s2, -s2, 0)).norm(), 1e-15);
}

TEST(BasisChange, DoublyExcitedIsFixed) {
  const SystemState s = to_eigen_basis(SystemState::product(1, 0, 0, 0));
  EXPECT_LT((s.amplitudes - Vector4c(1, 0, 0, 0)).norm(), 1e-15);
}

TEST(BasisChange, AntisymmetricState) {
  const SystemState s = to_eigen_basis(SystemState::product(0, s2, -s2, 0));
  EXPECT_LT((s.amplitudes - Vector4c(0, 0, 1, 0)).norm(), 1e-15);
}

TEST(BasisChange, SymmetricStateToProduct) {
  const SystemState s = to_product_basis(SystemState::eigen(0, 1, 0, 0));
  EXPECT_EQ(s.basis, Basis::Product);
  EXPECT_LT((s.amplitudes - Vector4c(0, s2, s2, 0)).norm(), 1e-15);
}

TEST(BasisChange, GroundStateFixed) {
  const SystemState s = to_product_basis(SystemState::eigen(0, 0, 0, 1));
  EXPECT_LT((s.amplitudes - Vector4c(0, 0, 0, 1)).norm(), 1e-15);
}

TEST(BasisChange, RandomRoundTripPreservesStateAndNorm) {
  std::mt19937 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const SystemState s{random_state(rng), Basis::Product};
    const SystemState e = to_eigen_basis(s);
    EXPECT_NEAR(e.norm(), 1.0, 1e-12);
    EXPECT_LT((to_product_basis(e).amplitudes - s.amplitudes).norm(), 1e-12);
    const SystemState e2{random_state(rng), Basis::Eigen};
    EXPECT_LT((to_eigen_basis(to_product_basis(e2)).amplitudes - e2.amplitudes).norm(), 1e-12);
  }
}

TEST(BasisChange, WrongBasisIsRejected) {
  EXPECT_THROW(to_eigen_basis(SystemState::eigen(1, 0, 0, 0)), std::logic_error);
  EXPECT_THROW(to_product_basis(SystemState::product(1, 0, 0, 0)), std::logic_error);
}

TEST(BasisChange, SwapEmittersExchangesSingles) {
  const SystemState s = swap_emitters(SystemState::product(0.1, 0.2, cplx(0, 0.3), 0.4));
  EXPECT_LT((s.amplitudes - Vector4c(0.1, cplx(0, 0.3), 0.2, 0.4)).norm(), 1e-15);
  EXPECT_THROW(swap_emitters(SystemState::eigen(1, 0, 0, 0)), std::logic_error);
}

TEST(ChannelSymmetrization, SymmetricInput) {
  const auto [p, m] = symmetrize_channel_amplitudes(1.0, 1.0);
  EXPECT_NEAR(std::abs(p - std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m), 0.0, 1e-15);
}

TEST(ChannelSymmetrization, AntisymmetricInput) {
  const auto [p, m] = symmetrize_channel_amplitudes(1.0, -1.0);
  EXPECT_NEAR(std::abs(p), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m - std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(ChannelSymmetrization, RoundTrip) {
  const cplx a1(0.6, 0.2);
  const cplx a2(0.0, -0.1);
  const auto [p, m] = symmetrize_channel_amplitudes(a1, a2);
  const auto [b1, b2] = desymmetrize_channel_amplitudes(p, m);
  EXPECT_LT(std::abs(b1 - a1), 1e-12);
  EXPECT_LT(std::abs(b2 - a2), 1e-12);
}

TEST(ChannelSymmetrization, InvolutionAndEnergyPartition) {
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 1000; ++i) {
    const cplx a1(g(rng), g(rng));
    const cplx a2(g(rng), g(rng));
    const auto [p, m] = symmetrize_channel_amplitudes(a1, a2);
    EXPECT_NEAR(std::norm(a1) + std::norm(a2), std::norm(p) + std::norm(m),
                1e-12 * (1.0 + std::norm(a1) + std::norm(a2)));
    const auto [b1, b2] = symmetrize_channel_amplitudes(p, m);
    EXPECT_LT(std::abs(b1 - a1) + std::abs(b2 - a2), 1e-12 * (1.0 + std::abs(a1) + std::abs(a2)));
  }
}

TEST(Channel, NamesRoundTrip) {
  for (Channel ch : all_channels) EXPECT_EQ(channel_from_string(to_string(ch)), ch);
  EXPECT_THROW(channel_from_string("L3"), std::invalid_argument);
}

TEST(Channel, RelabelSwapsLocalChannels) {
  static_assert(relabel(Channel::L1) == Channel::L2);
  static_assert(relabel(Channel::L2) == Channel::L1);
  static_assert(relabel(Channel::N) == Channel::N);
  for (Channel ch : all_channels) EXPECT_EQ(relabel(relabel(ch)), ch);
}

TEST(JumpOperators, CouplingsFollowEmitterConvention) {
  const Vector4c ee(1, 0, 0, 0);
  // L2 lowers emitter 2: |ee> -> |eg>.
  EXPECT_LT((jump_operator(Channel::L2) * ee - Vector4c(0, 1, 0, 0)).norm(), 1e-15);
  EXPECT_LT((jump_operator(Channel::L1) * ee - Vector4c(0, 0, 1, 0)).norm(), 1e-15);
  EXPECT_LT((jump_operator(Channel::N) * ee - Vector4c(0, s2, s2, 0)).norm(), 1e-15);
  // |1-> is dark to N.
  EXPECT_LT((jump_operator(Channel::N) * Vector4c(0, s2, -s2, 0)).norm(), 1e-15);
}

TEST(JumpOperators, Rates) {
  const ModelParams p = ModelParams::from_beat(8.0, 0.25, 2.0);
  EXPECT_EQ(channel_rate(p, Channel::L1), 0.25);
  EXPECT_EQ(channel_rate(p, Channel::L2), 0.25);
  EXPECT_EQ(channel_rate(p, Channel::N), 2.0);
}

}  // namespace
}  // namespace beatsim
