#pragma once

#include <array>
#include <complex>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

namespace beatsim {

using cplx = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

/// Physical constants of the two-emitter system, with hbar = 1.
///
/// Energies are angular frequencies. The Foerster coupling W splits the
/// single-excitation manifold into omega_plus = E0 + W and
/// omega_minus = E0 - W; the local beat frequency seen in the L1/L2
/// correlations is their difference, delta_omega() = 2 W.
struct ModelParams {
  double E0 = 100.0;
  double W = 4.0;
  double gamma_L = 0.05;
  double gamma_N = 1.0;
  double c = 1.0;

  /// Builds parameters from the beat frequency instead of the coupling.
  static ModelParams from_beat(double delta_omega, double gamma_L, double gamma_N,
                               double E0 = 100.0, double c = 1.0);

  [[nodiscard]] double omega_plus() const noexcept { return E0 + W; }
  [[nodiscard]] double omega_minus() const noexcept { return E0 - W; }
  [[nodiscard]] double delta_omega() const noexcept { return omega_plus() - omega_minus(); }

  /// Throws std::invalid_argument when a rate is negative, c is not
  /// positive, or any field is not finite.
  void validate() const;
};

enum class Basis { Product, Eigen };

/// Four amplitudes over (ee, eg, ge, gg) in the Product basis or
/// (2+, 1+, 1-, 0+) in the Eigen basis. |eg> means emitter 1 excited.
struct SystemState {
  Vector4c amplitudes = Vector4c::Zero();
  Basis basis = Basis::Product;

  [[nodiscard]] double norm() const { return amplitudes.norm(); }
  [[nodiscard]] double norm2() const { return amplitudes.squaredNorm(); }

  static SystemState product(cplx ee, cplx eg, cplx ge, cplx gg);
  static SystemState eigen(cplx two_plus, cplx one_plus, cplx one_minus, cplx zero_plus);
};

namespace index {
inline constexpr int ee = 0;
inline constexpr int eg = 1;
inline constexpr int ge = 2;
inline constexpr int gg = 3;
inline constexpr int two_plus = 0;
inline constexpr int one_plus = 1;
inline constexpr int one_minus = 2;
inline constexpr int zero_plus = 3;
}  // namespace index

/// Physical detection channels. L1/L2 couple to emitter 1/2 alone, N to
/// the symmetric transition of the pair.
enum class Channel { L1 = 0, L2 = 1, N = 2 };
inline constexpr std::array<Channel, 3> all_channels{Channel::L1, Channel::L2, Channel::N};

/// Local channels in the exchange-symmetric basis, plus the (already
/// symmetric) nonlocal channel.
enum class SymChannel { Lplus, Lminus, Nplus };

std::string_view to_string(Channel ch);
/// Accepts "L1", "L2", "N". Throws std::invalid_argument otherwise.
Channel channel_from_string(std::string_view name);

/// Swaps L1 and L2, leaves N alone.
constexpr Channel relabel(Channel ch) noexcept {
  switch (ch) {
    case Channel::L1: return Channel::L2;
    case Channel::L2: return Channel::L1;
    default: return Channel::N;
  }
}

Matrix4c build_hamiltonian(const ModelParams& params, Basis basis);

/// Unitary change of basis; columns are eigenstates written in the
/// product basis.
const Matrix4c& eigen_basis_matrix();

SystemState to_eigen_basis(const SystemState& state);
SystemState to_product_basis(const SystemState& state);

/// Exchanges emitter labels 1 and 2 on a Product-basis state.
SystemState swap_emitters(const SystemState& state);

/// (a_L1, a_L2) -> (a_L+, a_L-), with a_L+- = (a_L1 +- a_L2) / sqrt(2).
std::pair<cplx, cplx> symmetrize_channel_amplitudes(cplx a_L1, cplx a_L2);
/// Inverse of symmetrize_channel_amplitudes (the map is its own inverse).
std::pair<cplx, cplx> desymmetrize_channel_amplitudes(cplx a_Lplus, cplx a_Lminus);

/// Normalized lowering operator through which a channel radiates, in the
/// Product basis: sigma_1 for L1, sigma_2 for L2 and
/// (sigma_1 + sigma_2)/sqrt(2) for N.
Matrix4c jump_operator(Channel ch);

/// Rate attached to jump_operator(ch): gamma_L for L1/L2, gamma_N for N.
/// Both |ee> and |1+> then radiate into N at gamma_N, |1-> not at all.
double channel_rate(const ModelParams& params, Channel ch);

/// Excitation count of each Product-basis state (2, 1, 1, 0).
constexpr std::array<int, 4> excitation_number{2, 1, 1, 0};

}  // namespace beatsim
