#include "beatsim/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace beatsim {

namespace {

const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument(std::string("ModelParams.") + name + " must be finite");
  }
}

}  // namespace

ModelParams ModelParams::from_beat(double delta_omega, double gamma_L, double gamma_N, double E0,
                                   double c) {
  ModelParams p;
  p.E0 = E0;
  p.W = 0.5 * delta_omega;
  p.gamma_L = gamma_L;
  p.gamma_N = gamma_N;
  p.c = c;
  return p;
}

void ModelParams::validate() const {
  require_finite(E0, "E0");
  require_finite(W, "W");
  require_finite(gamma_L, "gamma_L");
  require_finite(gamma_N, "gamma_N");
  require_finite(c, "c");
  if (gamma_L < 0.0) throw std::invalid_argument("ModelParams.gamma_L must be >= 0");
  if (gamma_N < 0.0) throw std::invalid_argument("ModelParams.gamma_N must be >= 0");
  if (c <= 0.0) throw std::invalid_argument("ModelParams.c must be > 0");
}

SystemState SystemState::product(cplx ee, cplx eg, cplx ge, cplx gg) {
  SystemState s;
  s.amplitudes << ee, eg, ge, gg;
  s.basis = Basis::Product;
  return s;
}

SystemState SystemState::eigen(cplx two_plus, cplx one_plus, cplx one_minus, cplx zero_plus) {
  SystemState s;
  s.amplitudes << two_plus, one_plus, one_minus, zero_plus;
  s.basis = Basis::Eigen;
  return s;
}

std::string_view to_string(Channel ch) {
  switch (ch) {
    case Channel::L1: return "L1";
    case Channel::L2: return "L2";
    case Channel::N: return "N";
  }
  return "?";
}

Channel channel_from_string(std::string_view name) {
  if (name == "L1") return Channel::L1;
  if (name == "L2") return Channel::L2;
  if (name == "N") return Channel::N;
  throw std::invalid_argument("unknown channel '" + std::string(name) + "'");
}

Matrix4c build_hamiltonian(const ModelParams& params, Basis basis) {
  Matrix4c h = Matrix4c::Zero();
  if (basis == Basis::Product) {
    h(index::ee, index::ee) = 2.0 * params.E0;
    h(index::eg, index::eg) = params.E0;
    h(index::ge, index::ge) = params.E0;
    h(index::eg, index::ge) = params.W;
    h(index::ge, index::eg) = params.W;
  } else {
    h(index::two_plus, index::two_plus) = 2.0 * params.E0;
    h(index::one_plus, index::one_plus) = params.E0 + params.W;
    h(index::one_minus, index::one_minus) = params.E0 - params.W;
  }
  return h;
}

const Matrix4c& eigen_basis_matrix() {
  static const Matrix4c u = [] {
    Matrix4c m = Matrix4c::Zero();
    m(index::ee, index::two_plus) = 1.0;
    m(index::eg, index::one_plus) = inv_sqrt2;
    m(index::ge, index::one_plus) = inv_sqrt2;
    m(index::eg, index::one_minus) = inv_sqrt2;
    m(index::ge, index::one_minus) = -inv_sqrt2;
    m(index::gg, index::zero_plus) = 1.0;
    return m;
  }();
  return u;
}

SystemState to_eigen_basis(const SystemState& state) {
  if (state.basis != Basis::Product) {
    throw std::logic_error("to_eigen_basis: state is not in the Product basis");
  }
  SystemState out;
  out.amplitudes = eigen_basis_matrix().adjoint() * state.amplitudes;
  out.basis = Basis::Eigen;
  return out;
}

SystemState to_product_basis(const SystemState& state) {
  if (state.basis != Basis::Eigen) {
    throw std::logic_error("to_product_basis: state is not in the Eigen basis");
  }
  SystemState out;
  out.amplitudes = eigen_basis_matrix() * state.amplitudes;
  out.basis = Basis::Product;
  return out;
}

SystemState swap_emitters(const SystemState& state) {
  if (state.basis != Basis::Product) {
    throw std::logic_error("swap_emitters: state is not in the Product basis");
  }
  SystemState out = state;
  std::swap(out.amplitudes(index::eg), out.amplitudes(index::ge));
  return out;
}

std::pair<cplx, cplx> symmetrize_channel_amplitudes(cplx a_L1, cplx a_L2) {
  return {(a_L1 + a_L2) * inv_sqrt2, (a_L1 - a_L2) * inv_sqrt2};
}

std::pair<cplx, cplx> desymmetrize_channel_amplitudes(cplx a_Lplus, cplx a_Lminus) {
  return {(a_Lplus + a_Lminus) * inv_sqrt2, (a_Lplus - a_Lminus) * inv_sqrt2};
}

Matrix4c jump_operator(Channel ch) {
  Matrix4c op = Matrix4c::Zero();
  switch (ch) {
    case Channel::L1:
      // emitter 1 decays: ee -> ge, eg -> gg
      op(index::ge, index::ee) = 1.0;
      op(index::gg, index::eg) = 1.0;
      break;
    case Channel::L2:
      op(index::eg, index::ee) = 1.0;
      op(index::gg, index::ge) = 1.0;
      break;
    case Channel::N:
      op(index::ge, index::ee) = inv_sqrt2;
      op(index::eg, index::ee) = inv_sqrt2;
      op(index::gg, index::eg) = inv_sqrt2;
      op(index::gg, index::ge) = inv_sqrt2;
      break;
  }
  return op;
}

double channel_rate(const ModelParams& params, Channel ch) {
  return ch == Channel::N ? params.gamma_N : params.gamma_L;
}

}  // namespace beatsim
