#include "kkmass/clifford.hpp"

#include <algorithm>
#include <string>

namespace kkmass {

namespace {

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Hermitian generators squaring to +1.
std::vector<CMat> hermitian_generators(int dim) {
  const Complex I(0.0, 1.0);
  CMat sigma1(2, 2), sigma2(2, 2);
  sigma1 << 0.0, 1.0, 1.0, 0.0;
  sigma2 << 0.0, -I, I, 0.0;

  std::vector<CMat> gens{CMat::Identity(1, 1)};
  for (int d = 1; d < dim; ++d) {
    if (d % 2 == 1) {
      const auto size = gens.front().rows();
      for (auto& g : gens) g = kron(g, sigma1);
      gens.push_back(kron(CMat::Identity(size, size), sigma2));
    } else {
      // chirality i^{d/2} G_1 ... G_d
      CMat chi = CMat::Identity(gens.front().rows(), gens.front().cols());
      for (const auto& g : gens) chi = chi * g;
      Complex phase(1.0, 0.0);
      for (int p = 0; p < d / 2; ++p) phase *= I;
      gens.push_back(phase * chi);
    }
  }
  return gens;
}

}  // namespace

CliffordRep::CliffordRep(int dim) : dim_(dim), fiber_dim_(0) {
  if (dim < 1) {
    throw InvalidArgument("Clifford dimension must be >= 1, got " + std::to_string(dim));
  }
  const Complex I(0.0, 1.0);
  for (auto& g : hermitian_generators(dim)) gamma_.push_back(I * g);
  fiber_dim_ = static_cast<int>(gamma_.front().rows());

  products_.reserve(static_cast<std::size_t>(dim) * dim);
  for (int b = 0; b < dim; ++b) {
    for (int c = 0; c < dim; ++c) products_.push_back(gamma_[b] * gamma_[c]);
  }
}

void CliffordRep::check_index(int a) const {
  if (a < 0 || a >= dim_) {
    throw InvalidArgument("Clifford index " + std::to_string(a) + " out of range [0, " +
                          std::to_string(dim_) + ")");
  }
}

void CliffordRep::check_spinor(const CVec& s) const {
  if (s.size() != fiber_dim_) {
    throw InvalidArgument("spinor has " + std::to_string(s.size()) +
                          " components, representation needs " + std::to_string(fiber_dim_));
  }
}

const CMat& CliffordRep::gamma(int a) const {
  check_index(a);
  return gamma_[a];
}

const CMat& CliffordRep::product(int b, int c) const {
  check_index(b);
  check_index(c);
  return products_[static_cast<std::size_t>(b) * dim_ + c];
}

CMat CliffordRep::commutator(int a, int b) const {
  return product(a, b) - product(b, a);
}

CMat CliffordRep::vector_matrix(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != dim_) {
    throw InvalidArgument("vector has " + std::to_string(v.size()) +
                          " components, Clifford dimension is " + std::to_string(dim_));
  }
  CMat out = CMat::Zero(fiber_dim_, fiber_dim_);
  for (int a = 0; a < dim_; ++a) {
    if (v[a] != 0.0) out += v[a] * gamma_[a];
  }
  return out;
}

CMat CliffordRep::vector_matrix(const Vec& v) const {
  return vector_matrix(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

CliffordRep build_clifford(int dim) { return CliffordRep(dim); }

CVec clifford_mul(const CliffordRep& rep, std::span<const double> v, const CVec& spinor) {
  rep.check_spinor(spinor);
  return rep.vector_matrix(v) * spinor;
}

CVec commutator_action(const CliffordRep& rep, int a, int b, const CVec& spinor) {
  rep.check_spinor(spinor);
  if (a == b) {
    rep.check_index(a);
    return CVec::Zero(rep.fiber_dim());
  }
  return rep.commutator(a, b) * spinor;
}

CliffordResiduals clifford_residuals(const CliffordRep& rep) {
  CliffordResiduals r;
  const int n = rep.dim();
  const CMat id = rep.identity();
  for (int a = 0; a < n; ++a) {
    const CMat& ga = rep.gamma(a);
    r.skew_hermitian = std::max(r.skew_hermitian, (ga + ga.adjoint()).cwiseAbs().maxCoeff());
    for (int b = 0; b < n; ++b) {
      const double delta = a == b ? 1.0 : 0.0;
      const CMat anti = rep.product(a, b) + rep.product(b, a) + 2.0 * delta * id;
      r.anticommutator = std::max(r.anticommutator, anti.cwiseAbs().maxCoeff());
      const CMat comm = rep.commutator(a, b);
      if (a != b) {
        r.commutator_skew =
            std::max(r.commutator_skew, (comm + comm.adjoint()).cwiseAbs().maxCoeff());
      }
      const CMat split = rep.product(a, b) - 0.5 * comm + delta * id;
      r.product_decomposition = std::max(r.product_decomposition, split.cwiseAbs().maxCoeff());
    }
  }
  return r;
}

}  // namespace kkmass
