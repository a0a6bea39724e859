#pragma once

#include "kkmass/types.hpp"

#include <span>
#include <vector>

namespace kkmass {

/// Complex matrix representation of the Clifford algebra of Euclidean R^n.
///
/// Sign convention: v.v = -|v|^2, i.e. gamma(a) gamma(b) + gamma(b) gamma(a)
/// = -2 delta_ab, and every gamma(a) is skew-hermitian. With this choice the
/// spinor connection is d + 1/4 omega_bc gamma_b gamma_c and the Lichnerowicz
/// formula reads D^2 = nabla^* nabla + R/4. Both sign conventions are common
/// in the literature; this one is fixed by requiring the +R/4.
///
/// Construction: start from the 1x1 hermitian generator {1}; going from odd
/// dimension d to d+1 tensors every generator with sigma_1 and appends
/// 1 x sigma_2; going from even d to d+1 appends the chirality element.
/// The skew-hermitian generators are i times these. The fiber dimension is
/// 2^floor(n/2); odd dimensions reuse the fiber of n-1.
///
/// Immutable after construction.
class CliffordRep {
 public:
  explicit CliffordRep(int dim);

  int dim() const { return dim_; }
  int fiber_dim() const { return fiber_dim_; }

  const CMat& gamma(int a) const;
  const std::vector<CMat>& gammas() const { return gamma_; }

  /// gamma(b) * gamma(c), cached.
  const CMat& product(int b, int c) const;

  /// [gamma(a), gamma(b)].
  CMat commutator(int a, int b) const;

  /// sum_a v_a gamma(a) for v in orthonormal-frame components.
  CMat vector_matrix(std::span<const double> v) const;
  CMat vector_matrix(const Vec& v) const;

  CMat identity() const { return CMat::Identity(fiber_dim_, fiber_dim_); }

 private:
  void check_index(int a) const;
  void check_spinor(const CVec& s) const;

  friend CVec clifford_mul(const CliffordRep&, std::span<const double>, const CVec&);
  friend CVec commutator_action(const CliffordRep&, int, int, const CVec&);

  int dim_;
  int fiber_dim_;
  std::vector<CMat> gamma_;
  std::vector<CMat> products_;
};

CliffordRep build_clifford(int dim);

/// (sum_a v_a gamma(a)) spinor.
CVec clifford_mul(const CliffordRep& rep, std::span<const double> v, const CVec& spinor);

/// [gamma(a), gamma(b)] spinor.
CVec commutator_action(const CliffordRep& rep, int a, int b, const CVec& spinor);

/// Residuals of the defining relations, for diagnostics and tests.
struct CliffordResiduals {
  double anticommutator = 0.0;         // max_ab |g_a g_b + g_b g_a + 2 delta_ab|
  double skew_hermitian = 0.0;         // max_a |g_a + g_a^dagger|
  double commutator_skew = 0.0;        // max_{a!=b} |C + C^dagger|, C = [g_a, g_b]
  double product_decomposition = 0.0;  // max_ab |g_a g_b - C/2 + delta_ab|
};

CliffordResiduals clifford_residuals(const CliffordRep& rep);

}  // namespace kkmass
