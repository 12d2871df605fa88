#pragma once

#include <vector>

#include "entsec/types.hpp"

namespace entsec::qcore {

// construction tolerances for density matrices
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdFloor = -1e-10;
// eigenvalues above this count towards the purification rank
inline constexpr double kRankCutoff = 1e-12;
inline constexpr double kStateNormTol = 1e-12;

// Kronecker product; dimensions multiply.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

// Row-major strides of a composite index with the given subsystem dims.
std::vector<Eigen::Index> composite_strides(const std::vector<int>& dims);

// Hermitian, PSD, unit-trace operator on a composite space. Validated on
// construction.
class DensityMatrix {
 public:
  DensityMatrix(std::vector<int> dims, ComplexMatrix matrix);

  const std::vector<int>& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return mat_; }
  Eigen::Index side() const { return mat_.rows(); }

 private:
  std::vector<int> dims_;
  ComplexMatrix mat_;
};

// Unit vector on C^{d_a} (x) C^{d_b} (x) C^{d_e}, amplitudes indexed
// (a*d_b + b)*d_e + e.
class PureTripartiteState {
 public:
  PureTripartiteState(int d_a, int d_b, int d_e, ComplexVector amplitudes);

  int d_a() const { return d_a_; }
  int d_b() const { return d_b_; }
  int d_e() const { return d_e_; }
  const ComplexVector& amplitudes() const { return amp_; }

  // amplitudes reshaped to a (d_a*d_b) x d_e matrix
  ComplexMatrix ab_by_e() const;

  // full rank-one density operator |psi><psi| with dims [d_a, d_b, d_e]
  DensityMatrix density() const;

 private:
  int d_a_, d_b_, d_e_;
  ComplexVector amp_;
};

// Trace out every subsystem not listed in `keep`; kept dims stay in their
// original order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

// Transposition applied to one tensor factor of a square operator.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& dims, int part);
ComplexMatrix partial_transpose(const DensityMatrix& rho, int part);

struct EigPair {
  double value = 0.0;
  ComplexVector vector;
};

// Smallest eigenvalue and a unit eigenvector of a Hermitian matrix.
EigPair min_eig(const ComplexMatrix& h);

// Canonical eigen-purification sum_k sqrt(lambda_k) |k>_AB |k>_E with
// eigenvalues sorted descending and each eigenvector's first nonzero
// component made real positive. d_e equals the rank of rho.
PureTripartiteState purify(const DensityMatrix& rho);

}  // namespace entsec::qcore
