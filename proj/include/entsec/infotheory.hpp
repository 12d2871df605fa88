#pragma once

#include <cstdint>
#include <vector>

#include "entsec/types.hpp"

namespace entsec::info {

// symbols with probability below this are treated as absent
inline constexpr double kProbFloor = 1e-14;
inline constexpr double kDistSumTol = 1e-9;
inline constexpr double kRowSumTol = 1e-12;
inline constexpr double kSecretBitTol = 1e-9;
// deterministic channel enumeration is exhaustive up to this input size
inline constexpr int kEnumerationCap = 8;
inline constexpr int kDescentMaxSweeps = 200;
inline constexpr double kDescentImprovementTol = 1e-9;

// Dense finite-alphabet distribution, bipartite [n_X, n_Y] or tripartite
// [n_X, n_Y, n_Z], probabilities row-major.
class JointDistribution {
 public:
  JointDistribution(std::vector<int> alphabet_sizes, std::vector<double> probs);

  const std::vector<int>& alphabet_sizes() const { return sizes_; }
  const std::vector<double>& probs() const { return probs_; }
  bool tripartite() const { return sizes_.size() == 3; }

  double at(int x, int y) const { return probs_[static_cast<std::size_t>(x) * sizes_[1] + y]; }
  double at(int x, int y, int z) const {
    return probs_[(static_cast<std::size_t>(x) * sizes_[1] + y) * sizes_[2] + z];
  }

  // P(X,Y) of a tripartite distribution
  JointDistribution xy_marginal() const;
  std::vector<double> z_marginal() const;

 private:
  std::vector<int> sizes_;
  std::vector<double> probs_;
};

// Row-stochastic map P(Zbar|Z); row = input symbol.
class ClassicalChannel {
 public:
  ClassicalChannel();  // 1 -> 1 identity
  ClassicalChannel(int n_in, int n_out, std::vector<std::vector<double>> rows);

  static ClassicalChannel identity(int n);
  static ClassicalChannel merge_all(int n);
  // map[z] gives the output symbol for input z
  static ClassicalChannel deterministic(const std::vector<int>& map, int n_out);

  int n_in() const { return n_in_; }
  int n_out() const { return n_out_; }
  const std::vector<std::vector<double>>& rows() const { return rows_; }
  double at(int z, int zbar) const { return rows_[z][zbar]; }

 private:
  int n_in_, n_out_;
  std::vector<std::vector<double>> rows_;
};

struct IntrinsicResult {
  double value = 0.0;  // bits; best-found upper bound on the channel minimum
  ClassicalChannel channel;
  long n_evaluations = 0;
  bool converged = false;
};

// I(X;Y) in bits, 0 log 0 = 0.
double mutual_information(const JointDistribution& p);

// sum_z P(z) I(X;Y|Z=z) in bits; symbols with P(z) < kProbFloor contribute 0.
double conditional_mutual_information(const JointDistribution& p);

// P(x,y,zbar) = sum_z P(x,y,z) ch[z][zbar]; the XY marginal is unchanged.
JointDistribution apply_channel(const JointDistribution& p, const ClassicalChannel& ch);

// Best-found minimum of I(X;Y|Zbar) over channels Z -> Zbar: exhaustive
// deterministic maps (up to output relabeling, input alphabets <= 8) plus
// seeded stochastic starts refined by projected coordinate descent.
IntrinsicResult intrinsic_information(const JointDistribution& p, int zbar_size, int restarts,
                                      std::uint64_t seed);

// Binary, locally random, perfectly correlated X and Y with Z independent
// of both.
bool is_secret_bit(const JointDistribution& p);

// Euclidean projection onto the probability simplex (sort-based).
void project_to_simplex(std::vector<double>& v);

// Restricted growth strings: every deterministic map {0..n_in-1} -> outputs,
// canonical under output relabeling, using at most n_out output symbols.
std::vector<std::vector<int>> canonical_deterministic_maps(int n_in, int n_out);

}  // namespace entsec::info
