#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entsec/infotheory.hpp"
#include "entsec/qcore.hpp"
#include "entsec/types.hpp"

namespace entsec::measure {

inline constexpr double kEffectPsdFloor = -1e-10;
inline constexpr double kCompletenessTol = 1e-9;
inline constexpr double kSettingTol = 1e-9;
// tripartite outcome probabilities may go this far negative before clamping
inline constexpr double kOutcomeClamp = -1e-12;

// Finite list of PSD effects summing to identity.
class Povm {
 public:
  Povm(int dim, std::vector<ComplexMatrix> effects, std::vector<std::string> labels = {});

  static Povm computational(int dim);

  int dim() const { return dim_; }
  int n_outcomes() const { return static_cast<int>(effects_.size()); }
  const std::vector<ComplexMatrix>& effects() const { return effects_; }
  const ComplexMatrix& effect(int k) const { return effects_[k]; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  int dim_;
  std::vector<ComplexMatrix> effects_;
  std::vector<std::string> labels_;
};

// One local observable, measured in a full eigenbasis: dim rank-one
// projectors with eigenvalues listed per basis vector, so degenerate
// observables still expose dim outcomes.
class MeasurementSetting {
 public:
  explicit MeasurementSetting(const ComplexMatrix& observable);
  // reassemble from serialized eigen data; validates the setting invariants
  MeasurementSetting(ComplexMatrix observable, std::vector<double> eigenvalues,
                     ComplexMatrix eigenvectors);

  int dim() const { return static_cast<int>(observable_.rows()); }
  const ComplexMatrix& observable() const { return observable_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const ComplexMatrix& eigenvectors() const { return eigenvectors_; }  // columns
  ComplexMatrix projector(int k) const;

 private:
  void validate() const;

  ComplexMatrix observable_;
  std::vector<double> eigenvalues_;
  ComplexMatrix eigenvectors_;
};

// Fold a uniformly random choice among S settings into one POVM with
// effects (1/S) * projector, labeled "setting:outcome".
Povm settings_to_povm(const std::vector<MeasurementSetting>& settings);

// P(X,Y,Z) = tr(M_X (x) M_Y (x) M_Z |psi><psi|)
info::JointDistribution measure_tripartite(const qcore::PureTripartiteState& psi, const Povm& mx,
                                           const Povm& my, const Povm& mz);

// P(X,Y) = tr(M_X (x) M_Y rho)
info::JointDistribution measure_bipartite(const qcore::DensityMatrix& rho, const Povm& mx,
                                          const Povm& my);

// Alice-Bob state conditioned on Eve's outcome; states with outcome
// probability below info::kProbFloor are reported without a state.
struct ConditionalState {
  double prob = 0.0;
  std::optional<qcore::DensityMatrix> state;
};
std::vector<ConditionalState> conditional_states(const qcore::PureTripartiteState& psi,
                                                 const Povm& mz);

// M_zbar = sum_z P(zbar|z) M_z
Povm coarse_grain_povm(const Povm& mz, const info::ClassicalChannel& channel);

// Scaled rank-one projectors from the columns of a seeded random isometry;
// the ensemble is invariant under unitary rotation. Same seed, same POVM.
Povm random_rank1_povm(int dim, int n_outcomes, std::uint64_t seed);

}  // namespace entsec::measure
