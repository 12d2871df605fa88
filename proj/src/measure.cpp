#include "entsec/measure.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

#include "entsec/rng.hpp"

namespace entsec::measure {

Povm::Povm(int dim, std::vector<ComplexMatrix> effects, std::vector<std::string> labels)
    : dim_(dim), effects_(std::move(effects)), labels_(std::move(labels)) {
  if (dim_ < 1) throw ValidationError("povm: nonpositive dimension");
  if (effects_.empty()) throw ValidationError("povm: no effects");
  if (labels_.empty()) {
    for (std::size_t k = 0; k < effects_.size(); ++k) labels_.push_back(std::to_string(k));
  }
  if (labels_.size() != effects_.size()) throw ValidationError("povm: label count mismatch");

  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& e : effects_) {
    if (e.rows() != dim_ || e.cols() != dim_) throw ValidationError("povm: effect dimension mismatch");
    if (hermiticity_defect(e) > qcore::kHermitianTol)
      throw ValidationError("povm: effect not Hermitian within 1e-10");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(e, Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < kEffectPsdFloor)
      throw ValidationError("povm: effect has eigenvalue below -1e-10");
    sum += e;
  }
  if ((sum - ComplexMatrix::Identity(dim_, dim_)).cwiseAbs().maxCoeff() > kCompletenessTol)
    throw ValidationError("povm: effects do not sum to identity within 1e-9");
}

Povm Povm::computational(int dim) {
  std::vector<ComplexMatrix> effects;
  for (int k = 0; k < dim; ++k) {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    e(k, k) = 1.0;
    effects.push_back(std::move(e));
  }
  return Povm(dim, std::move(effects));
}

MeasurementSetting::MeasurementSetting(const ComplexMatrix& observable) {
  if (observable.rows() != observable.cols())
    throw ValidationError("setting: observable not square");
  if (hermiticity_defect(observable) > qcore::kHermitianTol)
    throw ValidationError("setting: observable not Hermitian within 1e-10");
  observable_ = (observable + observable.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(observable_);
  if (es.info() != Eigen::Success) throw NumericalError("setting: eigensolver failed");
  eigenvectors_ = es.eigenvectors();
  eigenvalues_.assign(es.eigenvalues().data(), es.eigenvalues().data() + observable_.rows());
  // deterministic phases for serialization round trips
  for (Eigen::Index k = 0; k < eigenvectors_.cols(); ++k) {
    for (Eigen::Index i = 0; i < eigenvectors_.rows(); ++i) {
      const double a = std::abs(eigenvectors_(i, k));
      if (a > qcore::kRankCutoff) {
        eigenvectors_.col(k) *= std::conj(eigenvectors_(i, k)) / a;
        break;
      }
    }
  }
  validate();
}

MeasurementSetting::MeasurementSetting(ComplexMatrix observable, std::vector<double> eigenvalues,
                                       ComplexMatrix eigenvectors)
    : observable_(std::move(observable)),
      eigenvalues_(std::move(eigenvalues)),
      eigenvectors_(std::move(eigenvectors)) {
  validate();
}

ComplexMatrix MeasurementSetting::projector(int k) const {
  return eigenvectors_.col(k) * eigenvectors_.col(k).adjoint();
}

void MeasurementSetting::validate() const {
  const Eigen::Index d = observable_.rows();
  if (observable_.cols() != d || eigenvectors_.rows() != d || eigenvectors_.cols() != d ||
      eigenvalues_.size() != static_cast<std::size_t>(d))
    throw ValidationError("setting: inconsistent eigen data");
  // orthonormal columns cover idempotence, orthogonality and completeness
  if ((eigenvectors_.adjoint() * eigenvectors_ - ComplexMatrix::Identity(d, d))
          .cwiseAbs()
          .maxCoeff() > kSettingTol)
    throw ValidationError("setting: eigenvectors not orthonormal within 1e-9");
  ComplexMatrix rebuilt = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k)
    rebuilt += eigenvalues_[k] * (eigenvectors_.col(k) * eigenvectors_.col(k).adjoint());
  if ((rebuilt - observable_).cwiseAbs().maxCoeff() > kSettingTol)
    throw ValidationError("setting: spectral decomposition does not rebuild the observable");
}

Povm settings_to_povm(const std::vector<MeasurementSetting>& settings) {
  if (settings.empty()) throw ValidationError("settings_to_povm: empty setting list");
  const int d = settings.front().dim();
  for (const auto& s : settings)
    if (s.dim() != d) throw ValidationError("settings_to_povm: dimension mismatch");
  const double w = 1.0 / static_cast<double>(settings.size());
  std::vector<ComplexMatrix> effects;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < settings.size(); ++i)
    for (int a = 0; a < d; ++a) {
      effects.push_back(w * settings[i].projector(a));
      labels.push_back(std::to_string(i) + ":" + std::to_string(a));
    }
  return Povm(d, std::move(effects), std::move(labels));
}

// unnormalized conditional AB operators sigma_z = Psi Mz^T Psi^dagger,
// with Psi the (d_a d_b) x d_e amplitude matrix
static std::vector<ComplexMatrix> conditional_operators(const qcore::PureTripartiteState& psi,
                                                        const Povm& mz) {
  const ComplexMatrix m = psi.ab_by_e();
  std::vector<ComplexMatrix> sigma;
  sigma.reserve(mz.n_outcomes());
  for (const auto& e : mz.effects()) sigma.push_back(m * e.transpose() * m.adjoint());
  return sigma;
}

info::JointDistribution measure_tripartite(const qcore::PureTripartiteState& psi, const Povm& mx,
                                           const Povm& my, const Povm& mz) {
  if (mx.dim() != psi.d_a() || my.dim() != psi.d_b() || mz.dim() != psi.d_e())
    throw ValidationError("measure_tripartite: POVM dimensions do not match the state");
  const auto sigma = conditional_operators(psi, mz);
  const int nx = mx.n_outcomes(), ny = my.n_outcomes(), nz = mz.n_outcomes();
  std::vector<double> probs(static_cast<std::size_t>(nx) * ny * nz, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      const ComplexMatrix k = qcore::tensor(mx.effect(x), my.effect(y));
      for (int z = 0; z < nz; ++z) {
        double v = (k * sigma[z]).trace().real();
        if (v < 0.0) {
          if (v < kOutcomeClamp)
            throw NumericalError("measure_tripartite: outcome probability below -1e-12");
          v = 0.0;
        }
        probs[(static_cast<std::size_t>(x) * ny + y) * nz + z] = v;
      }
    }
  return info::JointDistribution({nx, ny, nz}, std::move(probs));
}

info::JointDistribution measure_bipartite(const qcore::DensityMatrix& rho, const Povm& mx,
                                          const Povm& my) {
  if (rho.dims().size() != 2) throw ValidationError("measure_bipartite: state must be bipartite");
  if (mx.dim() != rho.dims()[0] || my.dim() != rho.dims()[1])
    throw ValidationError("measure_bipartite: POVM dimensions do not match the state");
  const int nx = mx.n_outcomes(), ny = my.n_outcomes();
  std::vector<double> probs(static_cast<std::size_t>(nx) * ny, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      double v = (qcore::tensor(mx.effect(x), my.effect(y)) * rho.matrix()).trace().real();
      if (v < 0.0) {
        if (v < kOutcomeClamp)
          throw NumericalError("measure_bipartite: outcome probability below -1e-12");
        v = 0.0;
      }
      probs[static_cast<std::size_t>(x) * ny + y] = v;
    }
  return info::JointDistribution({nx, ny}, std::move(probs));
}

std::vector<ConditionalState> conditional_states(const qcore::PureTripartiteState& psi,
                                                 const Povm& mz) {
  if (mz.dim() != psi.d_e())
    throw ValidationError("conditional_states: POVM dimension does not match Eve's space");
  std::vector<ConditionalState> out;
  for (auto& sigma : conditional_operators(psi, mz)) {
    ConditionalState c;
    c.prob = sigma.trace().real();
    if (c.prob >= info::kProbFloor) {
      ComplexMatrix m = sigma / c.prob;
      m = (m + m.adjoint().eval()) / 2.0;
      c.state = qcore::DensityMatrix({psi.d_a(), psi.d_b()}, std::move(m));
    }
    out.push_back(std::move(c));
  }
  return out;
}

Povm coarse_grain_povm(const Povm& mz, const info::ClassicalChannel& channel) {
  if (channel.n_in() != mz.n_outcomes())
    throw ValidationError("coarse_grain_povm: channel input alphabet mismatch");
  std::vector<ComplexMatrix> effects(channel.n_out(),
                                     ComplexMatrix::Zero(mz.dim(), mz.dim()));
  for (int z = 0; z < mz.n_outcomes(); ++z)
    for (int w = 0; w < channel.n_out(); ++w) effects[w] += channel.at(z, w) * mz.effect(z);
  return Povm(mz.dim(), std::move(effects));
}

Povm random_rank1_povm(int dim, int n_outcomes, std::uint64_t seed) {
  if (dim < 1) throw ValidationError("random_rank1_povm: nonpositive dimension");
  if (n_outcomes < dim)
    throw ValidationError("random_rank1_povm: need at least dim outcomes for completeness");

  RandomStream rng(seed);
  ComplexMatrix a = rng.gaussian_matrix(dim, n_outcomes);
  ComplexMatrix s = a * a.adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(s);
  if (es.info() != Eigen::Success || es.eigenvalues()(0) <= 0.0)
    throw NumericalError("random_rank1_povm: Gram matrix numerically singular");
  ComplexMatrix inv_sqrt = ComplexMatrix::Zero(dim, dim);
  for (int k = 0; k < dim; ++k)
    inv_sqrt += (1.0 / std::sqrt(es.eigenvalues()(k))) * es.eigenvectors().col(k) *
                es.eigenvectors().col(k).adjoint();

  std::vector<ComplexMatrix> effects;
  for (int k = 0; k < n_outcomes; ++k) {
    ComplexVector v = inv_sqrt * a.col(k);
    ComplexMatrix e = v * v.adjoint();
    effects.push_back((e + e.adjoint().eval()) / 2.0);
  }
  return Povm(dim, std::move(effects));
}

}  // namespace entsec::measure
