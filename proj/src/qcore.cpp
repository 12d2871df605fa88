#include "entsec/qcore.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace entsec::qcore {

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

std::vector<Eigen::Index> composite_strides(const std::vector<int>& dims) {
  std::vector<Eigen::Index> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    s[k] = s[k + 1] * dims[k + 1];
  return s;
}

static Eigen::Index product_of(const std::vector<int>& dims) {
  Eigen::Index n = 1;
  for (int d : dims) n *= d;
  return n;
}

DensityMatrix::DensityMatrix(std::vector<int> dims, ComplexMatrix matrix)
    : dims_(std::move(dims)), mat_(std::move(matrix)) {
  if (dims_.empty()) throw ValidationError("density matrix: empty dims");
  for (int d : dims_)
    if (d < 1) throw ValidationError("density matrix: nonpositive dim");
  const Eigen::Index n = product_of(dims_);
  if (mat_.rows() != n || mat_.cols() != n)
    throw ValidationError("density matrix: side does not match product of dims");
  if (!all_finite(mat_)) throw ValidationError("density matrix: non-finite entries");
  if (hermiticity_defect(mat_) > kHermitianTol)
    throw ValidationError("density matrix: not Hermitian within 1e-10");
  if (std::abs(mat_.trace().real() - 1.0) > kTraceTol || std::abs(mat_.trace().imag()) > kTraceTol)
    throw ValidationError("density matrix: trace not 1 within 1e-10");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) < kPsdFloor)
    throw ValidationError("density matrix: minimum eigenvalue below -1e-10");
}

PureTripartiteState::PureTripartiteState(int d_a, int d_b, int d_e, ComplexVector amplitudes)
    : d_a_(d_a), d_b_(d_b), d_e_(d_e), amp_(std::move(amplitudes)) {
  if (d_a_ < 1 || d_b_ < 1 || d_e_ < 1)
    throw ValidationError("tripartite state: nonpositive dimension");
  if (amp_.size() != static_cast<Eigen::Index>(d_a_) * d_b_ * d_e_)
    throw ValidationError("tripartite state: amplitude count mismatch");
  if (!amp_.allFinite()) throw ValidationError("tripartite state: non-finite amplitudes");
  if (std::abs(amp_.squaredNorm() - 1.0) > kStateNormTol)
    throw ValidationError("tripartite state: squared norm not 1 within 1e-12");
}

ComplexMatrix PureTripartiteState::ab_by_e() const {
  ComplexMatrix m(static_cast<Eigen::Index>(d_a_) * d_b_, d_e_);
  for (Eigen::Index ab = 0; ab < m.rows(); ++ab)
    for (Eigen::Index e = 0; e < d_e_; ++e) m(ab, e) = amp_(ab * d_e_ + e);
  return m;
}

DensityMatrix PureTripartiteState::density() const {
  return DensityMatrix({d_a_, d_b_, d_e_}, amp_ * amp_.adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  const auto& dims = rho.dims();
  const int n_sub = static_cast<int>(dims.size());
  if (keep.empty()) throw ValidationError("partial_trace: empty keep set");
  std::vector<bool> kept(n_sub, false);
  for (int k : keep) {
    if (k < 0 || k >= n_sub) throw ValidationError("partial_trace: invalid subsystem index");
    if (kept[k]) throw ValidationError("partial_trace: duplicate subsystem index");
    kept[k] = true;
  }

  std::vector<int> keep_sorted;
  std::vector<int> traced;
  for (int k = 0; k < n_sub; ++k) (kept[k] ? keep_sorted : traced).push_back(k);

  std::vector<int> out_dims;
  for (int k : keep_sorted) out_dims.push_back(dims[k]);
  const auto strides = composite_strides(dims);
  const Eigen::Index out_n = product_of(out_dims);

  Eigen::Index traced_n = 1;
  for (int k : traced) traced_n *= dims[k];

  ComplexMatrix out = ComplexMatrix::Zero(out_n, out_n);
  // walk kept row/col multi-indices and sum the diagonal over traced indices
  std::vector<int> ki(keep_sorted.size(), 0), kj(keep_sorted.size(), 0);
  for (Eigen::Index i = 0; i < out_n; ++i) {
    Eigen::Index rem = i;
    for (std::size_t s = 0; s < keep_sorted.size(); ++s) {
      Eigen::Index block = 1;
      for (std::size_t t = s + 1; t < keep_sorted.size(); ++t) block *= out_dims[t];
      ki[s] = static_cast<int>(rem / block);
      rem %= block;
    }
    for (Eigen::Index j = 0; j < out_n; ++j) {
      rem = j;
      for (std::size_t s = 0; s < keep_sorted.size(); ++s) {
        Eigen::Index block = 1;
        for (std::size_t t = s + 1; t < keep_sorted.size(); ++t) block *= out_dims[t];
        kj[s] = static_cast<int>(rem / block);
        rem %= block;
      }
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < traced_n; ++t) {
        Eigen::Index row = 0, col = 0;
        Eigen::Index trem = t;
        for (std::size_t s = 0; s < traced.size(); ++s) {
          Eigen::Index block = 1;
          for (std::size_t u = s + 1; u < traced.size(); ++u) block *= dims[traced[u]];
          const Eigen::Index idx = trem / block;
          trem %= block;
          row += idx * strides[traced[s]];
          col += idx * strides[traced[s]];
        }
        for (std::size_t s = 0; s < keep_sorted.size(); ++s) {
          row += ki[s] * strides[keep_sorted[s]];
          col += kj[s] * strides[keep_sorted[s]];
        }
        acc += rho.matrix()(row, col);
      }
      out(i, j) = acc;
    }
  }
  // clean up roundoff so the reduced state revalidates
  out = (out + out.adjoint().eval()) / 2.0;
  return DensityMatrix(out_dims, std::move(out));
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const std::vector<int>& dims, int part) {
  if (dims.size() != 2) throw ValidationError("partial_transpose: input must be bipartite");
  if (part != 0 && part != 1) throw ValidationError("partial_transpose: part must be 0 or 1");
  const int da = dims[0], db = dims[1];
  if (m.rows() != static_cast<Eigen::Index>(da) * db || m.cols() != m.rows())
    throw ValidationError("partial_transpose: matrix side does not match dims");
  ComplexMatrix out(m.rows(), m.cols());
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < db; ++j)
      for (int k = 0; k < da; ++k)
        for (int l = 0; l < db; ++l) {
          const Eigen::Index r = static_cast<Eigen::Index>(i) * db + j;
          const Eigen::Index c = static_cast<Eigen::Index>(k) * db + l;
          if (part == 0)
            out(r, c) = m(static_cast<Eigen::Index>(k) * db + j, static_cast<Eigen::Index>(i) * db + l);
          else
            out(r, c) = m(static_cast<Eigen::Index>(i) * db + l, static_cast<Eigen::Index>(k) * db + j);
        }
  return out;
}

ComplexMatrix partial_transpose(const DensityMatrix& rho, int part) {
  return partial_transpose(rho.matrix(), rho.dims(), part);
}

EigPair min_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw ValidationError("min_eig: matrix not square");
  if (hermiticity_defect(h) > kHermitianTol)
    throw ValidationError("min_eig: matrix not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es((h + h.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) throw NumericalError("min_eig: eigensolver failed");
  EigPair out;
  out.value = es.eigenvalues()(0);
  out.vector = es.eigenvectors().col(0);
  return out;
}

// first component with modulus above the rank cutoff is rotated to the
// positive real axis
static void fix_phase(ComplexVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v(i));
    if (a > kRankCutoff) {
      v *= std::conj(v(i)) / a;
      return;
    }
  }
}

PureTripartiteState purify(const DensityMatrix& rho) {
  if (rho.dims().size() != 2) throw ValidationError("purify: input must be bipartite");
  const int da = rho.dims()[0], db = rho.dims()[1];

  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
  if (es.info() != Eigen::Success) throw NumericalError("purify: eigensolver failed");

  const Eigen::Index n = rho.side();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return es.eigenvalues()(a) > es.eigenvalues()(b);
  });

  std::vector<std::pair<double, ComplexVector>> branches;
  for (Eigen::Index k : order) {
    const double lam = es.eigenvalues()(k);
    if (lam > kRankCutoff) {
      ComplexVector v = es.eigenvectors().col(k);
      fix_phase(v);
      branches.emplace_back(lam, std::move(v));
    }
  }
  if (branches.empty()) throw NumericalError("purify: state has numerical rank zero");

  const int de = static_cast<int>(branches.size());
  ComplexVector amp = ComplexVector::Zero(static_cast<Eigen::Index>(da) * db * de);
  for (int e = 0; e < de; ++e) {
    const double root = std::sqrt(branches[e].first);
    for (Eigen::Index ab = 0; ab < n; ++ab) amp(ab * de + e) = root * branches[e].second(ab);
  }
  amp /= amp.norm();
  return PureTripartiteState(da, db, de, std::move(amp));
}

}  // namespace entsec::qcore
