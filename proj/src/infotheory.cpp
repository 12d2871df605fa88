#include "entsec/infotheory.hpp"

#include <algorithm>
#include <cmath>

#include "entsec/rng.hpp"

namespace entsec::info {

JointDistribution::JointDistribution(std::vector<int> alphabet_sizes, std::vector<double> probs)
    : sizes_(std::move(alphabet_sizes)), probs_(std::move(probs)) {
  if (sizes_.size() != 2 && sizes_.size() != 3)
    throw ValidationError("distribution: alphabet must be bipartite or tripartite");
  std::size_t n = 1;
  for (int s : sizes_) {
    if (s < 1) throw ValidationError("distribution: nonpositive alphabet size");
    n *= static_cast<std::size_t>(s);
  }
  if (probs_.size() != n) throw ValidationError("distribution: entry count mismatch");
  double total = 0.0;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0)
      throw ValidationError("distribution: entries must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > kDistSumTol)
    throw ValidationError("distribution: total not 1 within 1e-9");
}

JointDistribution JointDistribution::xy_marginal() const {
  if (!tripartite()) return *this;
  std::vector<double> q(static_cast<std::size_t>(sizes_[0]) * sizes_[1], 0.0);
  for (int x = 0; x < sizes_[0]; ++x)
    for (int y = 0; y < sizes_[1]; ++y)
      for (int z = 0; z < sizes_[2]; ++z)
        q[static_cast<std::size_t>(x) * sizes_[1] + y] += at(x, y, z);
  return JointDistribution({sizes_[0], sizes_[1]}, std::move(q));
}

std::vector<double> JointDistribution::z_marginal() const {
  if (!tripartite()) throw ValidationError("z_marginal: distribution is bipartite");
  std::vector<double> pz(sizes_[2], 0.0);
  for (int x = 0; x < sizes_[0]; ++x)
    for (int y = 0; y < sizes_[1]; ++y)
      for (int z = 0; z < sizes_[2]; ++z) pz[z] += at(x, y, z);
  return pz;
}

ClassicalChannel::ClassicalChannel() : ClassicalChannel(1, 1, {{1.0}}) {}

ClassicalChannel::ClassicalChannel(int n_in, int n_out, std::vector<std::vector<double>> rows)
    : n_in_(n_in), n_out_(n_out), rows_(std::move(rows)) {
  if (n_in_ < 1 || n_out_ < 1) throw ValidationError("channel: nonpositive alphabet size");
  if (rows_.size() != static_cast<std::size_t>(n_in_))
    throw ValidationError("channel: row count mismatch");
  for (const auto& row : rows_) {
    if (row.size() != static_cast<std::size_t>(n_out_))
      throw ValidationError("channel: row length mismatch");
    double total = 0.0;
    for (double v : row) {
      if (!std::isfinite(v) || v < 0.0)
        throw ValidationError("channel: entries must be finite and nonnegative");
      total += v;
    }
    if (std::abs(total - 1.0) > kRowSumTol)
      throw ValidationError("channel: row sum not 1 within 1e-12");
  }
}

ClassicalChannel ClassicalChannel::identity(int n) {
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 0.0));
  for (int z = 0; z < n; ++z) rows[z][z] = 1.0;
  return ClassicalChannel(n, n, std::move(rows));
}

ClassicalChannel ClassicalChannel::merge_all(int n) {
  return ClassicalChannel(n, 1, std::vector<std::vector<double>>(n, {1.0}));
}

ClassicalChannel ClassicalChannel::deterministic(const std::vector<int>& map, int n_out) {
  std::vector<std::vector<double>> rows(map.size(), std::vector<double>(n_out, 0.0));
  for (std::size_t z = 0; z < map.size(); ++z) {
    if (map[z] < 0 || map[z] >= n_out) throw ValidationError("channel: map value out of range");
    rows[z][map[z]] = 1.0;
  }
  return ClassicalChannel(static_cast<int>(map.size()), n_out, std::move(rows));
}

static double log2_safe(double x) { return std::log2(x); }

double mutual_information(const JointDistribution& p) {
  if (p.tripartite()) throw ValidationError("mutual_information: expected a bipartite distribution");
  const int nx = p.alphabet_sizes()[0], ny = p.alphabet_sizes()[1];
  std::vector<double> px(nx, 0.0), py(ny, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      px[x] += p.at(x, y);
      py[y] += p.at(x, y);
    }
  double mi = 0.0;
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      const double pxy = p.at(x, y);
      if (pxy > 0.0) mi += pxy * log2_safe(pxy / (px[x] * py[y]));
    }
  return std::max(mi, 0.0);
}

// raw slice version used by the optimizer hot loop: p has nx*ny*nz entries,
// returns sum_z P(z) I(X;Y|z)
static double cmi_raw(const double* p, int nx, int ny, int nz, std::vector<double>& px,
                      std::vector<double>& py) {
  double out = 0.0;
  px.assign(static_cast<std::size_t>(nx), 0.0);
  py.assign(static_cast<std::size_t>(ny), 0.0);
  for (int z = 0; z < nz; ++z) {
    double pz = 0.0;
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) pz += p[(static_cast<std::size_t>(x) * ny + y) * nz + z];
    if (pz < kProbFloor) continue;
    std::fill(px.begin(), px.end(), 0.0);
    std::fill(py.begin(), py.end(), 0.0);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) {
        const double v = p[(static_cast<std::size_t>(x) * ny + y) * nz + z];
        px[x] += v;
        py[y] += v;
      }
    double acc = 0.0;
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) {
        const double v = p[(static_cast<std::size_t>(x) * ny + y) * nz + z];
        if (v > 0.0) acc += v * log2_safe(v * pz / (px[x] * py[y]));
      }
    out += acc;  // acc already carries the P(z) weight through unnormalized slices
  }
  return std::max(out, 0.0);
}

double conditional_mutual_information(const JointDistribution& p) {
  if (!p.tripartite())
    throw ValidationError("conditional_mutual_information: expected a tripartite distribution");
  const auto& s = p.alphabet_sizes();
  std::vector<double> px, py;
  return cmi_raw(p.probs().data(), s[0], s[1], s[2], px, py);
}

JointDistribution apply_channel(const JointDistribution& p, const ClassicalChannel& ch) {
  if (!p.tripartite()) throw ValidationError("apply_channel: expected a tripartite distribution");
  const auto& s = p.alphabet_sizes();
  if (ch.n_in() != s[2]) throw ValidationError("apply_channel: channel input alphabet mismatch");
  std::vector<double> q(static_cast<std::size_t>(s[0]) * s[1] * ch.n_out(), 0.0);
  for (int x = 0; x < s[0]; ++x)
    for (int y = 0; y < s[1]; ++y)
      for (int z = 0; z < s[2]; ++z) {
        const double v = p.at(x, y, z);
        if (v == 0.0) continue;
        for (int w = 0; w < ch.n_out(); ++w)
          q[(static_cast<std::size_t>(x) * s[1] + y) * ch.n_out() + w] += v * ch.at(z, w);
      }
  return JointDistribution({s[0], s[1], ch.n_out()}, std::move(q));
}

void project_to_simplex(std::vector<double>& v) {
  std::vector<double> u(v);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = -1.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    css += u[k];
    const double t = css / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) theta = t;
  }
  for (auto& x : v) x = std::max(x - theta, 0.0);
}

std::vector<std::vector<int>> canonical_deterministic_maps(int n_in, int n_out) {
  std::vector<std::vector<int>> maps;
  std::vector<int> cur(n_in, 0);
  // depth-first over restricted growth strings capped at n_out symbols
  auto rec = [&](auto&& self, int pos, int max_used) -> void {
    if (pos == n_in) {
      maps.push_back(cur);
      return;
    }
    const int limit = std::min(max_used + 1, n_out - 1);
    for (int v = 0; v <= limit; ++v) {
      cur[pos] = v;
      self(self, pos + 1, std::max(max_used, v));
    }
  };
  rec(rec, 0, -1);
  return maps;
}

namespace {

// channel applied to the raw prob array (hot loop, no validation)
void apply_raw(const std::vector<double>& p, int nx, int ny, int nz,
               const std::vector<std::vector<double>>& rows, int n_out, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(nx) * ny * n_out, 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      const std::size_t base_in = (static_cast<std::size_t>(x) * ny + y) * nz;
      const std::size_t base_out = (static_cast<std::size_t>(x) * ny + y) * n_out;
      for (int z = 0; z < nz; ++z) {
        const double v = p[base_in + z];
        if (v == 0.0) continue;
        const auto& row = rows[z];
        for (int w = 0; w < n_out; ++w) out[base_out + w] += v * row[w];
      }
    }
}

struct Objective {
  const JointDistribution& p;
  int nx, ny, nz, n_out;
  long evals = 0;
  std::vector<double> scratch, px, py;

  explicit Objective(const JointDistribution& dist, int zbar)
      : p(dist),
        nx(dist.alphabet_sizes()[0]),
        ny(dist.alphabet_sizes()[1]),
        nz(dist.alphabet_sizes()[2]),
        n_out(zbar) {}

  double operator()(const std::vector<std::vector<double>>& rows) {
    ++evals;
    apply_raw(p.probs(), nx, ny, nz, rows, n_out, scratch);
    return cmi_raw(scratch.data(), nx, ny, n_out, px, py);
  }
};

}  // namespace

IntrinsicResult intrinsic_information(const JointDistribution& p, int zbar_size, int restarts,
                                      std::uint64_t seed) {
  if (!p.tripartite())
    throw ValidationError("intrinsic_information: expected a tripartite distribution");
  if (zbar_size < 1) throw ValidationError("intrinsic_information: zbar_size must be >= 1");
  if (restarts < 0) throw ValidationError("intrinsic_information: restarts must be >= 0");

  const int nz = p.alphabet_sizes()[2];
  Objective f(p, zbar_size);

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> best_rows;
  bool best_converged = false;

  // (a) deterministic channels, exhaustive up to output relabeling
  if (nz <= kEnumerationCap) {
    for (const auto& map : canonical_deterministic_maps(nz, zbar_size)) {
      std::vector<std::vector<double>> rows(nz, std::vector<double>(zbar_size, 0.0));
      for (int z = 0; z < nz; ++z) rows[z][map[z]] = 1.0;
      const double v = f(rows);
      if (v < best) {
        best = v;
        best_rows = rows;
        best_converged = true;  // exact evaluation, nothing left to iterate
      }
    }
  }

  // (b) seeded stochastic starts + projected coordinate descent on rows
  const double fd_step = 1e-6;
  for (int r = 0; r < restarts; ++r) {
    RandomStream rng(split_seed(seed, static_cast<std::uint64_t>(r)));
    std::vector<std::vector<double>> rows(nz);
    for (int z = 0; z < nz; ++z) rows[z] = rng.simplex_point(static_cast<std::size_t>(zbar_size));

    double cur = f(rows);
    bool run_converged = false;
    for (int sweep = 0; sweep < kDescentMaxSweeps; ++sweep) {
      const double sweep_start = cur;
      for (int z = 0; z < nz; ++z) {
        std::vector<double> grad(zbar_size, 0.0);
        for (int w = 0; w < zbar_size; ++w) {
          auto probe = rows;
          probe[z][w] += fd_step;
          grad[w] = (f(probe) - cur) / fd_step;
        }
        double step = 0.5;
        for (int halving = 0; halving < 25; ++halving) {
          std::vector<double> row(zbar_size);
          for (int w = 0; w < zbar_size; ++w) row[w] = rows[z][w] - step * grad[w];
          project_to_simplex(row);
          auto probe = rows;
          probe[z] = row;
          const double v = f(probe);
          if (v < cur) {
            rows = std::move(probe);
            cur = v;
            break;
          }
          step /= 2.0;
        }
      }
      if (sweep_start - cur < kDescentImprovementTol) {
        run_converged = true;
        break;
      }
    }
    if (cur < best) {
      best = cur;
      best_rows = rows;
      best_converged = run_converged;
    }
  }

  if (best_rows.empty()) {
    // no enumeration (large alphabet) and no restarts: fall back to merging
    best_rows = ClassicalChannel::merge_all(nz).rows();
    best = f(best_rows);
    best_converged = true;
  }

  IntrinsicResult out;
  out.channel = ClassicalChannel(nz, zbar_size, best_rows);
  out.value = conditional_mutual_information(apply_channel(p, out.channel));
  out.n_evaluations = f.evals;
  out.converged = best_converged;
  return out;
}

bool is_secret_bit(const JointDistribution& p) {
  const auto& s = p.alphabet_sizes();
  if (s[0] != 2 || s[1] != 2) return false;
  const int nz = p.tripartite() ? s[2] : 1;
  auto at = [&](int x, int y, int z) { return p.tripartite() ? p.at(x, y, z) : p.at(x, y); };

  double px0 = 0.0, py0 = 0.0, mismatch = 0.0;
  std::vector<double> pz(nz, 0.0);
  std::vector<std::vector<double>> pxy(2, std::vector<double>(2, 0.0));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < nz; ++z) {
        const double v = at(x, y, z);
        pxy[x][y] += v;
        pz[z] += v;
        if (x == 0) px0 += v;
        if (y == 0) py0 += v;
        if (x != y) mismatch += v;
      }
  if (std::abs(px0 - 0.5) > kSecretBitTol || std::abs(py0 - 0.5) > kSecretBitTol) return false;
  if (mismatch > kSecretBitTol) return false;
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int z = 0; z < nz; ++z)
        if (std::abs(at(x, y, z) - pxy[x][y] * pz[z]) > kSecretBitTol) return false;
  return true;
}

}  // namespace entsec::info
