#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sngen/graph.hpp"
#include "sngen/log.hpp"
#include "sngen/random.hpp"
#include "sngen/special.hpp"

namespace sngen {

/// X = scale * Y with Y ~ chi^2(dof).
struct ScaledChiSquare {
  double dof = 1.0;
  double scale = 1.0;

  double mean() const noexcept { return scale * dof; }
  double variance() const noexcept { return 2.0 * scale * scale * dof; }

  /// Moment-matched distribution with the given mean and standard deviation.
  static ScaledChiSquare from_moments(double mean, double stddev) {
    if (!(mean > 0.0) || !(stddev > 0.0)) {
      throw std::invalid_argument("scaled chi-square needs positive mean and standard deviation");
    }
    const double var = stddev * stddev;
    return {2.0 * mean * mean / var, var / (2.0 * mean)};
  }

  friend bool operator==(const ScaledChiSquare&, const ScaledChiSquare&) = default;
};

/// Spearman rank correlations between the three degree kinds.
struct CorrelationTriple {
  double recip_in = 0.0;   // rho1
  double recip_out = 0.0;  // rho2
  double in_out = 0.0;     // rho3

  friend bool operator==(const CorrelationTriple&, const CorrelationTriple&) = default;
};

enum class DegreeMode { kCorrelated, kIndependent };

struct DegreeModel {
  std::size_t nodes = 0;
  ScaledChiSquare recip;
  ScaledChiSquare indeg;
  ScaledChiSquare outdeg;
  CorrelationTriple corr;
  DegreeMode mode = DegreeMode::kCorrelated;

  /// Expected number of directed entries, r + d, of a graph sampled from this model.
  double expected_edge_entries() const {
    return static_cast<double>(nodes) * (recip.mean() + 0.5 * (indeg.mean() + outdeg.mean()));
  }
};

/// Position-aligned per-node degree sequences.
struct DegreeSequences {
  std::vector<std::uint32_t> recip;
  std::vector<std::uint32_t> indeg;
  std::vector<std::uint32_t> outdeg;

  std::size_t size() const noexcept { return recip.size(); }
  friend bool operator==(const DegreeSequences&, const DegreeSequences&) = default;
};

// ---------------------------------------------------------------------------
// Fitting

/// Method-of-moments fit: the fitted mean and variance equal the sample
/// mean and the unbiased sample variance.
template <typename T>
ScaledChiSquare fit_scaled_chi_square(std::span<const T> samples) {
  if (samples.size() < 2) throw std::invalid_argument("fit needs at least two samples");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (const auto s : samples) mean += static_cast<double>(s);
  mean /= n;
  double ss = 0.0;
  for (const auto s : samples) {
    const double d = static_cast<double>(s) - mean;
    ss += d * d;
  }
  const double var = ss / (n - 1.0);
  if (!(var > 0.0)) throw std::invalid_argument("zero variance in degree samples");
  if (!(mean > 0.0)) throw std::invalid_argument("non-positive mean in degree samples");
  return {2.0 * mean * mean / var, var / (2.0 * mean)};
}

template <typename T>
ScaledChiSquare fit_scaled_chi_square(const std::vector<T>& samples) {
  return fit_scaled_chi_square(std::span<const T>(samples));
}

/// CDF of the scaled chi-square: P(k/2, x/(2c)).
inline double scaled_chi_square_cdf(const ScaledChiSquare& dist, double x) {
  return special::gamma_p(0.5 * dist.dof, x / (2.0 * dist.scale));
}

inline double scaled_chi_square_quantile(const ScaledChiSquare& dist, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("quantile probability must lie in (0, 1)");
  return 2.0 * dist.scale * special::gamma_p_inverse(0.5 * dist.dof, u);
}

// ---------------------------------------------------------------------------
// Rank correlation

/// Average ranks (1-based); tied values share the mean of the ranks they span.
template <typename T>
std::vector<double> average_ranks(std::span<const T> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && !(xs[order[i]] < xs[order[j]])) ++j;
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("constant sequence has no rank correlation");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

template <typename T, typename U>
double spearman_rho(std::span<const T> xs, std::span<const U> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("spearman_rho: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("spearman_rho: need at least two values");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

template <typename T, typename U>
double spearman_rho(const std::vector<T>& xs, const std::vector<U>& ys) {
  return spearman_rho(std::span<const T>(xs), std::span<const U>(ys));
}

/// Maps a Spearman rank correlation to the Pearson correlation of a
/// bivariate normal with that rank correlation: 2 sin(rho * pi / 6).
inline double rho_to_pearson(double rho) {
  if (!(std::fabs(rho) <= 1.0)) throw std::domain_error("rank correlation must lie in [-1, 1]");
  return 2.0 * std::sin(rho * std::numbers::pi / 6.0);
}

// ---------------------------------------------------------------------------
// Sampling

/// Correlation matrix of the latent normal vector. Identity in independent mode.
inline Eigen::Matrix3d latent_correlation(const DegreeModel& model) {
  Eigen::Matrix3d sigma = Eigen::Matrix3d::Identity();
  if (model.mode == DegreeMode::kIndependent) return sigma;
  const double r1 = rho_to_pearson(model.corr.recip_in);
  const double r2 = rho_to_pearson(model.corr.recip_out);
  const double r3 = rho_to_pearson(model.corr.in_out);
  sigma(0, 1) = sigma(1, 0) = r1;
  sigma(0, 2) = sigma(2, 0) = r2;
  sigma(1, 2) = sigma(2, 1) = r3;
  return sigma;
}

/// Lower Cholesky factor of sigma. When sigma is not positive definite its
/// eigenvalues are clipped at 1e-10 and the diagonal is rescaled back to 1.
inline Eigen::Matrix3d correlation_factor(const Eigen::Matrix3d& sigma) {
  Eigen::LLT<Eigen::Matrix3d> llt(sigma);
  if (llt.info() == Eigen::Success) return llt.matrixL();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(sigma);
  Eigen::Vector3d values = eig.eigenvalues().cwiseMax(1e-10);
  Eigen::Matrix3d repaired = eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  const Eigen::Vector3d inv_sd = repaired.diagonal().cwiseSqrt().cwiseInverse();
  repaired = inv_sd.asDiagonal() * repaired * inv_sd.asDiagonal();
  log::warn("latent correlation matrix is not positive definite; eigenvalues clipped at 1e-10");

  Eigen::LLT<Eigen::Matrix3d> repaired_llt(repaired);
  if (repaired_llt.info() != Eigen::Success) {
    throw std::invalid_argument("latent correlation matrix could not be repaired");
  }
  return repaired_llt.matrixL();
}

/// The copula stage: n points in (0,1)^3 with uniform marginals whose latent
/// normal vector has the model's correlation matrix. Columns are
/// (reciprocal, in, out).
inline std::vector<std::array<double, 3>> sample_copula(const DegreeModel& model, Rng& rng) {
  if (model.nodes == 0) throw std::invalid_argument("degree model needs at least one node");
  const Eigen::Matrix3d factor = correlation_factor(latent_correlation(model));
  std::vector<std::array<double, 3>> points(model.nodes);
  for (auto& point : points) {
    const Eigen::Vector3d z{standard_normal(rng), standard_normal(rng), standard_normal(rng)};
    const Eigen::Vector3d x = factor * z;
    for (int k = 0; k < 3; ++k) {
      // erfc saturates in the far tails; keep the point strictly inside (0,1).
      point[k] = std::clamp(special::normal_cdf(x[k]), 0x1.0p-60, 1.0 - 0x1.0p-53);
    }
  }
  return points;
}

/// Continuous (pre-rounding) degree triples.
inline std::vector<std::array<double, 3>> sample_continuous_degrees(const DegreeModel& model, Rng& rng) {
  auto points = sample_copula(model, rng);
  const std::array<const ScaledChiSquare*, 3> marginals{&model.recip, &model.indeg, &model.outdeg};
  for (auto& point : points) {
    for (int k = 0; k < 3; ++k) point[k] = scaled_chi_square_quantile(*marginals[k], point[k]);
  }
  return points;
}

/// Rounds half up. Quantiles are nonnegative so no clamping is needed.
inline std::uint32_t round_degree(double x) {
  return static_cast<std::uint32_t>(std::floor(x + 0.5));
}

inline DegreeSequences sample_correlated_degrees(const DegreeModel& model, Rng& rng) {
  const auto continuous = sample_continuous_degrees(model, rng);
  DegreeSequences seq;
  seq.recip.reserve(model.nodes);
  seq.indeg.reserve(model.nodes);
  seq.outdeg.reserve(model.nodes);
  for (const auto& x : continuous) {
    seq.recip.push_back(round_degree(x[0]));
    seq.indeg.push_back(round_degree(x[1]));
    seq.outdeg.push_back(round_degree(x[2]));
  }
  return seq;
}

// ---------------------------------------------------------------------------
// Graph-level fit

/// Spearman correlations of the per-node (reciprocal, in, out) sequences.
/// An entry is empty when one of its two sequences is constant.
struct OptionalCorrelations {
  std::optional<double> recip_in;
  std::optional<double> recip_out;
  std::optional<double> in_out;
};

inline OptionalCorrelations degree_sequence_correlations(const DegreeSequences& seq) {
  auto rho = [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) -> std::optional<double> {
    if (a.size() < 2) return std::nullopt;
    const bool a_const = std::adjacent_find(a.begin(), a.end(), std::not_equal_to<>()) == a.end();
    const bool b_const = std::adjacent_find(b.begin(), b.end(), std::not_equal_to<>()) == b.end();
    if (a_const || b_const) return std::nullopt;
    return spearman_rho(a, b);
  };
  return {rho(seq.recip, seq.indeg), rho(seq.recip, seq.outdeg), rho(seq.indeg, seq.outdeg)};
}

inline DegreeSequences observed_degrees(const DirectedGraph& g) {
  DegreeSequences seq;
  const std::size_t n = g.node_count();
  seq.recip.resize(n);
  seq.indeg.resize(n);
  seq.outdeg.resize(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto t = g.degree_triple(v);
    seq.recip[v] = static_cast<std::uint32_t>(t.reciprocal);
    seq.indeg[v] = static_cast<std::uint32_t>(t.in_only);
    seq.outdeg[v] = static_cast<std::uint32_t>(t.out_only);
  }
  return seq;
}

inline DegreeModel fit_degree_model(const DirectedGraph& g) {
  if (g.node_count() < 2) throw std::invalid_argument("fit needs a graph with at least two nodes");
  const auto seq = observed_degrees(g);
  DegreeModel model;
  model.nodes = g.node_count();
  model.recip = fit_scaled_chi_square(seq.recip);
  model.indeg = fit_scaled_chi_square(seq.indeg);
  model.outdeg = fit_scaled_chi_square(seq.outdeg);
  const auto corr = degree_sequence_correlations(seq);
  // Non-constant sequences are guaranteed by the successful fits above.
  model.corr = {*corr.recip_in, *corr.recip_out, *corr.in_out};
  return model;
}

}  // namespace sngen
