#pragma once

// Seeded Monte Carlo sampling of complex and real Wishart matrices,
// construction of the partial transposes, empirical mixed-moment
// estimation, and the d1 = 2 block-operator experiment. The simulator is
// the independent numerical witness for the exact formulas.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "ptwishart/moment_engine.hpp"
#include "ptwishart/rng.hpp"

namespace ptw {

enum class Field { complex_field, real_field };

struct WishartSample {
  Dims dims;
  Field field = Field::complex_field;
  Eigen::MatrixXcd W;  // (d1 d2) x (d1 d2), Hermitian PSD; real entries when field is real
};

namespace detail {

// G is (d1 d2) x p. Complex entries are (x + iy)/sqrt(2) with x, y
// independent standard normals, so E|g|^2 = 1; real entries are standard
// normals of variance 1.
inline Eigen::MatrixXcd sample_gaussian_block(const Dims& dims, Field field, GaussStream& rng) {
  const long rows = dims.d1 * dims.d2;
  Eigen::MatrixXcd g(rows, dims.p);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < dims.p; ++c) {
      if (field == Field::complex_field)
        g(r, c) = std::complex<double>(rng.next_normal() * inv_sqrt2, rng.next_normal() * inv_sqrt2);
      else
        g(r, c) = std::complex<double>(rng.next_normal(), 0.0);
    }
  return g;
}

inline Eigen::MatrixXcd wishart_from_key(const Dims& dims, Field field, uint64_t key) {
  GaussStream rng(key);
  Eigen::MatrixXcd g = sample_gaussian_block(dims, field, rng);
  return (g * g.adjoint()) / static_cast<double>(dims.d1 * dims.d2);
}

// Numerically stable pairwise summation; the fixed recursion tree makes
// the reduction independent of thread count.
inline double pairwise_sum(const std::vector<double>& values, size_t begin, size_t end) {
  const size_t len = end - begin;
  if (len == 0) return 0.0;
  if (len <= 8) {
    double s = 0;
    for (size_t i = begin; i < end; ++i) s += values[i];
    return s;
  }
  size_t mid = begin + len / 2;
  return pairwise_sum(values, begin, mid) + pairwise_sum(values, mid, end);
}

inline double pairwise_mean(const std::vector<double>& values) {
  return pairwise_sum(values, 0, values.size()) / static_cast<double>(values.size());
}

struct MeanStderr {
  double mean = 0, stderr_ = 0;
};

inline MeanStderr mean_and_stderr(const std::vector<double>& values) {
  const size_t n = values.size();
  if (n < 2) throw std::invalid_argument("mean_and_stderr: need at least 2 samples");
  MeanStderr r;
  r.mean = pairwise_mean(values);
  std::vector<double> sq(n);
  for (size_t i = 0; i < n; ++i) {
    double d = values[i] - r.mean;
    sq[i] = d * d;
  }
  double var = pairwise_sum(sq, 0, n) / static_cast<double>(n - 1);
  r.stderr_ = std::sqrt(var / static_cast<double>(n));
  return r;
}

// Runs fn(i) for i in [0, count) on the configured number of threads.
// Contiguous index blocks per thread; results must be written into
// per-index slots so the outcome is thread-count independent.
template <typename Fn>
void parallel_for_samples(long count, Fn&& fn) {
  int n_threads = thread_count_from_env();
  if (n_threads <= 1 || count < 2 * n_threads) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    long begin = count * t / n_threads;
    long end = count * (t + 1) / n_threads;
    threads.emplace_back([&fn, begin, end]() {
      for (long i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

}  // namespace detail

// Deterministic function of (dims, field, seed).
inline WishartSample sample_wishart(const Dims& dims, Field field, uint64_t seed) {
  WishartSample s;
  s.dims = dims;
  s.field = field;
  s.W = detail::wishart_from_key(dims, field, mix_key(seed, 0));
  return s;
}

// Index action of the four labels on composite indices (i, a), i in [d1],
// a in [d2]:
//   plain    W[(i,a),(j,b)]
//   left_pt  W[(j,a),(i,b)]   (block transpose)
//   right_pt W[(i,b),(j,a)]   (within-block transpose)
//   full_t   W[(j,b),(i,a)]
inline Eigen::MatrixXcd apply_label(const Eigen::MatrixXcd& w, const Dims& dims, Label label) {
  const long d1 = dims.d1, d2 = dims.d2, n = d1 * d2;
  if (w.rows() != n || w.cols() != n) throw std::invalid_argument("apply_label: matrix size mismatch");
  if (label == Label::plain) return w;
  Eigen::MatrixXcd out(n, n);
  for (long i = 0; i < d1; ++i)
    for (long a = 0; a < d2; ++a)
      for (long j = 0; j < d1; ++j)
        for (long b = 0; b < d2; ++b) {
          long row = i * d2 + a, col = j * d2 + b;
          switch (label) {
            case Label::left_pt: out(row, col) = w(j * d2 + a, i * d2 + b); break;
            case Label::right_pt: out(row, col) = w(i * d2 + b, j * d2 + a); break;
            case Label::full_t: out(row, col) = w(col, row); break;
            default: break;
          }
        }
  return out;
}

inline Eigen::MatrixXcd apply_label(const WishartSample& sample, Label label) {
  return apply_label(sample.W, sample.dims, label);
}

struct MCEstimate {
  double mean = 0;
  double stderr_ = 0;
  long samples = 0;
  uint64_t seed = 0;
  Word word;
  Dims dims;
};

// Mean of tr (x) tr (normalized trace) of the labeled product over
// independent samples. Per-sample streams are keyed by (seed, sample
// index), so the estimate does not depend on evaluation order or thread
// count.
inline MCEstimate estimate_word_moment(const Word& word, const Dims& dims, Field field,
                                       long samples, uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("estimate_word_moment: need at least 2 samples");
  if (field == Field::real_field && !word.real_alphabet())
    throw std::invalid_argument("estimate_word_moment: real case admits only labels w and r");
  const long n = dims.d1 * dims.d2;
  std::vector<double> values(static_cast<size_t>(samples));
  detail::parallel_for_samples(samples, [&](long i) {
    Eigen::MatrixXcd w = detail::wishart_from_key(dims, field, mix_key(seed, static_cast<uint64_t>(i)));
    Eigen::MatrixXcd prod = apply_label(w, dims, word.letters.front());
    for (size_t k = 1; k < word.letters.size(); ++k)
      prod = (prod * apply_label(w, dims, word.letters[k])).eval();
    values[static_cast<size_t>(i)] = prod.trace().real() / static_cast<double>(n);
  });
  auto ms = detail::mean_and_stderr(values);
  MCEstimate est;
  est.mean = ms.mean;
  est.stderr_ = ms.stderr_;
  est.samples = samples;
  est.seed = seed;
  est.word = word;
  est.dims = dims;
  return est;
}

struct BlockStat {
  double mean = 0, stderr_ = 0;
};

// phi-estimates from the d1 = 2 block structure at finite d2. The blocks
// are scaled as w_ij = 2 W(i,j), so X1 = diag(w11, w22), X2 = off-diagonal
// blocks of 2 W^(left pt), X2^(left pt) = off-diagonal blocks of 2 W.
struct BlockExperimentResult {
  Rational c;
  long d2 = 0, p = 0, samples = 0;
  uint64_t seed = 0;
  std::vector<BlockStat> phi_x1_powers;  // phi(X1^n), n = 1..4
  std::vector<BlockStat> phi_x2_powers;  // phi(X2^n), n = 1..4
  BlockStat phi_x1_x2_x2_x1;             // phi(X1 X2 X2 X1)
  BlockStat phi_x1_x2pt_x2pt_x1;         // phi(X1 X2^(left pt) X2^(left pt) X1)
};

inline BlockExperimentResult block_experiment(const Rational& c, long d2, long samples, uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("block_experiment: need at least 2 samples");
  const long p = std::lround(to_double(2 * c * d2));
  if (p < 1) throw std::invalid_argument("block_experiment: p rounds to 0");

  // Per sample, with P = w11, Q = w22 Hermitian and R = w12 (w21 = R*):
  //   phi(X1^n)                = (tr P^n + tr Q^n) / (2 d2)
  //   phi(X2^2)                = (tr R*R + tr RR*) / (2 d2)
  //   phi(X2^4)                = (tr (R*R)^2 + tr (RR*)^2) / (2 d2)
  //   phi(X1 X2 X2 X1)         = (tr P^2 R*R + tr Q^2 RR*) / (2 d2)
  //   phi(X1 X2pt X2pt X1)     = (tr P^2 RR* + tr Q^2 R*R) / (2 d2)
  // odd phi(X2^n) vanish identically (off-diagonal block structure).
  constexpr int kStats = 10;
  std::vector<std::array<double, kStats>> per_sample(static_cast<size_t>(samples));

  detail::parallel_for_samples(samples, [&](long i) {
    GaussStream rng(mix_key(seed, static_cast<uint64_t>(i)));
    Dims gdims(1, d2, p);  // shape helper for one d2 x p block
    Eigen::MatrixXcd g1 = detail::sample_gaussian_block(gdims, Field::complex_field, rng);
    Eigen::MatrixXcd g2 = detail::sample_gaussian_block(gdims, Field::complex_field, rng);
    const double scale = 1.0 / static_cast<double>(d2);
    Eigen::MatrixXcd P = (g1 * g1.adjoint()) * scale;  // w11
    Eigen::MatrixXcd Q = (g2 * g2.adjoint()) * scale;  // w22
    Eigen::MatrixXcd R = (g1 * g2.adjoint()) * scale;  // w12

    Eigen::MatrixXcd P2 = P * P;
    Eigen::MatrixXcd Q2 = Q * Q;
    Eigen::MatrixXcd RP = R * P;
    Eigen::MatrixXcd PR = P * R;
    Eigen::MatrixXcd RQ = R * Q;
    Eigen::MatrixXcd QR = Q * R;

    const double norm = 1.0 / (2.0 * static_cast<double>(d2));
    auto& out = per_sample[static_cast<size_t>(i)];
    out[0] = (P.trace().real() + Q.trace().real()) * norm;                    // phi(X1)
    out[1] = (P2.trace().real() + Q2.trace().real()) * norm;                  // phi(X1^2)
    out[2] = (P2.transpose().cwiseProduct(P).sum().real() +
              Q2.transpose().cwiseProduct(Q).sum().real()) * norm;            // phi(X1^3) = tr(P^2 P) + tr(Q^2 Q)
    out[3] = (P2.squaredNorm() + Q2.squaredNorm()) * norm;                    // phi(X1^4) = (||P^2||_F^2 + ...)
    out[4] = 0.0;                                                             // phi(X2)
    out[5] = 2.0 * R.squaredNorm() * norm;                                    // phi(X2^2): tr R*R = tr RR*
    out[6] = 0.0;                                                             // phi(X2^3)
    out[7] = 2.0 * (R.adjoint() * R).squaredNorm() * norm;                    // phi(X2^4)
    // tr(P^2 R*R) = ||RP||_F^2, tr(Q^2 RR*) = ||QR||_F^2 (Q Hermitian),
    // tr(P^2 RR*) = ||PR||_F^2, tr(Q^2 R*R) = ||RQ||_F^2.
    out[8] = (RP.squaredNorm() + QR.squaredNorm()) * norm;                    // phi(X1 X2 X2 X1)
    out[9] = (PR.squaredNorm() + RQ.squaredNorm()) * norm;                    // phi(X1 X2pt X2pt X1)
  });

  BlockExperimentResult result;
  result.c = c;
  result.d2 = d2;
  result.p = p;
  result.samples = samples;
  result.seed = seed;
  auto stat = [&](int idx) {
    std::vector<double> v(static_cast<size_t>(samples));
    for (long i = 0; i < samples; ++i) v[static_cast<size_t>(i)] = per_sample[static_cast<size_t>(i)][static_cast<size_t>(idx)];
    auto ms = detail::mean_and_stderr(v);
    return BlockStat{ms.mean, ms.stderr_};
  };
  for (int k = 0; k < 4; ++k) result.phi_x1_powers.push_back(stat(k));
  for (int k = 4; k < 8; ++k) result.phi_x2_powers.push_back(stat(k));
  result.phi_x1_x2_x2_x1 = stat(8);
  result.phi_x1_x2pt_x2pt_x1 = stat(9);
  return result;
}

}  // namespace ptw
