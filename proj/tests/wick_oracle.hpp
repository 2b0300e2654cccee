#pragma once

// Brute-force Wick evaluators for E(tr (x) tr(...)) of words in partially
// transposed Wishart matrices, at tiny dimensions. Everything here expands
// the expectation entry by entry over all index tuples and all pairings of
// Gaussian factors. Deliberately independent of the formula engine; test
// use only.

#include <ptwishart/moment_engine.hpp>
#include <ptwishart/rational.hpp>
#include <ptwishart/signed_perm.hpp>

#include <algorithm>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace ptw::testing {

namespace detail {

// For letter k of the word, the (row, column) indices of the underlying W
// factor as functions of the trace chain (i_k, a_k), (i_{k+1}, a_{k+1}).
// epsilon = -1 transposes the d1 component, eta = -1 the d2 component.
struct FactorIndices {
  int row;  // encoded i * d2 + a
  int col;
};

inline FactorIndices factor_indices(int eps, int eta, int i_k, int a_k, int i_next, int a_next,
                                    long d2) {
  int ri = eps == 1 ? i_k : i_next;
  int ci = eps == 1 ? i_next : i_k;
  int ra = eta == 1 ? a_k : a_next;
  int ca = eta == 1 ? a_next : a_k;
  return {static_cast<int>(ri * d2 + ra), static_cast<int>(ci * d2 + ca)};
}

template <typename Fn>
void for_each_chain(int n, long d1, long d2, Fn&& fn) {
  std::vector<int> is(static_cast<size_t>(n), 0), as(static_cast<size_t>(n), 0);
  for (;;) {
    fn(is, as);
    int pos = n - 1;
    for (;;) {
      if (pos < 0) return;
      auto& a = as[static_cast<size_t>(pos)];
      if (++a < d2) break;
      a = 0;
      auto& i = is[static_cast<size_t>(pos)];
      if (++i < d1) break;
      i = 0;
      --pos;
    }
  }
}

}  // namespace detail

// Complex case. W = G G* / (d1 d2) with iid standard complex Gaussian
// entries, so W[r, c] = (1/(d1 d2)) sum_t G[r, t] conj(G[c, t]) and the
// only nonzero Wick contractions match a G against a conj(G):
// E(G[r,t] conj(G[c,t'])) = [r == c][t == t']. Summing the t indices for a
// fixed matching m in S_n gives p^{#cycles(m)}.
inline Rational wick_moment_complex(const Word& word, const Dims& dims) {
  const int n = word.size();
  const auto eps = word.epsilons();
  const auto eta = word.etas();
  boost::multiprecision::cpp_int total = 0;

  detail::for_each_chain(n, dims.d1, dims.d2, [&](const std::vector<int>& is, const std::vector<int>& as) {
    std::vector<detail::FactorIndices> f(static_cast<size_t>(n));
    for (int k = 0; k < n; ++k) {
      int nk = (k + 1) % n;
      f[static_cast<size_t>(k)] =
          detail::factor_indices(eps[k + 1], eta[k + 1], is[static_cast<size_t>(k)], as[static_cast<size_t>(k)],
                                 is[static_cast<size_t>(nk)], as[static_cast<size_t>(nk)], dims.d2);
    }
    std::vector<int> m(static_cast<size_t>(n));
    std::iota(m.begin(), m.end(), 0);
    do {
      bool ok = true;
      for (int k = 0; k < n && ok; ++k)
        ok = f[static_cast<size_t>(k)].row == f[static_cast<size_t>(m[static_cast<size_t>(k)])].col;
      if (!ok) continue;
      // p^{number of cycles of m}
      int cycles = 0;
      std::vector<bool> seen(static_cast<size_t>(n), false);
      for (int k = 0; k < n; ++k) {
        if (seen[static_cast<size_t>(k)]) continue;
        ++cycles;
        for (int j = k; !seen[static_cast<size_t>(j)]; j = m[static_cast<size_t>(j)]) seen[static_cast<size_t>(j)] = true;
      }
      boost::multiprecision::cpp_int pw = 1;
      for (int k = 0; k < cycles; ++k) pw *= dims.p;
      total += pw;
    } while (std::next_permutation(m.begin(), m.end()));
  });

  boost::multiprecision::cpp_int denom = 1;
  for (int k = 0; k <= n; ++k) denom *= dims.d1 * dims.d2;
  return Rational(total, denom);
}

// Real case. W = G G^T / (d1 d2) with iid standard real Gaussian entries;
// each of the 2n factors G[row, t] pairs with any other, contributing
// [rows equal][t indices equal]. Factor 2k is G[row_k, t_k], factor 2k+1
// is G[col_k, t_k]; a pairing identifies t variables across positions, and
// the free t count is the number of components of that identification.
inline Rational wick_moment_real(const EpsilonVector& eps, const Dims& dims) {
  const int n = eps.n();
  boost::multiprecision::cpp_int total = 0;

  std::vector<std::vector<std::pair<int, int>>> pairings;  // pairs of factor ids in [0, 2n)
  {
    std::vector<int> partner(static_cast<size_t>(2 * n), -1);
    std::vector<std::pair<int, int>> current;
    std::function<void()> rec = [&]() {
      int first = -1;
      for (int i = 0; i < 2 * n; ++i)
        if (partner[static_cast<size_t>(i)] < 0) { first = i; break; }
      if (first < 0) {
        pairings.push_back(current);
        return;
      }
      for (int j = first + 1; j < 2 * n; ++j) {
        if (partner[static_cast<size_t>(j)] >= 0) continue;
        partner[static_cast<size_t>(first)] = j;
        partner[static_cast<size_t>(j)] = first;
        current.emplace_back(first, j);
        rec();
        current.pop_back();
        partner[static_cast<size_t>(first)] = -1;
        partner[static_cast<size_t>(j)] = -1;
      }
    };
    rec();
  }

  detail::for_each_chain(n, dims.d1, dims.d2, [&](const std::vector<int>& is, const std::vector<int>& as) {
    std::vector<int> row(static_cast<size_t>(2 * n));
    for (int k = 0; k < n; ++k) {
      int nk = (k + 1) % n;
      // epsilon = -1 is the right partial transpose (d2 component only)
      auto fi = detail::factor_indices(1, eps[k + 1], is[static_cast<size_t>(k)],
                                       as[static_cast<size_t>(k)], is[static_cast<size_t>(nk)],
                                       as[static_cast<size_t>(nk)], dims.d2);
      row[static_cast<size_t>(2 * k)] = fi.row;
      row[static_cast<size_t>(2 * k + 1)] = fi.col;
    }
    for (const auto& pairing : pairings) {
      bool ok = true;
      std::vector<int> parent(static_cast<size_t>(n));
      std::iota(parent.begin(), parent.end(), 0);
      std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
        return x;
      };
      for (const auto& [u, v] : pairing) {
        if (row[static_cast<size_t>(u)] != row[static_cast<size_t>(v)]) { ok = false; break; }
        parent[static_cast<size_t>(find(u / 2))] = find(v / 2);
      }
      if (!ok) continue;
      int components = 0;
      for (int k = 0; k < n; ++k)
        if (find(k) == k) ++components;
      boost::multiprecision::cpp_int pw = 1;
      for (int k = 0; k < components; ++k) pw *= dims.p;
      total += pw;
    }
  });

  boost::multiprecision::cpp_int denom = 1;
  for (int k = 0; k <= n; ++k) denom *= dims.d1 * dims.d2;
  return Rational(total, denom);
}

}  // namespace ptw::testing
