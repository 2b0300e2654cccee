#pragma once

// Enumeration of non-crossing permutations, pairings of [±n], and the
// moment <-> free-cumulant transforms over the non-crossing lattice.

#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "ptwishart/rational.hpp"
#include "ptwishart/signed_perm.hpp"

namespace ptw {

// Exhaustive enumeration is capped: S_n filtering at n = 8 (40320
// permutations), pairings at 2n = 16 (2027025). Larger orders refuse
// rather than silently truncate.
inline constexpr int kMaxEnumOrder = 8;
inline constexpr int kMaxPairingHalfSize = 8;

struct NCPermutationSet {
  int n = 0;
  std::vector<SignedPerm> members;  // embedded permutations of [n]
};

struct PairingSet {
  int n = 0;           // half-size; ground set is [±n]
  bool delta_only = false;
  std::vector<SignedPerm> members;  // fixed-point-free involutions
};

// All sigma in S_n with #(sigma) + #(sigma^-1 gamma) = n + 1, by filtering
// S_n; deterministic (lexicographic) order.
inline NCPermutationSet enumerate_nc_perms(int n) {
  if (n < 1 || n > kMaxEnumOrder) throw std::invalid_argument("enumerate_nc_perms: order above cap");
  NCPermutationSet set;
  set.n = n;
  for_each_permutation(n, [&](const SignedPerm& sigma) {
    if (is_noncrossing(sigma)) set.members.push_back(sigma);
  });
  return set;
}

// Streams every fixed-point-free involution of [±n] (optionally only those
// pairing opposite signs) without materializing the set. Deterministic
// order: the smallest unpaired encoded element is paired with each larger
// partner in increasing order.
template <typename Fn>
void for_each_pairing(int n, bool delta_only, Fn&& fn) {
  if (n < 1 || n > kMaxPairingHalfSize) throw std::invalid_argument("for_each_pairing: half-size above cap");
  const int m = 2 * n;
  std::vector<int> partner(static_cast<size_t>(m), -1);
  auto sign_of = [n](int enc) { return enc < n ? 1 : -1; };
  std::function<void()> rec = [&]() {
    int first = -1;
    for (int i = 0; i < m; ++i)
      if (partner[static_cast<size_t>(i)] < 0) { first = i; break; }
    if (first < 0) {
      SignedPerm p(n);
      for (int i = 0; i < m; ++i)
        p.set(SignedPerm::decode(i, n), SignedPerm::decode(partner[static_cast<size_t>(i)], n));
      fn(p);
      return;
    }
    for (int j = first + 1; j < m; ++j) {
      if (partner[static_cast<size_t>(j)] >= 0) continue;
      if (delta_only && sign_of(first) == sign_of(j)) continue;
      partner[static_cast<size_t>(first)] = j;
      partner[static_cast<size_t>(j)] = first;
      rec();
      partner[static_cast<size_t>(first)] = -1;
      partner[static_cast<size_t>(j)] = -1;
    }
  };
  rec();
}

inline PairingSet enumerate_pairings(int n, bool delta_only) {
  PairingSet set;
  set.n = n;
  set.delta_only = delta_only;
  for_each_pairing(n, delta_only, [&](const SignedPerm& p) { set.members.push_back(p); });
  return set;
}

// Non-crossing partitions of [n] as block lists (blocks sorted ascending,
// blocks ordered by least element), obtained from the cycle partitions of
// the non-crossing permutations.
inline const std::vector<std::vector<std::vector<int>>>& nc_partitions(int n) {
  static std::map<int, std::vector<std::vector<std::vector<int>>>> cache;
  if (auto it = cache.find(n); it != cache.end()) return it->second;
  std::vector<std::vector<std::vector<int>>> result;
  for (const auto& sigma : enumerate_nc_perms(n).members) {
    std::vector<std::vector<int>> blocks;
    for (auto cyc : sigma.cycles()) {
      if (cyc.front() < 0) continue;
      std::sort(cyc.begin(), cyc.end());
      blocks.push_back(std::move(cyc));
    }
    std::sort(blocks.begin(), blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    result.push_back(std::move(blocks));
  }
  return cache.emplace(n, std::move(result)).first->second;
}

// m_n = sum over non-crossing sigma of prod over cycles of kappa_{|cycle|}.
// Works for exact rationals and for doubles; the two modes are never mixed
// within one sequence.
template <typename T>
std::vector<T> moments_from_cumulants(const std::vector<T>& kappa, int N) {
  if (static_cast<int>(kappa.size()) < N)
    throw std::invalid_argument("moments_from_cumulants: cumulant sequence too short");
  if (N > kMaxEnumOrder) throw std::invalid_argument("moments_from_cumulants: order above cap");
  std::vector<T> m;
  m.reserve(static_cast<size_t>(N));
  for (int n = 1; n <= N; ++n) {
    T mn(0);
    for (const auto& blocks : nc_partitions(n)) {
      T term(1);
      for (const auto& blk : blocks) term *= kappa[blk.size() - 1];
      mn += term;
    }
    m.push_back(mn);
  }
  return m;
}

// Inverse of the above: kappa_n = m_n - sum over proper non-crossing
// partitions of prod kappa_{|block|}.
template <typename T>
std::vector<T> cumulants_from_moments(const std::vector<T>& m, int N) {
  if (static_cast<int>(m.size()) < N)
    throw std::invalid_argument("cumulants_from_moments: moment sequence too short");
  if (N > kMaxEnumOrder) throw std::invalid_argument("cumulants_from_moments: order above cap");
  std::vector<T> kappa;
  kappa.reserve(static_cast<size_t>(N));
  for (int n = 1; n <= N; ++n) {
    T kn = m[static_cast<size_t>(n - 1)];
    for (const auto& blocks : nc_partitions(n)) {
      if (blocks.size() == 1) continue;  // the full block 1_n
      T term(1);
      for (const auto& blk : blocks) term *= kappa[blk.size() - 1];
      kn -= term;
    }
    kappa.push_back(kn);
  }
  return kappa;
}

// Mixed free cumulants of a family whose joint moments are supplied by an
// oracle on words (letters are small integers):
//   kappa(word) = phi(word) - sum over proper non-crossing partitions of
//                 prod over blocks of kappa(word restricted to the block).
// Memoized on subwords.
class MixedCumulantCalculator {
 public:
  using Oracle = std::function<Rational(const std::vector<int>&)>;

  explicit MixedCumulantCalculator(Oracle phi) : phi_(std::move(phi)) {}

  Rational cumulant(const std::vector<int>& word) {
    if (word.empty()) throw std::invalid_argument("mixed_cumulant: empty word");
    auto it = kappa_memo_.find(word);
    if (it != kappa_memo_.end()) return it->second;
    Rational value = phi_(word);
    const int n = static_cast<int>(word.size());
    if (n > 1) {
      for (const auto& blocks : nc_partitions(n)) {
        if (blocks.size() == 1) continue;
        Rational term(1);
        for (const auto& blk : blocks) {
          std::vector<int> sub;
          sub.reserve(blk.size());
          for (int pos : blk) sub.push_back(word[static_cast<size_t>(pos - 1)]);
          term *= cumulant(sub);
        }
        value -= term;
      }
    }
    kappa_memo_.emplace(word, value);
    return value;
  }

 private:
  Oracle phi_;
  std::map<std::vector<int>, Rational> kappa_memo_;
};

inline Rational mixed_cumulant(const MixedCumulantCalculator::Oracle& phi, const std::vector<int>& word) {
  MixedCumulantCalculator calc(phi);
  return calc.cumulant(word);
}

}  // namespace ptw
