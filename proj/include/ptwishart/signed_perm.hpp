#pragma once

// Exact combinatorics of permutations of the signed index set
// [±n] = {1, -1, 2, -2, ..., n, -n}: composition, cycle structure, joins,
// the special permutations gamma / delta / epsilon, and the genus and
// non-crossing tests.

#include <algorithm>
#include <cassert>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ptw {

// Sign vector (epsilon_1, ..., epsilon_n) with entries in {-1, +1}.
struct EpsilonVector {
  std::vector<int> signs;

  EpsilonVector() = default;
  explicit EpsilonVector(std::vector<int> s) : signs(std::move(s)) {
    for (int v : signs)
      if (v != 1 && v != -1) throw std::invalid_argument("EpsilonVector: signs must be +/-1");
  }
  static EpsilonVector constant(int n, int value) {
    return EpsilonVector(std::vector<int>(static_cast<size_t>(n), value));
  }
  int n() const { return static_cast<int>(signs.size()); }
  int operator[](int i) const { return signs[static_cast<size_t>(i - 1)]; }  // 1-based
  bool operator==(const EpsilonVector&) const = default;
};

// A bijection of [±n]. Internally [±n] is stored densely as 0..2n-1 with
// k > 0 -> k-1 and k < 0 -> n + |k| - 1; all operations expose the signed
// view.
class SignedPerm {
 public:
  explicit SignedPerm(int n) : n_(check_n(n)), map_(static_cast<size_t>(2 * n)) {
    std::iota(map_.begin(), map_.end(), 0);
  }

  static int encode(int k, int n) {
    if (k == 0 || k > n || k < -n) throw std::out_of_range("SignedPerm: index outside [+-n]");
    return k > 0 ? k - 1 : n - k - 1;
  }
  static int decode(int i, int n) { return i < n ? i + 1 : -(i - n + 1); }

  int n() const { return n_; }
  int ground_size() const { return 2 * n_; }

  // Signed application: k in [±n] -> image in [±n].
  int operator()(int k) const { return decode(map_[static_cast<size_t>(encode(k, n_))], n_); }

  int apply_encoded(int i) const { return map_[static_cast<size_t>(i)]; }

  static SignedPerm identity(int n) { return SignedPerm(n); }

  // delta: k -> -k.
  static SignedPerm delta(int n) {
    SignedPerm d(n);
    for (int k = 1; k <= n; ++k) {
      d.set(k, -k);
      d.set(-k, k);
    }
    return d;
  }

  // gamma = (1, 2, ..., n) embedded in [±n] (identity on negatives).
  static SignedPerm gamma(int n) {
    SignedPerm g(n);
    for (int k = 1; k <= n; ++k) g.set(k, k % n + 1);
    return g;
  }

  // Extends a permutation of [n] (given by 1-based images) to [±n] by
  // fixing every negative index.
  static SignedPerm embed(const std::vector<int>& images) {
    int n = static_cast<int>(images.size());
    SignedPerm p(n);
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (int k = 1; k <= n; ++k) {
      int v = images[static_cast<size_t>(k - 1)];
      if (v < 1 || v > n || seen[static_cast<size_t>(v - 1)])
        throw std::invalid_argument("embed: not a bijection of [n]");
      seen[static_cast<size_t>(v - 1)] = true;
      p.set(k, v);
    }
    return p;
  }

  // The sign-flip permutation k -> epsilon_{|k|} * k.
  static SignedPerm from_epsilon(const EpsilonVector& eps) {
    int n = eps.n();
    SignedPerm p(n);
    for (int k = 1; k <= n; ++k) {
      p.set(k, eps[k] * k);
      p.set(-k, -eps[k] * k);
    }
    return p;
  }

  static SignedPerm from_signed_images(int n, const std::vector<std::pair<int, int>>& images) {
    SignedPerm p(n);
    for (auto [k, v] : images) p.set(k, v);
    p.validate();
    return p;
  }

  SignedPerm inverse() const {
    SignedPerm r(n_);
    for (int i = 0; i < 2 * n_; ++i) r.map_[static_cast<size_t>(map_[static_cast<size_t>(i)])] = i;
    return r;
  }

  int cycle_count() const {
    int count = 0;
    std::vector<bool> seen(map_.size(), false);
    for (size_t start = 0; start < map_.size(); ++start) {
      if (seen[start]) continue;
      ++count;
      for (size_t i = start; !seen[i]; i = static_cast<size_t>(map_[i])) seen[i] = true;
    }
    return count;
  }

  // Cycles in signed notation; each cycle starts at its smallest encoded
  // element, cycles ordered by that element. Fixed points included.
  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> result;
    std::vector<bool> seen(map_.size(), false);
    for (size_t start = 0; start < map_.size(); ++start) {
      if (seen[start]) continue;
      std::vector<int> cyc;
      for (size_t i = start; !seen[i]; i = static_cast<size_t>(map_[i]))
        seen[i] = true, cyc.push_back(decode(static_cast<int>(i), n_));
      result.push_back(std::move(cyc));
    }
    return result;
  }

  // True when every negative index is fixed, i.e. this is embed() of a
  // permutation of [n].
  bool fixes_negatives() const {
    for (int i = n_; i < 2 * n_; ++i)
      if (map_[static_cast<size_t>(i)] != i) return false;
    return true;
  }

  bool is_involution() const {
    for (int i = 0; i < 2 * n_; ++i)
      if (map_[static_cast<size_t>(map_[static_cast<size_t>(i)])] != i) return false;
    return true;
  }

  bool has_fixed_point() const {
    for (int i = 0; i < 2 * n_; ++i)
      if (map_[static_cast<size_t>(i)] == i) return true;
    return false;
  }

  // 1-based images of the restriction to [n]; requires fixes_negatives().
  std::vector<int> positive_images() const {
    if (!fixes_negatives()) throw std::logic_error("positive_images: not an embedded permutation");
    std::vector<int> images(static_cast<size_t>(n_));
    for (int k = 1; k <= n_; ++k) images[static_cast<size_t>(k - 1)] = (*this)(k);
    return images;
  }

  bool operator==(const SignedPerm&) const = default;

  std::string to_cycle_string() const {
    std::ostringstream os;
    bool any = false;
    for (const auto& cyc : cycles()) {
      if (cyc.size() == 1) continue;
      any = true;
      os << '(';
      for (size_t i = 0; i < cyc.size(); ++i) os << (i ? " " : "") << cyc[i];
      os << ')';
    }
    if (!any) return "()";
    return os.str();
  }

  // Parses the cycle-notation text form, e.g. "(1 -2)(2 -1)". Elements not
  // mentioned are fixed. Commas and extra whitespace are accepted.
  static SignedPerm parse_cycles(std::string_view text, int n) {
    SignedPerm p(n);
    std::vector<bool> used(static_cast<size_t>(2 * n), false);
    size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < text.size() && (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ',')) ++pos;
    };
    skip_ws();
    while (pos < text.size()) {
      if (text[pos] != '(') throw std::invalid_argument("parse_cycles: expected '('");
      ++pos;
      std::vector<int> cyc;
      skip_ws();
      while (pos < text.size() && text[pos] != ')') {
        size_t end = pos;
        if (text[end] == '-' || text[end] == '+') ++end;
        size_t digits_begin = end;
        while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
        if (end == digits_begin) throw std::invalid_argument("parse_cycles: expected integer");
        int k = std::atoi(std::string(text.substr(pos, end - pos)).c_str());
        int enc = encode(k, n);
        if (used[static_cast<size_t>(enc)]) throw std::invalid_argument("parse_cycles: repeated element");
        used[static_cast<size_t>(enc)] = true;
        cyc.push_back(k);
        pos = end;
        skip_ws();
      }
      if (pos == text.size()) throw std::invalid_argument("parse_cycles: missing ')'");
      ++pos;  // ')'
      for (size_t i = 0; i < cyc.size(); ++i) p.set(cyc[i], cyc[(i + 1) % cyc.size()]);
      skip_ws();
    }
    p.validate();
    return p;
  }

  void set(int k, int v) { map_[static_cast<size_t>(encode(k, n_))] = encode(v, n_); }

 private:
  static int check_n(int n) {
    if (n < 1) throw std::invalid_argument("SignedPerm: n must be positive");
    return n;
  }
  void validate() const {
    std::vector<bool> seen(map_.size(), false);
    for (int v : map_) {
      if (v < 0 || v >= 2 * n_ || seen[static_cast<size_t>(v)])
        throw std::invalid_argument("SignedPerm: map is not a bijection");
      seen[static_cast<size_t>(v)] = true;
    }
  }

  int n_;
  std::vector<int> map_;  // encoded image table
};

// result(k) = a(b(k)).
inline SignedPerm compose(const SignedPerm& a, const SignedPerm& b) {
  if (a.n() != b.n()) throw std::invalid_argument("compose: size mismatch");
  SignedPerm r(a.n());
  for (int k = 1; k <= a.n(); ++k) {
    r.set(k, a(b(k)));
    r.set(-k, a(b(-k)));
  }
  return r;
}

inline int cycle_count(const SignedPerm& a) { return a.cycle_count(); }

// Cycle count of the restriction to [n]; requires an embedded permutation.
inline int unsigned_cycle_count(const SignedPerm& a) {
  if (!a.fixes_negatives()) throw std::logic_error("unsigned_cycle_count: not embedded");
  return a.cycle_count() - a.n();
}

// A set partition of the ground set [±n].
struct Partition {
  int n_elements = 0;                   // ground-set size (2n here)
  std::vector<std::vector<int>> blocks; // signed elements, canonically ordered

  int block_count() const { return static_cast<int>(blocks.size()); }
};

namespace detail {
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(static_cast<size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int x) {
    while (parent_[static_cast<size_t>(x)] != x) {
      parent_[static_cast<size_t>(x)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(x)])];
      x = parent_[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
 private:
  std::vector<int> parent_;
};
}  // namespace detail

// The supremum of the orbit partitions of a and b in the partition lattice.
inline Partition join(const SignedPerm& a, const SignedPerm& b) {
  if (a.n() != b.n()) throw std::invalid_argument("join: size mismatch");
  const int m = a.ground_size();
  detail::UnionFind uf(m);
  for (int i = 0; i < m; ++i) {
    uf.unite(i, a.apply_encoded(i));
    uf.unite(i, b.apply_encoded(i));
  }
  std::vector<std::vector<int>> by_root(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) by_root[static_cast<size_t>(uf.find(i))].push_back(SignedPerm::decode(i, a.n()));
  Partition p;
  p.n_elements = m;
  for (auto& blk : by_root)
    if (!blk.empty()) p.blocks.push_back(std::move(blk));
  return p;
}

inline int join_block_count(const SignedPerm& a, const SignedPerm& b) {
  if (a.n() != b.n()) throw std::invalid_argument("join: size mismatch");
  const int m = a.ground_size();
  detail::UnionFind uf(m);
  for (int i = 0; i < m; ++i) {
    uf.unite(i, a.apply_encoded(i));
    uf.unite(i, b.apply_encoded(i));
  }
  int count = 0;
  for (int i = 0; i < m; ++i)
    if (uf.find(i) == i) ++count;
  return count;
}

struct NonTransitiveError : std::runtime_error {
  NonTransitiveError() : std::runtime_error("genus: <pi, sigma> does not act transitively") {}
};

// Euler-formula genus of a transitive pair:
//   #(pi) + #(pi^-1 sigma) + #(sigma) = m + 2(1 - g).
inline int genus(const SignedPerm& pi, const SignedPerm& sigma) {
  if (pi.n() != sigma.n()) throw std::invalid_argument("genus: size mismatch");
  if (join_block_count(pi, sigma) != 1) throw NonTransitiveError();
  const int m = pi.ground_size();
  int total = pi.cycle_count() + compose(pi.inverse(), sigma).cycle_count() + sigma.cycle_count();
  int twice_g = m + 2 - total;
  assert(twice_g >= 0 && twice_g % 2 == 0);
  return twice_g / 2;
}

// sigma (embedded permutation of [n]) is non-crossing iff
// #(sigma) + #(sigma^-1 gamma) = n + 1.
inline bool is_noncrossing(const SignedPerm& sigma) {
  const int n = sigma.n();
  SignedPerm g = SignedPerm::gamma(n);
  return unsigned_cycle_count(sigma) + unsigned_cycle_count(compose(sigma.inverse(), g)) == n + 1;
}

// epsilon is constant on the cycles of sigma. Both characterizations (direct
// cycle scan, and eps delta sigma delta sigma^-1 eps mapping [n] into [n])
// are computed and must agree.
inline bool is_constant_on_cycles(const EpsilonVector& eps, const SignedPerm& sigma) {
  if (eps.n() != sigma.n()) throw std::invalid_argument("is_constant_on_cycles: size mismatch");
  const int n = sigma.n();
  bool direct = true;
  for (int k = 1; k <= n && direct; ++k)
    if (eps[k] != eps[sigma(k)]) direct = false;

  SignedPerm e = SignedPerm::from_epsilon(eps);
  SignedPerm d = SignedPerm::delta(n);
  SignedPerm comp = compose(e, compose(d, compose(sigma, compose(d, compose(sigma.inverse(), e)))));
  bool via_perm = true;
  for (int k = 1; k <= n && via_perm; ++k)
    if (comp(k) < 0) via_perm = false;

  assert(direct == via_perm);
  return direct && via_perm;
}

// Keeps the cycles of sigma on which epsilon = 1 and inverts those on which
// epsilon = -1; requires epsilon constant on cycles.
inline SignedPerm sigma_epsilon(const SignedPerm& sigma, const EpsilonVector& eps) {
  if (!is_constant_on_cycles(eps, sigma))
    throw std::invalid_argument("sigma_epsilon: epsilon not constant on cycles of sigma");
  const int n = sigma.n();
  SignedPerm inv = sigma.inverse();
  SignedPerm r(n);
  for (int k = 1; k <= n; ++k) r.set(k, eps[k] == 1 ? sigma(k) : inv(k));
  return r;
}

// Identity check: for sigma non-crossing and tau a single n-cycle,
// #(sigma tau) = 1 + e(sigma) with e the number of even-length cycles.
inline bool bn_cycle_identity_check(const SignedPerm& sigma, const SignedPerm& tau) {
  if (!is_noncrossing(sigma)) throw std::invalid_argument("bn_cycle_identity_check: sigma not non-crossing");
  if (!tau.fixes_negatives() || unsigned_cycle_count(tau) != 1)
    throw std::invalid_argument("bn_cycle_identity_check: tau is not a single n-cycle");
  int even = 0;
  for (const auto& cyc : sigma.cycles())
    if (cyc.front() > 0 && cyc.size() % 2 == 0) ++even;
  return unsigned_cycle_count(compose(sigma, tau)) == 1 + even;
}

// Calls fn on every permutation of [n] as an embedded SignedPerm, in
// lexicographic order of image tables.
template <typename Fn>
void for_each_permutation(int n, Fn&& fn) {
  std::vector<int> images(static_cast<size_t>(n));
  std::iota(images.begin(), images.end(), 1);
  do {
    fn(SignedPerm::embed(images));
  } while (std::next_permutation(images.begin(), images.end()));
}

}  // namespace ptw
