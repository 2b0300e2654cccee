#pragma once

// Bit-exact evaluation of mixed moments of partially transposed Wishart
// matrices: the finite-dimensional sum over the symmetric group (complex
// case), the pairing sum (real case), and their limits in the three
// asymptotic regimes. All formula-side arithmetic is exact rational.

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ptwishart/nc_comb.hpp"
#include "ptwishart/rational.hpp"
#include "ptwishart/signed_perm.hpp"

namespace ptw {

// Transpose labels. Each label decodes to a pair (epsilon, eta):
//   plain    = W            -> ( 1,  1)
//   left_pt  = left partial -> (-1,  1)
//   right_pt = right partial-> ( 1, -1)
//   full_t   = W^T          -> (-1, -1)
enum class Label { plain, left_pt, right_pt, full_t };

inline int label_epsilon(Label l) { return (l == Label::plain || l == Label::right_pt) ? 1 : -1; }
inline int label_eta(Label l) { return (l == Label::plain || l == Label::left_pt) ? 1 : -1; }

inline char label_token(Label l) {
  switch (l) {
    case Label::plain: return 'w';
    case Label::left_pt: return 'l';
    case Label::right_pt: return 'r';
    case Label::full_t: return 't';
  }
  return '?';
}

struct Word {
  std::vector<Label> letters;

  Word() = default;
  explicit Word(std::vector<Label> l) : letters(std::move(l)) {
    if (letters.empty()) throw std::invalid_argument("Word: must be nonempty");
  }

  int size() const { return static_cast<int>(letters.size()); }

  EpsilonVector epsilons() const {
    std::vector<int> s;
    s.reserve(letters.size());
    for (Label l : letters) s.push_back(label_epsilon(l));
    return EpsilonVector(std::move(s));
  }
  EpsilonVector etas() const {
    std::vector<int> s;
    s.reserve(letters.size());
    for (Label l : letters) s.push_back(label_eta(l));
    return EpsilonVector(std::move(s));
  }

  // Real case: W = W^T and the two partial transposes coincide, so only
  // {plain, right_pt} are admitted.
  bool real_alphabet() const {
    for (Label l : letters)
      if (l != Label::plain && l != Label::right_pt) return false;
    return true;
  }

  std::string str() const {
    std::string s;
    for (size_t i = 0; i < letters.size(); ++i) {
      if (i) s += ',';
      s += label_token(letters[i]);
    }
    return s;
  }

  // Comma-separated tokens from {w, l, r, t}; case-insensitive, whitespace
  // ignored. Errors name the offending token and its position.
  static Word parse(std::string_view text) {
    std::vector<Label> letters;
    std::string token;
    int position = 0;
    auto flush = [&]() {
      ++position;
      if (token.empty()) throw std::invalid_argument("word: empty token at position " + std::to_string(position));
      if (token.size() > 1)
        throw std::invalid_argument("word: unknown token \"" + token + "\" at position " + std::to_string(position));
      switch (std::tolower(static_cast<unsigned char>(token[0]))) {
        case 'w': letters.push_back(Label::plain); break;
        case 'l': letters.push_back(Label::left_pt); break;
        case 'r': letters.push_back(Label::right_pt); break;
        case 't': letters.push_back(Label::full_t); break;
        default:
          throw std::invalid_argument("word: unknown token \"" + token + "\" at position " + std::to_string(position));
      }
      token.clear();
    };
    for (char ch : text) {
      if (std::isspace(static_cast<unsigned char>(ch))) continue;
      if (ch == ',') {
        flush();
        continue;
      }
      token += ch;
    }
    flush();
    return Word(std::move(letters));
  }

  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;
};

struct Dims {
  long d1 = 1, d2 = 1, p = 1;

  Dims() = default;
  Dims(long d1_, long d2_, long p_) : d1(d1_), d2(d2_), p(p_) {
    if (d1 < 1 || d2 < 1 || p < 1) throw std::invalid_argument("Dims: all dimensions must be >= 1");
  }
  Rational c_tilde() const { return Rational(p, d1 * d2); }
};

struct RegimeLimit {
  enum class Kind { both_grow, d1_fixed, d2_fixed };
  Kind kind = Kind::both_grow;
  long fixed_dim = 0;  // the fixed d1 or d2; unused for both_grow
  Rational c;          // limit of p/(d1 d2), > 0

  static RegimeLimit both_grow(Rational c) { return make(Kind::both_grow, 0, std::move(c)); }
  static RegimeLimit d1_fixed(long d1, Rational c) { return make(Kind::d1_fixed, d1, std::move(c)); }
  static RegimeLimit d2_fixed(long d2, Rational c) { return make(Kind::d2_fixed, d2, std::move(c)); }

 private:
  static RegimeLimit make(Kind k, long dim, Rational c) {
    if (c <= 0) throw std::invalid_argument("RegimeLimit: c must be positive");
    if (k != Kind::both_grow && dim < 1) throw std::invalid_argument("RegimeLimit: fixed dimension must be >= 1");
    RegimeLimit r;
    r.kind = k;
    r.fixed_dim = dim;
    r.c = std::move(c);
    return r;
  }
};

// f_eps(sigma) = #(eps gamma delta gamma^-1 eps  v  sigma delta sigma^-1)
//                + #(sigma) - (n + 1), for sigma an embedded permutation
// of [n]. Always <= 0; zero iff eps is constant on the cycles of sigma and
// sigma_eps is non-crossing.
inline int f_exponent(const SignedPerm& sigma, const EpsilonVector& eps) {
  const int n = sigma.n();
  if (eps.n() != n) throw std::invalid_argument("f_exponent: size mismatch");
  SignedPerm g = SignedPerm::gamma(n);
  SignedPerm d = SignedPerm::delta(n);
  SignedPerm e = SignedPerm::from_epsilon(eps);
  SignedPerm egdge = compose(e, compose(g, compose(d, compose(g.inverse(), e))));
  SignedPerm sds = compose(sigma, compose(d, sigma.inverse()));
  return join_block_count(egdge, sds) + unsigned_cycle_count(sigma) - (n + 1);
}

namespace detail {

inline int thread_count_from_env() {
  if (const char* env = std::getenv("PTW_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

inline long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Lexicographic unranking of a permutation of [n] (1-based images).
inline std::vector<int> unrank_permutation(int n, long rank) {
  std::vector<int> pool(static_cast<size_t>(n));
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> images;
  images.reserve(static_cast<size_t>(n));
  long f = factorial(n);
  for (int i = n; i >= 1; --i) {
    f /= i;
    long idx = rank / f;
    rank %= f;
    images.push_back(pool[static_cast<size_t>(idx)]);
    pool.erase(pool.begin() + idx);
  }
  return images;
}

// Sums term(sigma) over all of S_n. The rank space is split into fixed
// lexicographic blocks and partial sums are reduced in block order, so the
// result is bit-identical for any thread count.
template <typename TermFn>
Rational sum_over_sn(int n, TermFn&& term) {
  const long total = factorial(n);
  const long n_blocks = std::min<long>(total, 64);
  std::vector<Rational> partial(static_cast<size_t>(n_blocks), Rational(0));
  std::atomic<long> next_block{0};

  auto worker = [&]() {
    for (;;) {
      long b = next_block.fetch_add(1);
      if (b >= n_blocks) return;
      long begin = total * b / n_blocks;
      long end = total * (b + 1) / n_blocks;
      std::vector<int> images = unrank_permutation(n, begin);
      Rational acc(0);
      for (long r = begin; r < end; ++r) {
        acc += term(SignedPerm::embed(images));
        std::next_permutation(images.begin(), images.end());
      }
      partial[static_cast<size_t>(b)] = std::move(acc);
    }
  };

  int n_threads = std::min<long>(thread_count_from_env(), n_blocks);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }

  Rational sum(0);
  for (const auto& part : partial) sum += part;
  return sum;
}

}  // namespace detail

// E(tr (x) tr(W^(eps_1,eta_1) ... W^(eps_n,eta_n)))
//   = sum over sigma in S_n of (p/(d1 d2))^#(sigma) d1^f_eps(sigma)
//     d2^f_eta(sigma).
// Exact for every finite (d1, d2, p), not just asymptotically.
inline Rational exact_moment_complex(const Word& word, const Dims& dims) {
  const int n = word.size();
  if (n > kMaxEnumOrder) throw std::invalid_argument("exact_moment_complex: word too long");
  const EpsilonVector eps = word.epsilons();
  const EpsilonVector eta = word.etas();
  const Rational c_tilde = dims.c_tilde();
  return detail::sum_over_sn(n, [&](const SignedPerm& sigma) {
    return pow_int(c_tilde, unsigned_cycle_count(sigma)) *
           pow_int(Rational(dims.d1), f_exponent(sigma, eps)) *
           pow_int(Rational(dims.d2), f_exponent(sigma, eta));
  });
}

// g(pi) = #(gamma delta gamma^-1 v pi) + #(pi delta)/2 - (n + 1) for a
// pairing pi of [±n].
inline int g_exponent(const SignedPerm& pairing) {
  const int n = pairing.n();
  SignedPerm g = SignedPerm::gamma(n);
  SignedPerm d = SignedPerm::delta(n);
  SignedPerm gdg = compose(g, compose(d, g.inverse()));
  int pd = compose(pairing, d).cycle_count();
  return join_block_count(gdg, pairing) + pd / 2 - (n + 1);
}

// Real Wishart case (W = W^T, left and right partial transpose coincide):
// E(tr (x) tr(W^(eps_1) ... W^(eps_n)))
//   = sum over pairings pi of [±n] of (p/(d1 d2))^{#(pi delta)/2}
//     d1^g(pi) d2^g(eps pi eps).
inline Rational exact_moment_real(const EpsilonVector& eps, const Dims& dims) {
  const int n = eps.n();
  if (n < 1) throw std::invalid_argument("exact_moment_real: empty word");
  if (n > kMaxPairingHalfSize) throw std::invalid_argument("exact_moment_real: word too long");
  const Rational c_tilde = dims.c_tilde();
  SignedPerm d = SignedPerm::delta(n);
  SignedPerm e = SignedPerm::from_epsilon(eps);
  Rational sum(0);
  for_each_pairing(n, /*delta_only=*/false, [&](const SignedPerm& pi) {
    int k = compose(pi, d).cycle_count() / 2;
    SignedPerm epe = compose(e, compose(pi, e));
    sum += pow_int(c_tilde, k) * pow_int(Rational(dims.d1), g_exponent(pi)) *
           pow_int(Rational(dims.d2), g_exponent(epe));
  });
  return sum;
}

// Limit of the complex mixed moment, obtained by filtering the exact-sum
// terms that survive the regime (never by re-deriving combinatorics):
//   both_grow: terms with f_eps = f_eta = 0, value c^#(sigma);
//   d1_fixed : terms with f_eta = 0, value c^#(sigma) d1^f_eps;
//   d2_fixed : symmetric.
inline Rational limit_moment(const Word& word, const RegimeLimit& regime) {
  const int n = word.size();
  if (n > kMaxEnumOrder) throw std::invalid_argument("limit_moment: word too long");
  const EpsilonVector eps = word.epsilons();
  const EpsilonVector eta = word.etas();
  return detail::sum_over_sn(n, [&](const SignedPerm& sigma) -> Rational {
    int fe = f_exponent(sigma, eps);
    int fh = f_exponent(sigma, eta);
    switch (regime.kind) {
      case RegimeLimit::Kind::both_grow:
        if (fe != 0 || fh != 0) return Rational(0);
        return pow_int(regime.c, unsigned_cycle_count(sigma));
      case RegimeLimit::Kind::d1_fixed:
        if (fh != 0) return Rational(0);
        return pow_int(regime.c, unsigned_cycle_count(sigma)) * pow_int(Rational(regime.fixed_dim), fe);
      case RegimeLimit::Kind::d2_fixed:
        if (fe != 0) return Rational(0);
        return pow_int(regime.c, unsigned_cycle_count(sigma)) * pow_int(Rational(regime.fixed_dim), fh);
    }
    return Rational(0);
  });
}

// Real-case limit, filtering the pairing-sum terms.
inline Rational limit_moment_real(const EpsilonVector& eps, const RegimeLimit& regime) {
  const int n = eps.n();
  if (n < 1) throw std::invalid_argument("limit_moment_real: empty word");
  if (n > kMaxPairingHalfSize) throw std::invalid_argument("limit_moment_real: word too long");
  SignedPerm d = SignedPerm::delta(n);
  SignedPerm e = SignedPerm::from_epsilon(eps);
  Rational sum(0);
  for_each_pairing(n, /*delta_only=*/false, [&](const SignedPerm& pi) {
    int k = compose(pi, d).cycle_count() / 2;
    int gp = g_exponent(pi);
    int gepe = g_exponent(compose(e, compose(pi, e)));
    switch (regime.kind) {
      case RegimeLimit::Kind::both_grow:
        if (gp == 0 && gepe == 0) sum += pow_int(regime.c, k);
        break;
      case RegimeLimit::Kind::d1_fixed:
        if (gepe == 0) sum += pow_int(regime.c, k) * pow_int(Rational(regime.fixed_dim), gp);
        break;
      case RegimeLimit::Kind::d2_fixed:
        if (gp == 0) sum += pow_int(regime.c, k) * pow_int(Rational(regime.fixed_dim), gepe);
        break;
    }
  });
  return sum;
}

struct FreenessRow {
  Word word;
  Rational value;  // mixed free cumulant of the limit family
};

struct FreenessReport {
  std::vector<FreenessRow> rows;
  bool all_zero = true;
};

// Mixed free cumulants of the limit family over every word up to max_len
// that uses at least two distinct letters. All-zero is freeness evidence.
inline FreenessReport freeness_report(const std::vector<Label>& alphabet, int max_len,
                                      const RegimeLimit& regime, bool real_case = false) {
  if (max_len > (real_case ? kMaxPairingHalfSize : kMaxEnumOrder))
    throw std::invalid_argument("freeness_report: max_len above cap");
  if (alphabet.empty()) throw std::invalid_argument("freeness_report: empty alphabet");
  if (real_case)
    for (Label l : alphabet)
      if (l != Label::plain && l != Label::right_pt)
        throw std::invalid_argument("freeness_report: real case admits only labels w and r");

  MixedCumulantCalculator calc([&](const std::vector<int>& letter_word) {
    std::vector<Label> labels;
    labels.reserve(letter_word.size());
    for (int i : letter_word) labels.push_back(alphabet[static_cast<size_t>(i)]);
    Word w(std::move(labels));
    // real case: the partial transpose flips the eta sign (right_pt label),
    // and etas() is the sign vector the pairing formula expects
    return real_case ? limit_moment_real(w.etas(), regime) : limit_moment(w, regime);
  });

  FreenessReport report;
  const int a = static_cast<int>(alphabet.size());
  for (int len = 2; len <= max_len; ++len) {
    std::vector<int> idx(static_cast<size_t>(len), 0);
    for (;;) {
      bool mixed = false;
      for (int i : idx)
        if (i != idx[0]) { mixed = true; break; }
      if (mixed) {
        Rational value = calc.cumulant(idx);
        std::vector<Label> labels;
        for (int i : idx) labels.push_back(alphabet[static_cast<size_t>(i)]);
        if (value != 0) report.all_zero = false;
        report.rows.push_back({Word(std::move(labels)), std::move(value)});
      }
      int pos = len - 1;
      while (pos >= 0 && idx[static_cast<size_t>(pos)] == a - 1) idx[static_cast<size_t>(pos--)] = 0;
      if (pos < 0) break;
      ++idx[static_cast<size_t>(pos)];
    }
  }
  return report;
}

}  // namespace ptw
