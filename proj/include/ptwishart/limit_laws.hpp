#pragma once

// Closed-form limit distributions as free-cumulant sequences, their
// non-crossing-lattice moments, and the two spectral densities used for
// integration cross-checks.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ptwishart/nc_comb.hpp"
#include "ptwishart/rational.hpp"

namespace ptw {

struct LawSpec {
  enum class Kind {
    marchenko_pastur,    // parameter c: kappa_n = c for all n
    shifted_semicircle,  // kappa_1 = kappa_2 = c, rest 0
    bn_law,              // limit of d * W^(left pt), d fixed: kappa_n = c d^2 (n even), c d (n odd)
    even_law_2c,         // kappa_n = 2c (n even), 0 (n odd)
    mp_free_difference,  // kappa_n = c_plus + (-1)^n c_minus
  };

  Kind kind = Kind::marchenko_pastur;
  Rational c;        // main parameter (c_plus for mp_free_difference)
  Rational c_minus;  // only for mp_free_difference
  long d = 1;        // only for bn_law

  static LawSpec marchenko_pastur(Rational c) { return validated({Kind::marchenko_pastur, std::move(c), 0, 1}); }
  static LawSpec shifted_semicircle(Rational c) { return validated({Kind::shifted_semicircle, std::move(c), 0, 1}); }
  static LawSpec bn_law(long d, Rational c) { return validated({Kind::bn_law, std::move(c), 0, d}); }
  static LawSpec even_law_2c(Rational c) { return validated({Kind::even_law_2c, std::move(c), 0, 1}); }
  static LawSpec mp_free_difference(Rational c_plus, Rational c_minus) {
    return validated({Kind::mp_free_difference, std::move(c_plus), std::move(c_minus), 1});
  }

 private:
  static LawSpec validated(LawSpec s) {
    if (s.c <= 0) throw std::invalid_argument("LawSpec: parameter must be positive");
    if (s.kind == Kind::mp_free_difference && s.c_minus <= 0)
      throw std::invalid_argument("LawSpec: parameter must be positive");
    if (s.kind == Kind::bn_law && s.d < 1) throw std::invalid_argument("LawSpec: d must be >= 1");
    return s;
  }
};

inline std::vector<Rational> cumulants(const LawSpec& law, int N) {
  if (N < 1) throw std::invalid_argument("cumulants: N must be >= 1");
  std::vector<Rational> kappa;
  kappa.reserve(static_cast<size_t>(N));
  for (int n = 1; n <= N; ++n) {
    switch (law.kind) {
      case LawSpec::Kind::marchenko_pastur:
        kappa.push_back(law.c);
        break;
      case LawSpec::Kind::shifted_semicircle:
        kappa.push_back(n <= 2 ? law.c : Rational(0));
        break;
      case LawSpec::Kind::bn_law:
        kappa.push_back(n % 2 == 0 ? Rational(law.c * law.d * law.d) : Rational(law.c * law.d));
        break;
      case LawSpec::Kind::even_law_2c:
        kappa.push_back(n % 2 == 0 ? 2 * law.c : Rational(0));
        break;
      case LawSpec::Kind::mp_free_difference:
        kappa.push_back(n % 2 == 0 ? Rational(law.c + law.c_minus) : Rational(law.c - law.c_minus));
        break;
    }
  }
  return kappa;
}

// Cumulants of X1 + X2 from the d1 = 2 block decomposition of 2 W^(left pt):
// X1 is Marchenko-Pastur with parameter 2c, X2 is even with even cumulants
// 2c, and freeness of the pair makes the cumulants additive.
inline std::vector<Rational> x1_plus_x2_cumulants(const Rational& c, int N) {
  auto k1 = cumulants(LawSpec::marchenko_pastur(2 * c), N);
  auto k2 = cumulants(LawSpec::even_law_2c(c), N);
  for (int i = 0; i < N; ++i) k1[static_cast<size_t>(i)] += k2[static_cast<size_t>(i)];
  return k1;
}

inline std::vector<Rational> law_moments(const LawSpec& law, int N) {
  return moments_from_cumulants(cumulants(law, N), N);
}

struct DensitySample {
  double t = 0;
  double density = 0;
  double support_a = 0, support_b = 0;
  double atom_at_zero = 0;  // weight in [0, 1]
};

// Spectral densities. Marchenko-Pastur(c): sqrt((b - t)(t - a)) / (2 pi t)
// on [a, b] with a = (1 - sqrt(c))^2, b = (1 + sqrt(c))^2 and an atom of
// weight max(0, 1 - c) at 0. Shifted semicircle: mean c, variance c, so
// sqrt(4c - (t - c)^2) / (2 pi c) on [c - 2 sqrt(c), c + 2 sqrt(c)].
inline DensitySample density(const LawSpec& law, double t) {
  DensitySample s;
  s.t = t;
  const double c = to_double(law.c);
  switch (law.kind) {
    case LawSpec::Kind::marchenko_pastur: {
      const double rc = std::sqrt(c);
      s.support_a = (1 - rc) * (1 - rc);
      s.support_b = (1 + rc) * (1 + rc);
      s.atom_at_zero = std::max(0.0, 1.0 - c);
      if (t > s.support_a && t < s.support_b && t != 0)
        s.density = std::sqrt((s.support_b - t) * (t - s.support_a)) / (2 * M_PI * t);
      break;
    }
    case LawSpec::Kind::shifted_semicircle: {
      const double rc = std::sqrt(c);
      s.support_a = c - 2 * rc;
      s.support_b = c + 2 * rc;
      s.atom_at_zero = 0;
      if (t > s.support_a && t < s.support_b)
        s.density = std::sqrt(4 * c - (t - c) * (t - c)) / (2 * M_PI * c);
      break;
    }
    default:
      throw std::invalid_argument("density: closed form only for marchenko_pastur and shifted_semicircle");
  }
  return s;
}

enum class BlockPrediction {
  free_prediction_X1X2,  // phi(X1 X2 X2 X1) under freeness: (2c)^2 + (2c)^3
  exact_value_X1X2Gamma, // phi(X1 X2^(left pt) X2^(left pt) X1): 2c + 3(2c)^2 + (2c)^3
};

inline Rational blockwise_prediction(BlockPrediction name, const Rational& c) {
  if (c <= 0) throw std::invalid_argument("blockwise_prediction: c must be positive");
  const Rational two_c = 2 * c;
  switch (name) {
    case BlockPrediction::free_prediction_X1X2:
      return two_c * two_c + two_c * two_c * two_c;
    case BlockPrediction::exact_value_X1X2Gamma:
      return two_c + 3 * two_c * two_c + two_c * two_c * two_c;
  }
  throw std::invalid_argument("blockwise_prediction: unknown name");
}

}  // namespace ptw
