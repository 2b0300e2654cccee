// ptw: compute exact and limit mixed moments of partially transposed
// Wishart matrices, freeness reports, limit-law tables, Monte Carlo
// verifications, and the d1 = 2 block experiment.

#include <CLI11.hpp>
#include <json.hpp>

#include <ptwishart/limit_laws.hpp>
#include <ptwishart/moment_engine.hpp>
#include <ptwishart/rmt_sim.hpp>

#include <fstream>
#include <iostream>
#include <string>

using json = nlohmann::ordered_json;
using namespace ptw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSelftest = 3;

json rational_json(const Rational& r) {
  json j;
  j["num"] = boost::multiprecision::numerator(r).str();
  j["den"] = boost::multiprecision::denominator(r).str();
  j["decimal"] = to_decimal_string(r, 12);
  return j;
}

json word_json(const Word& w) {
  json j;
  j["word"] = w.str();
  j["epsilon"] = json::array();
  j["eta"] = json::array();
  for (int k = 1; k <= w.size(); ++k) {
    j["epsilon"].push_back(w.epsilons()[k]);
    j["eta"].push_back(w.etas()[k]);
  }
  return j;
}

struct OutputOptions {
  std::string format = "json";
  std::string out_path;
};

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--out", opts.out_path, "Write the document to PATH instead of stdout");
}

void write_document(const OutputOptions& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(opts.out_path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + opts.out_path);
  os << text;
}

void emit_json(const OutputOptions& opts, const json& doc) {
  if (opts.format != "json")
    throw CLI::ValidationError("--format", "csv output is only available for tabular commands");
  write_document(opts, doc.dump(2) + "\n");
}

RegimeLimit make_regime(const std::string& name, const std::string& c_text, long fixed_dim) {
  Rational c = parse_rational(c_text);
  if (name == "both") return RegimeLimit::both_grow(c);
  if (fixed_dim < 1)
    throw CLI::ValidationError("--d", "fixed-dimension regimes require --d >= 1");
  if (name == "d1-fixed") return RegimeLimit::d1_fixed(fixed_dim, c);
  return RegimeLimit::d2_fixed(fixed_dim, c);
}

std::vector<Label> parse_alphabet(const std::string& text) {
  Word w = Word::parse(text);
  std::vector<Label> letters;
  for (Label l : w.letters) {
    if (std::find(letters.begin(), letters.end(), l) == letters.end()) letters.push_back(l);
  }
  if (letters.size() < 2) throw CLI::ValidationError("--alphabet", "need at least 2 distinct letters");
  return letters;
}

json regime_json(const RegimeLimit& regime) {
  json j;
  switch (regime.kind) {
    case RegimeLimit::Kind::both_grow: j["regime"] = "both"; break;
    case RegimeLimit::Kind::d1_fixed: j["regime"] = "d1-fixed"; break;
    case RegimeLimit::Kind::d2_fixed: j["regime"] = "d2-fixed"; break;
  }
  if (regime.kind != RegimeLimit::Kind::both_grow) j["fixed_dim"] = regime.fixed_dim;
  j["c"] = rational_json(regime.c);
  return j;
}

int run_exact(const std::string& case_name, const std::string& word_text, long d1, long d2, long p,
              const OutputOptions& opts) {
  Word word = Word::parse(word_text);
  Dims dims(d1, d2, p);
  Rational value;
  if (case_name == "real") {
    if (!word.real_alphabet())
      throw CLI::ValidationError("--word", "real case admits only labels w and r");
    value = exact_moment_real(word.etas(), dims);
  } else {
    value = exact_moment_complex(word, dims);
  }
  json doc;
  doc["command"] = "exact";
  doc["case"] = case_name;
  doc.update(word_json(word));
  doc["d1"] = d1;
  doc["d2"] = d2;
  doc["p"] = p;
  doc["value"] = rational_json(value);
  emit_json(opts, doc);
  return kExitOk;
}

int run_limit(const std::string& case_name, const std::string& word_text, const RegimeLimit& regime,
              const OutputOptions& opts) {
  Word word = Word::parse(word_text);
  Rational value;
  if (case_name == "real") {
    if (!word.real_alphabet())
      throw CLI::ValidationError("--word", "real case admits only labels w and r");
    value = limit_moment_real(word.etas(), regime);
  } else {
    value = limit_moment(word, regime);
  }
  json doc;
  doc["command"] = "limit";
  doc["case"] = case_name;
  doc.update(word_json(word));
  doc.update(regime_json(regime));
  doc["value"] = rational_json(value);
  emit_json(opts, doc);
  return kExitOk;
}

int run_freeness(const std::string& case_name, const std::string& alphabet_text, int max_len,
                 const RegimeLimit& regime, const OutputOptions& opts) {
  auto alphabet = parse_alphabet(alphabet_text);
  auto report = freeness_report(alphabet, max_len, regime, case_name == "real");

  if (opts.format == "csv") {
    std::string csv = "word,value_num,value_den,value_decimal\n";
    for (const auto& row : report.rows) {
      csv += "\"" + row.word.str() + "\"," + boost::multiprecision::numerator(row.value).str() + "," +
             boost::multiprecision::denominator(row.value).str() + "," +
             to_decimal_string(row.value, 12) + "\n";
    }
    write_document(opts, csv);
    return kExitOk;
  }

  json doc;
  doc["command"] = "freeness";
  doc["case"] = case_name;
  doc["alphabet"] = alphabet_text;
  doc["max_len"] = max_len;
  doc.update(regime_json(regime));
  doc["all_zero"] = report.all_zero;
  doc["rows"] = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["word"] = row.word.str();
    r["value"] = rational_json(row.value);
    doc["rows"].push_back(r);
  }
  emit_json(opts, doc);
  return kExitOk;
}

LawSpec make_law(const std::string& name, const std::string& c_text, const std::string& c_minus_text,
                 long d) {
  Rational c = parse_rational(c_text);
  if (name == "mp") return LawSpec::marchenko_pastur(c);
  if (name == "semicircle") return LawSpec::shifted_semicircle(c);
  if (name == "bn") return LawSpec::bn_law(d, c);
  if (name == "even2c") return LawSpec::even_law_2c(c);
  if (c_minus_text.empty())
    throw CLI::ValidationError("--c-minus", "mpdiff requires --c-minus");
  return LawSpec::mp_free_difference(c, parse_rational(c_minus_text));
}

int run_laws(const LawSpec& law, const std::string& law_name, int max_n, int density_points,
             const OutputOptions& opts) {
  auto kappa = cumulants(law, max_n);
  std::vector<Rational> moments;
  if (max_n <= kMaxEnumOrder) moments = law_moments(law, max_n);

  std::vector<DensitySample> samples;
  if (density_points > 0) {
    auto probe = density(law, 0.0);
    for (int k = 0; k < density_points; ++k) {
      double t = probe.support_a +
                 (probe.support_b - probe.support_a) * (k + 0.5) / density_points;
      samples.push_back(density(law, t));
    }
  }

  if (opts.format == "csv") {
    std::string csv = "n,kappa_num,kappa_den,kappa_decimal,moment_decimal\n";
    for (int n = 1; n <= max_n; ++n) {
      const auto& k = kappa[static_cast<size_t>(n - 1)];
      csv += std::to_string(n) + "," + boost::multiprecision::numerator(k).str() + "," +
             boost::multiprecision::denominator(k).str() + "," + to_decimal_string(k, 12) + ",";
      if (n <= static_cast<int>(moments.size()))
        csv += to_decimal_string(moments[static_cast<size_t>(n - 1)], 12);
      csv += "\n";
    }
    write_document(opts, csv);
    return kExitOk;
  }

  json doc;
  doc["command"] = "laws";
  doc["law"] = law_name;
  doc["max_n"] = max_n;
  doc["cumulants"] = json::array();
  for (const auto& k : kappa) doc["cumulants"].push_back(rational_json(k));
  doc["moments"] = json::array();
  for (const auto& m : moments) doc["moments"].push_back(rational_json(m));
  if (!samples.empty()) {
    json d;
    d["support_a"] = samples.front().support_a;
    d["support_b"] = samples.front().support_b;
    d["atom_at_zero"] = samples.front().atom_at_zero;
    d["points"] = json::array();
    for (const auto& s : samples) {
      json pt;
      pt["t"] = s.t;
      pt["density"] = s.density;
      d["points"].push_back(pt);
    }
    doc["density"] = d;
  }
  emit_json(opts, doc);
  return kExitOk;
}

int run_mc(const std::string& case_name, const std::string& word_text, long d1, long d2, long p,
           long samples, uint64_t seed, const OutputOptions& opts) {
  Word word = Word::parse(word_text);
  Dims dims(d1, d2, p);
  Field field = case_name == "real" ? Field::real_field : Field::complex_field;
  auto est = estimate_word_moment(word, dims, field, samples, seed);
  Rational exact = field == Field::real_field ? exact_moment_real(word.etas(), dims)
                                              : exact_moment_complex(word, dims);
  double z = (est.mean - to_double(exact)) / est.stderr_;

  json doc;
  doc["command"] = "mc";
  doc["case"] = case_name;
  doc.update(word_json(word));
  doc["d1"] = d1;
  doc["d2"] = d2;
  doc["p"] = p;
  doc["samples"] = samples;
  doc["seed"] = seed;
  doc["mean"] = est.mean;
  doc["stderr"] = est.stderr_;
  doc["exact"] = rational_json(exact);
  doc["z"] = z;
  emit_json(opts, doc);
  return kExitOk;
}

int run_blocks(const std::string& c_text, long d2, long samples, uint64_t seed,
               const OutputOptions& opts) {
  Rational c = parse_rational(c_text);
  auto result = block_experiment(c, d2, samples, seed);
  auto mp = law_moments(LawSpec::marchenko_pastur(2 * c), 4);

  json doc;
  doc["command"] = "blocks";
  doc["c"] = rational_json(c);
  doc["d2"] = result.d2;
  doc["p"] = result.p;
  doc["samples"] = result.samples;
  doc["seed"] = result.seed;
  auto stat_json = [](const BlockStat& s) {
    json j;
    j["mean"] = s.mean;
    j["stderr"] = s.stderr_;
    return j;
  };
  doc["phi_x1_powers"] = json::array();
  for (int n = 1; n <= 4; ++n) {
    json row = stat_json(result.phi_x1_powers[static_cast<size_t>(n - 1)]);
    row["n"] = n;
    row["mp_moment"] = rational_json(mp[static_cast<size_t>(n - 1)]);
    doc["phi_x1_powers"].push_back(row);
  }
  doc["phi_x2_powers"] = json::array();
  for (int n = 1; n <= 4; ++n) {
    json row = stat_json(result.phi_x2_powers[static_cast<size_t>(n - 1)]);
    row["n"] = n;
    doc["phi_x2_powers"].push_back(row);
  }
  json free_row = stat_json(result.phi_x1_x2_x2_x1);
  free_row["prediction"] = rational_json(blockwise_prediction(BlockPrediction::free_prediction_X1X2, c));
  doc["phi_x1_x2_x2_x1"] = free_row;
  json gamma_row = stat_json(result.phi_x1_x2pt_x2pt_x1);
  gamma_row["prediction"] =
      rational_json(blockwise_prediction(BlockPrediction::exact_value_X1X2Gamma, c));
  doc["phi_x1_x2pt_x2pt_x1"] = gamma_row;
  emit_json(opts, doc);
  return kExitOk;
}

int run_selftest(const OutputOptions& opts) {
  json doc;
  doc["command"] = "selftest";
  doc["checks"] = json::array();
  bool all_passed = true;
  auto check = [&](const std::string& name, bool ok) {
    json c;
    c["name"] = name;
    c["pass"] = ok;
    doc["checks"].push_back(c);
    if (!ok) all_passed = false;
  };

  check("catalan counts n<=6", [&] {
    long catalan[] = {1, 2, 5, 14, 42, 132};
    for (int n = 1; n <= 6; ++n)
      if (static_cast<long>(enumerate_nc_perms(n).members.size()) != catalan[n - 1]) return false;
    return true;
  }());

  check("moment/cumulant transforms are inverse", [&] {
    std::vector<Rational> kappa = {Rational(1, 2), Rational(-2, 3), Rational(3), Rational(0),
                                   Rational(7, 5), Rational(1)};
    auto m = moments_from_cumulants(kappa, 6);
    return cumulants_from_moments(m, 6) == kappa;
  }());

  check("exact complex (w,r) closed form", [&] {
    Dims dims(3, 3, 9);
    Rational ct = dims.c_tilde();
    return exact_moment_complex(Word::parse("w,r"), dims) == ct * ct + ct / dims.d2;
  }());

  check("exact real (w,r) closed form", [&] {
    Dims dims(2, 3, 6);
    Rational ct = dims.c_tilde();
    return exact_moment_real(Word::parse("w,r").etas(), dims) ==
           ct * ct + ct * (Rational(1, dims.d1) + Rational(1, dims.d2));
  }());

  check("mixed cumulants vanish in the growing regime (len <= 3)", [&] {
    auto report = freeness_report({Label::plain, Label::left_pt, Label::right_pt, Label::full_t},
                                  3, RegimeLimit::both_grow(Rational(1, 2)));
    return report.all_zero;
  }());

  check("monte carlo smoke (|z| <= 6)", [&] {
    Dims dims(2, 2, 4);
    auto est = estimate_word_moment(Word::parse("w,r"), dims, Field::complex_field, 4000, 12345);
    double exact = to_double(exact_moment_complex(Word::parse("w,r"), dims));
    return std::abs((est.mean - exact) / est.stderr_) <= 6.0;
  }());

  check("density mass (MP(1/4))", [&] {
    auto law = LawSpec::marchenko_pastur(Rational(1, 4));
    auto probe = density(law, 0.0);
    const int steps = 20000;
    double mass = probe.atom_at_zero;
    double mid = (probe.support_a + probe.support_b) / 2;
    double half = (probe.support_b - probe.support_a) / 2;
    double h = M_PI / steps;
    for (int k = 0; k < steps; ++k) {
      double theta = -M_PI / 2 + (k + 0.5) * h;
      double t = mid + half * std::sin(theta);
      mass += density(law, t).density * half * std::cos(theta) * h;
    }
    return std::abs(mass - 1.0) <= 1e-6;
  }());

  doc["passed"] = all_passed;
  emit_json(opts, doc);
  return all_passed ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed moments and free cumulants of partially transposed Wishart matrices"};
  app.require_subcommand(1);

  std::string case_name = "complex";
  std::string word_text;
  long d1 = 0, d2 = 0, p = 0;
  std::string regime_name = "both";
  std::string c_text = "1";
  std::string c_minus_text;
  long fixed_d = 0;
  long samples = 10000;
  uint64_t seed = 1;
  std::string alphabet_text = "w,l,r,t";
  int max_len = 4;
  std::string law_name = "mp";
  int max_n = 8;
  int density_points = 0;
  OutputOptions opts;

  auto add_case = [&](CLI::App* cmd) {
    cmd->add_option("--case", case_name, "complex or real")
        ->check(CLI::IsMember({"complex", "real"}))
        ->capture_default_str();
  };
  auto add_dims = [&](CLI::App* cmd) {
    cmd->add_option("--d1", d1, "left dimension")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--d2", d2, "right dimension")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--p", p, "Wishart parameter")->required()->check(CLI::PositiveNumber);
  };
  auto add_regime = [&](CLI::App* cmd) {
    cmd->add_option("--regime", regime_name, "asymptotic regime")
        ->check(CLI::IsMember({"both", "d1-fixed", "d2-fixed"}))
        ->capture_default_str();
    cmd->add_option("--c", c_text, "limit of p/(d1 d2), rational or decimal")->required();
    cmd->add_option("--d", fixed_d, "fixed dimension for d1-fixed/d2-fixed");
  };

  auto* exact_cmd = app.add_subcommand("exact", "Exact finite-dimensional mixed moment");
  add_case(exact_cmd);
  exact_cmd->add_option("--word", word_text, "comma-separated labels from {w,l,r,t}")->required();
  add_dims(exact_cmd);
  add_output_options(exact_cmd, opts);

  auto* limit_cmd = app.add_subcommand("limit", "Limit mixed moment in an asymptotic regime");
  add_case(limit_cmd);
  limit_cmd->add_option("--word", word_text, "comma-separated labels from {w,l,r,t}")->required();
  add_regime(limit_cmd);
  add_output_options(limit_cmd, opts);

  auto* freeness_cmd = app.add_subcommand("freeness", "Mixed free cumulants of the limit family");
  add_case(freeness_cmd);
  freeness_cmd->add_option("--alphabet", alphabet_text, "letters to mix")->capture_default_str();
  freeness_cmd->add_option("--max-len", max_len, "maximum word length")->capture_default_str();
  add_regime(freeness_cmd);
  add_output_options(freeness_cmd, opts);

  auto* laws_cmd = app.add_subcommand("laws", "Cumulant and moment tables of the limit laws");
  laws_cmd->add_option("--law", law_name, "mp, semicircle, bn, even2c, or mpdiff")
      ->check(CLI::IsMember({"mp", "semicircle", "bn", "even2c", "mpdiff"}))
      ->capture_default_str();
  laws_cmd->add_option("--c", c_text, "law parameter")->required();
  laws_cmd->add_option("--c-minus", c_minus_text, "second parameter for mpdiff");
  laws_cmd->add_option("--d", fixed_d, "dimension parameter for bn");
  laws_cmd->add_option("--max-n", max_n, "table length")->capture_default_str();
  laws_cmd->add_option("--density-points", density_points, "emit density samples (mp/semicircle)");
  add_output_options(laws_cmd, opts);

  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate with exact reference");
  add_case(mc_cmd);
  mc_cmd->add_option("--word", word_text, "comma-separated labels from {w,l,r,t}")->required();
  add_dims(mc_cmd);
  mc_cmd->add_option("--samples", samples, "sample count")->capture_default_str();
  mc_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  add_output_options(mc_cmd, opts);

  auto* blocks_cmd = app.add_subcommand("blocks", "d1 = 2 block-operator experiment");
  blocks_cmd->add_option("--c", c_text, "limit parameter; p = round(2 c d2)")->required();
  blocks_cmd->add_option("--d2", d2, "block dimension")->required()->check(CLI::PositiveNumber);
  blocks_cmd->add_option("--samples", samples, "sample count")->capture_default_str();
  blocks_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  add_output_options(blocks_cmd, opts);

  auto* selftest_cmd = app.add_subcommand("selftest", "Run the bundled invariant suite");
  add_output_options(selftest_cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    json err;
    err["error"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return kExitUsage;
  }

  try {
    if (exact_cmd->parsed()) return run_exact(case_name, word_text, d1, d2, p, opts);
    if (limit_cmd->parsed())
      return run_limit(case_name, word_text, make_regime(regime_name, c_text, fixed_d), opts);
    if (freeness_cmd->parsed())
      return run_freeness(case_name, alphabet_text, max_len,
                          make_regime(regime_name, c_text, fixed_d), opts);
    if (laws_cmd->parsed()) {
      if (law_name == "bn" && fixed_d < 1)
        throw CLI::ValidationError("--d", "bn requires --d >= 1");
      return run_laws(make_law(law_name, c_text, c_minus_text, fixed_d), law_name, max_n,
                      density_points, opts);
    }
    if (mc_cmd->parsed()) return run_mc(case_name, word_text, d1, d2, p, samples, seed, opts);
    if (blocks_cmd->parsed()) return run_blocks(c_text, d2, samples, seed, opts);
    if (selftest_cmd->parsed()) return run_selftest(opts);
  } catch (const std::exception& e) {
    json err;
    err["error"] = e.what();
    std::cerr << err.dump(2) << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
