// dignet: scrambled base-2 digital nets, their quality parameters, and
// moment/probability experiments on randomized QMC estimates.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "dignet/events.hpp"
#include "dignet/moments.hpp"
#include "dignet/netgen.hpp"
#include "dignet/probes.hpp"
#include "dignet/rng.hpp"
#include "dignet/scramble.hpp"

using json = nlohmann::ordered_json;
using namespace dignet;

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string resolve_out(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("DIGNET_OUT_DIR");
  if (!dir || !*dir) return path;
  return std::string(dir) + "/" + path;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::string path = resolve_out(out_path);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + path);
  f << text;
}

struct GenOptions {
  std::string source = "identity";  // identity | random | counterexample | file
  unsigned m = 4;
  unsigned s = 1;
  std::optional<std::uint64_t> seed;
  std::string file;
};

void add_gen_options(CLI::App* cmd, GenOptions& g, bool need_s = true) {
  cmd->add_option("--gen", g.source, "generator source: identity, random, counterexample, file")
      ->check(CLI::IsMember({"identity", "random", "counterexample", "file"}));
  cmd->add_option("--m", g.m, "log2 of the point count");
  if (need_s) cmd->add_option("--s", g.s, "dimension");
  cmd->add_option("--gen-seed", g.seed, "seed for random generator draws");
  cmd->add_option("--file", g.file, "generator file (with --gen file)");
}

GeneratorSet resolve_generators(const GenOptions& g) {
  if (g.source == "identity") return identity_generators(g.m, g.s);
  if (g.source == "random") {
    if (!g.seed) throw UsageError("--gen random requires --gen-seed");
    return random_generators(g.m, g.s, *g.seed);
  }
  if (g.source == "counterexample") {
    if (g.s != 3) throw UsageError("--gen counterexample requires --s 3");
    if (g.m % 2 != 0 || g.m < 2) throw UsageError("--gen counterexample requires even m >= 2");
    return embed_counterexample(find_base3(g.m - 1, g.seed.value_or(1)));
  }
  if (g.source == "file") {
    if (g.file.empty()) throw UsageError("--gen file requires --file <path>");
    return load_generators(g.file);
  }
  throw UsageError("unknown generator source " + g.source);
}

json gen_config(const GenOptions& g, const GeneratorSet& resolved) {
  json c;
  c["gen"] = g.source;
  c["m"] = resolved.m;
  c["s"] = resolved.s;
  if (g.seed) c["gen_seed"] = *g.seed;
  if (!g.file.empty()) c["file"] = g.file;
  return c;
}

KappaVector parse_kvec(const std::string& text, unsigned s) {
  std::vector<std::uint64_t> ks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) ks.push_back(std::stoull(item));
  if (ks.size() != s)
    throw UsageError("k pattern '" + text + "' must list " + std::to_string(s) +
                     " comma-separated integers");
  return KappaVector::from_ks(ks);
}

json to_json(const ProbeResult& res) {
  json j;
  j["probe"] = res.probe;
  json checks = json::array();
  for (const auto& c : res.checks) {
    json cj;
    cj["what"] = c.what;
    cj["empirical"] = c.empirical;
    cj["se"] = c.se;
    cj[c.equality ? "target" : "bound"] = c.bound;
    cj["pass"] = c.pass;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  json metrics;
  for (const auto& [k, v] : res.metrics) metrics[k] = v;
  j["metrics"] = metrics;
  if (!res.notes.empty()) j["notes"] = res.notes;
  j["pass"] = res.pass;
  return j;
}

std::string dyadic_decimal(std::uint64_t word, unsigned E) {
  if (E == 0) return "0";
  mpz_class scaled = mpz_class(static_cast<unsigned long>(word));
  for (unsigned i = 0; i < E; ++i) scaled *= 5;
  std::string digits = scaled.get_str();
  if (digits.size() < E) digits.insert(0, E - digits.size(), '0');
  return "0." + digits;
}

std::string hex_digits(std::uint64_t word, unsigned E) {
  unsigned nibbles = (E + 3) / 4;
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%0*llx", static_cast<int>(nibbles),
                static_cast<unsigned long long>(word << (nibbles * 4 - E)));
  return buf;
}

long now_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// ---- subcommand handlers -------------------------------------------------

int run_net_quality(const GenOptions& gopt, const std::string& out) {
  GeneratorSet g = resolve_generators(gopt);
  json j;
  j["config"] = gen_config(gopt, g);
  j["t"] = t_value(g);
  if (g.s == 3) {
    TripleQuality q = big_t_value(g);
    j["T"] = q.T;
    j["minimal_nontrivial_sum"] = q.minimal_nontrivial_sum;
    j["witness"] = q.witness;
  }
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_net_gen(const GenOptions& gopt, const std::string& out) {
  GeneratorSet g = resolve_generators(gopt);
  if (out.empty()) {
    std::cout << serialize_generators(g);
  } else {
    save_generators(g, resolve_out(out));
  }
  return 0;
}

int run_net_embed(unsigned m, std::uint64_t seed, const std::string& base_file,
                  const std::string& out) {
  if (m < 2 || m % 2 != 0) throw UsageError("embed-counterexample needs an even m >= 2");
  GeneratorSet base =
      base_file.empty() ? find_base3(m - 1, seed) : load_generators(base_file);
  GeneratorSet net = embed_counterexample(base);
  if (!out.empty()) save_generators(net, resolve_out(out));
  json j;
  j["m"] = net.m;
  j["t"] = t_value(net);
  TripleQuality q = big_t_value(net);
  j["T"] = q.T;
  j["minimal_nontrivial_sum"] = q.minimal_nontrivial_sum;
  if (!out.empty()) j["saved"] = resolve_out(out);
  std::cout << j.dump(2) << "\n";
  return 0;
}

int run_points(const GenOptions& gopt, unsigned E, bool scramble,
               std::optional<std::uint64_t> seed, const std::string& out) {
  GeneratorSet g = resolve_generators(gopt);
  PointSet pts = [&] {
    if (!scramble) return unscrambled_points(g);
    if (!seed) throw UsageError("scrambled points require --seed");
    return generate_points(g, random_scramble(g.m, g.s, E, *seed));
  }();
  std::ostringstream csv;
  csv << "i";
  for (unsigned j = 0; j < pts.s(); ++j) csv << ",x" << (j + 1);
  csv << "\n";
  for (std::size_t i = 0; i < pts.n(); ++i) {
    csv << i;
    for (unsigned j = 0; j < pts.s(); ++j) {
      csv << ',';
      if (pts.precision() <= 53) csv << dyadic_decimal(pts.word(i, j), pts.precision());
      else csv << hex_digits(pts.word(i, j), pts.precision());
    }
    csv << "\n";
  }
  emit(csv.str(), out);
  return 0;
}

int run_estimate(const GenOptions& gopt, const std::string& integrand, unsigned E,
                 std::uint64_t seed, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  GeneratorSet g = resolve_generators(gopt);
  Integrand f = make_integrand(integrand, g.s);
  double est = rqmc_estimate(f, generate_points(g, random_scramble(g.m, g.s, E, seed)));
  json j;
  j["config"] = gen_config(gopt, g);
  j["config"]["integrand"] = integrand;
  j["config"]["E"] = E;
  j["estimate"] = est;
  j["known_mean"] = f.mu;
  j["runtime_ms"] = now_ms(t0);
  j["seed"] = seed;
  emit(j.dump(2) + "\n", out);
  return 0;
}

json moment_report_json(const MomentReport& rep) {
  json est;
  est["mean"] = rep.mean;
  est["var"] = rep.var;
  est["m3"] = rep.m3;
  est["m4"] = rep.m4;
  if (rep.gamma) est["gamma"] = *rep.gamma;
  else est["gamma"] = nullptr;  // undefined when the variance estimate is 0
  if (rep.theta) est["theta"] = *rep.theta;
  else est["theta"] = nullptr;
  json se;
  se["mean"] = rep.se_mean;
  se["var"] = rep.se_var;
  se["m3"] = rep.se_m3;
  se["m4"] = rep.se_m4;
  if (rep.se_gamma) se["gamma"] = *rep.se_gamma;
  if (rep.se_theta) se["theta"] = *rep.se_theta;
  json j;
  j["estimates"] = est;
  j["se"] = se;
  j["replicates"] = rep.replicates;
  j["batches"] = rep.batches;
  return j;
}

int run_skewness(const GenOptions& gopt, const std::string& integrand, unsigned E,
                 std::uint64_t R, std::optional<std::uint64_t> seed, bool oracle,
                 bool sample_centering, unsigned workers, const std::string& out,
                 bool variance_focus) {
  auto t0 = std::chrono::steady_clock::now();
  if (R == 0 && !oracle)
    throw UsageError("nothing to report: give --R for replication and/or --oracle");
  GeneratorSet g = resolve_generators(gopt);
  json j;
  j["config"] = gen_config(gopt, g);
  j["config"]["integrand"] = integrand;
  j["config"]["E"] = E;
  j["config"]["R"] = R;
  j["config"]["centering"] = sample_centering ? "sample" : "known";
  if (R > 0) {
    if (!seed) throw UsageError("replicated moments require --seed");
    Integrand f = make_integrand(integrand, g.s);
    MomentReport rep =
        mc_moments(f, g, E, R, *seed,
                   sample_centering ? Centering::SampleMean : Centering::KnownMean,
                   workers);
    j.update(moment_report_json(rep));
    j["seed"] = *seed;
  }
  if (oracle) {
    bool identity_like = gopt.source == "identity" && g.s == 1 && integrand == "xsq";
    if (!identity_like)
      throw UsageError("--oracle applies to --integrand xsq with --gen identity");
    json o;
    if (variance_focus) {
      VarianceSeries vs = exact_variance_xsq(g.m, g.m + 24);
      o["value"] = to_double(vs.value);
      o["value_exact"] = to_string(vs.value);
      o["tail_bound"] = vs.tail_bound;
      o["singleton_series"] = to_double(vs.singleton_series);
      o["K"] = vs.K;
    } else {
      SeriesValue sv = exact_third_moment_xsq(g.m, g.m + 24);
      o["value"] = to_double(sv.value);
      o["value_exact"] = to_string(sv.value);
      o["tail_bound"] = sv.tail_bound;
      o["closed_form"] = to_double(closed_form_third_xsq(g.m));
      o["K"] = sv.K;
    }
    j["oracle"] = o;
  }
  j["runtime_ms"] = now_ms(t0);
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_zprob(const GenOptions& gopt, const std::string& mode, const std::string& k1s,
              const std::string& k2s, unsigned E, std::uint64_t trials,
              std::optional<std::uint64_t> seed, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  GeneratorSet g = resolve_generators(gopt);
  KappaVector k1 = parse_kvec(k1s, g.s);
  json j;
  j["config"] = gen_config(gopt, g);
  j["config"]["mode"] = mode;
  j["config"]["k1"] = k1s;
  j["config"]["E"] = E;
  std::optional<KappaVector> k2;
  if (!k2s.empty()) {
    k2 = parse_kvec(k2s, g.s);
    j["config"]["k2"] = k2s;
  }
  if (mode == "rule") {
    if (g.s != 1 || gopt.source != "identity")
      throw UsageError("--mode rule is the s=1 identity-generator case rule");
    Rat p = k2 ? z_pair_prob_identity(k1[0], (*k2)[0], g.m)
               : z_prob_identity(k1[0], g.m);
    j["prob"] = to_double(p);
    j["prob_exact"] = to_string(p);
  } else if (mode == "enum") {
    Rat p = k2 ? z_pair_prob_enum(k1, *k2, g, E) : z_prob_enum(k1, g, E);
    j["prob"] = to_double(p);
    j["prob_exact"] = to_string(p);
  } else if (mode == "exact") {
    Rat p = k2 ? z_pair_prob_exact(k1, *k2, g, E) : z_prob_exact(k1, g, E);
    j["prob"] = to_double(p);
    j["prob_exact"] = to_string(p);
  } else if (mode == "mc") {
    if (!seed) throw UsageError("--mode mc requires --seed");
    McEstimate mc = k2 ? z_pair_prob_mc(k1, *k2, g, E, trials, *seed)
                       : z_prob_mc(k1, g, E, trials, *seed);
    j["prob"] = mc.estimate;
    j["se"] = mc.se;
    j["trials"] = mc.trials;
    j["seed"] = *seed;
  } else {
    throw UsageError("unknown zprob mode " + mode);
  }
  j["runtime_ms"] = now_ms(t0);
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_ci(const GenOptions& gopt, const std::string& integrand, unsigned E, unsigned R,
           unsigned reps, double level, std::uint64_t seed, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  GeneratorSet g = resolve_generators(gopt);
  Integrand f = make_integrand(integrand, g.s);
  CIReport rep = ci_coverage(f, g, E, R, reps, level, seed);
  json j;
  j["config"] = gen_config(gopt, g);
  j["config"]["integrand"] = integrand;
  j["config"]["E"] = E;
  j["config"]["R"] = R;
  j["config"]["repetitions"] = reps;
  j["config"]["level"] = level;
  j["coverage"] = rep.coverage;
  j["se"] = rep.se;
  j["mean_halfwidth"] = rep.mean_halfwidth;
  j["seed"] = seed;
  j["runtime_ms"] = now_ms(t0);
  emit(j.dump(2) + "\n", out);
  return 0;
}

int run_lemma_t(unsigned max_l, const std::string& out) {
  auto t0 = std::chrono::steady_clock::now();
  bool bounded = true, symmetric = true;
  std::vector<Rat> table((max_l + 1) * (max_l + 1) * (max_l + 1));
  auto at = [&](unsigned a, unsigned b, unsigned c) -> Rat& {
    return table[(a * (max_l + 1) + b) * (max_l + 1) + c];
  };
  for (unsigned a = 0; a <= max_l; ++a)
    for (unsigned b = 0; b <= max_l; ++b)
      for (unsigned c = 0; c <= max_l; ++c) {
        Rat v = t_sum(a, b, c);
        at(a, b, c) = v;
        if (!(v < pow2(2 - static_cast<long>(a + b + c)))) bounded = false;
      }
  for (unsigned a = 0; a <= max_l; ++a)
    for (unsigned b = 0; b <= max_l; ++b)
      for (unsigned c = 0; c <= max_l; ++c) {
        const Rat& v = at(a, b, c);
        if (v != at(a, c, b) || v != at(b, a, c) || v != at(c, b, a))
          symmetric = false;
      }
  json j;
  j["max"] = max_l;
  j["tuples"] = (max_l + 1) * (max_l + 1) * (max_l + 1);
  j["bounded"] = bounded;
  j["symmetric"] = symmetric;
  j["pass"] = bounded && symmetric;
  j["runtime_ms"] = now_ms(t0);
  emit(j.dump(2) + "\n", out);
  return bounded && symmetric ? 0 : 1;
}

int emit_probe(const ProbeResult& res, const std::string& out,
               const std::string& csv_path = "") {
  emit(to_json(res).dump() + "\n", out);  // one JSON line per probe
  if (!csv_path.empty()) {
    std::ostringstream csv;
    csv << "probe,check,empirical,se,bound_or_target,kind,pass\n";
    for (const auto& c : res.checks)
      csv << res.probe << ",\"" << c.what << "\"," << c.empirical << "," << c.se << ","
          << c.bound << "," << (c.equality ? "equality" : "bound") << ","
          << (c.pass ? "1" : "0") << "\n";
    emit(csv.str(), csv_path);
  }
  return res.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scrambled base-2 digital nets: quality parameters, RQMC moment "
               "estimates, and probability-bound probes"};
  app.require_subcommand(1);

  // ---- net ----------------------------------------------------------------
  auto* net = app.add_subcommand("net", "generator-set construction and quality");
  net->require_subcommand(1);

  GenOptions q_gen;
  std::string q_out;
  auto* quality = net->add_subcommand(
      "quality", "quality parameter t, plus the triple row-space intersection "
                 "parameter T when s = 3");
  add_gen_options(quality, q_gen);
  quality->add_option("--out", q_out, "write the JSON report here");

  GenOptions g_gen;
  std::string g_out;
  auto* gen = net->add_subcommand("gen", "generate a set and emit it in the text format");
  add_gen_options(gen, g_gen);
  gen->add_option("--out", g_out, "write the generator file here");

  unsigned e_m = 8;
  std::uint64_t e_seed = 1;
  std::string e_base, e_out;
  auto* embed = net->add_subcommand(
      "embed-counterexample",
      "insert a shared unit row/column into a t<=1 three-dimensional base, "
      "producing a t<=2 net whose intersection parameter T grows like m/2");
  embed->add_option("--m", e_m, "target (even) size")->required();
  embed->add_option("--search-seed", e_seed, "seed for the base search");
  embed->add_option("--base", e_base, "generator file holding a t<=1 s=3 base");
  embed->add_option("--out", e_out, "save the embedded set here");

  // ---- points ---------------------------------------------------------------
  GenOptions p_gen;
  unsigned p_E = 32;
  bool p_raw = false;
  std::optional<std::uint64_t> p_seed;
  std::string p_out;
  auto* points = app.add_subcommand(
      "points", "emit the (scrambled) point set as CSV; coordinates are exact "
                "dyadic decimals up to E = 53 and hex digit strings past that");
  add_gen_options(points, p_gen);
  points->add_option("--E", p_E, "digit precision");
  points->add_flag("--raw", p_raw, "emit the unrandomized net instead of scrambling");
  points->add_option("--seed", p_seed, "scramble seed");
  points->add_option("--out", p_out, "write the CSV here");

  // ---- estimate -------------------------------------------------------------
  GenOptions est_gen;
  std::string est_integrand = "xsq", est_out;
  unsigned est_E = 64;
  std::uint64_t est_seed = 0;
  auto* estimate = app.add_subcommand(
      "estimate", "one RQMC estimate: the sample mean of the integrand over a "
                  "single scrambled net");
  add_gen_options(estimate, est_gen);
  estimate->add_option("--integrand", est_integrand, "xsq or prod_xsq");
  estimate->add_option("--E", est_E, "digit precision");
  estimate->add_option("--seed", est_seed, "scramble seed")->required();
  estimate->add_option("--out", est_out, "write the JSON report here");

  // ---- skewness / variance ---------------------------------------------------
  GenOptions sk_gen;
  std::string sk_integrand = "xsq", sk_out;
  unsigned sk_E = 64, sk_workers = 1;
  std::uint64_t sk_R = 0;
  std::optional<std::uint64_t> sk_seed;
  bool sk_oracle = false, sk_sample_centering = false;
  auto* skew = app.add_subcommand(
      "skewness", "replicated-scramble estimates of variance, third central "
                  "moment, skewness and kurtosis; --oracle adds the exact "
                  "series value for x^2 under identity generators");
  add_gen_options(skew, sk_gen);
  skew->add_option("--integrand", sk_integrand, "xsq or prod_xsq");
  skew->add_option("--E", sk_E, "digit precision");
  skew->add_option("--R", sk_R, "number of scramble replicates (>= 16)");
  skew->add_option("--seed", sk_seed, "replication seed");
  skew->add_flag("--oracle", sk_oracle, "include the exact truncated-series oracle");
  skew->add_flag("--sample-centering", sk_sample_centering,
                 "center at the sample grand mean instead of the known mean");
  skew->add_option("--workers", sk_workers, "parallel replicate workers");
  skew->add_option("--out", sk_out, "write the JSON report here");

  GenOptions var_gen;
  std::string var_integrand = "xsq", var_out;
  unsigned var_E = 64, var_workers = 1;
  std::uint64_t var_R = 0;
  std::optional<std::uint64_t> var_seed;
  bool var_oracle = false, var_sample_centering = false;
  auto* var = app.add_subcommand(
      "variance", "replicated-scramble variance report; --oracle adds the exact "
                  "truncated variance series and its singleton lower bound");
  add_gen_options(var, var_gen);
  var->add_option("--integrand", var_integrand, "xsq or prod_xsq");
  var->add_option("--E", var_E, "digit precision");
  var->add_option("--R", var_R, "number of scramble replicates (>= 16)");
  var->add_option("--seed", var_seed, "replication seed");
  var->add_flag("--oracle", var_oracle, "include the exact series oracle");
  var->add_flag("--sample-centering", var_sample_centering,
                "center at the sample grand mean instead of the known mean");
  var->add_option("--workers", var_workers, "parallel replicate workers");
  var->add_option("--out", var_out, "write the JSON report here");

  // ---- zprob ------------------------------------------------------------------
  GenOptions z_gen;
  std::string z_mode = "exact", z_k1, z_k2, z_out;
  unsigned z_E = 16;
  std::uint64_t z_trials = 100000;
  std::optional<std::uint64_t> z_seed;
  auto* zprob = app.add_subcommand(
      "zprob", "probability that the scrambled rows selected by one or two "
               "Walsh indices cancel: exact (affine rank), enumerated, the "
               "s=1 identity case rule, or Monte Carlo");
  add_gen_options(zprob, z_gen);
  zprob->add_option("--mode", z_mode, "rule, enum, exact, or mc")
      ->check(CLI::IsMember({"rule", "enum", "exact", "mc"}));
  zprob->add_option("--k1", z_k1, "first index, comma-separated per coordinate")->required();
  zprob->add_option("--k2", z_k2, "optional second index for the joint probability");
  zprob->add_option("--E", z_E, "scramble precision");
  zprob->add_option("--trials", z_trials, "Monte Carlo trials");
  zprob->add_option("--seed", z_seed, "Monte Carlo seed");
  zprob->add_option("--out", z_out, "write the JSON report here");

  // ---- probes -------------------------------------------------------------------
  auto* probe = app.add_subcommand("probe", "empirical checks of the probability bounds");
  probe->require_subcommand(1);

  GenOptions pse_gen;
  std::string pse_k1, pse_out, pse_csv;
  std::uint64_t pse_trials = 100000, pse_seed = 0;
  auto* pse = probe->add_subcommand(
      "single-event", "empirical Pr(Z(k)) against the net bound 2^(t+s-m)");
  add_gen_options(pse, pse_gen);
  pse->add_option("--k1", pse_k1, "index pattern")->required();
  pse->add_option("--trials", pse_trials, "trials");
  pse->add_option("--seed", pse_seed, "seed")->required();
  pse->add_option("--out", pse_out, "append the JSON line here");
  pse->add_option("--csv", pse_csv, "also write a CSV summary of the checks");

  GenOptions ppe_gen;
  std::string ppe_k1, ppe_k2, ppe_out, ppe_csv;
  std::uint64_t ppe_trials = 100000, ppe_seed = 0;
  auto* ppe = probe->add_subcommand(
      "pair-event", "empirical joint probability of two vanishing events "
                    "against the 3/2- and 2-exponent bounds, plus an "
                    "independence product test when no coordinate shares its "
                    "top index");
  add_gen_options(ppe, ppe_gen);
  ppe->add_option("--k1", ppe_k1, "first index pattern")->required();
  ppe->add_option("--k2", ppe_k2, "second index pattern")->required();
  ppe->add_option("--trials", ppe_trials, "trials");
  ppe->add_option("--seed", ppe_seed, "seed")->required();
  ppe->add_option("--out", ppe_out, "append the JSON line here");
  ppe->add_option("--csv", ppe_csv, "also write a CSV summary of the checks");

  unsigned ptd_m = 8, ptd_s = 2;
  std::uint64_t ptd_draws = 4000, ptd_seed = 0;
  std::string ptd_out, ptd_csv;
  auto* ptd = probe->add_subcommand(
      "t-distribution", "empirical Pr(t >= s log2 m) over uniformly random "
                        "generator matrices against 1/((s-1)! m)");
  ptd->add_option("--m", ptd_m, "size");
  ptd->add_option("--s", ptd_s, "dimension");
  ptd->add_option("--draws", ptd_draws, "generator draws");
  ptd->add_option("--seed", ptd_seed, "seed")->required();
  ptd->add_option("--out", ptd_out, "append the JSON line here");
  ptd->add_option("--csv", ptd_csv, "also write a CSV summary of the checks");

  unsigned ppl_m = 4, ppl_s = 2;
  std::string ppl_k1, ppl_k2, ppl_out, ppl_csv;
  std::uint64_t ppl_trials = 1000000, ppl_seed = 0;
  auto* ppl = probe->add_subcommand(
      "pair-law", "joint vanishing frequency over fresh draws of both the "
                  "generators and the scramble against the exact value 2^-2m");
  ppl->add_option("--m", ppl_m, "size");
  ppl->add_option("--s", ppl_s, "dimension");
  ppl->add_option("--k1", ppl_k1, "first index pattern (default singleton at m-1)");
  ppl->add_option("--k2", ppl_k2, "second index pattern (default singleton at m)");
  ppl->add_option("--trials", ppl_trials, "trials");
  ppl->add_option("--seed", ppl_seed, "seed")->required();
  ppl->add_option("--out", ppl_out, "append the JSON line here");
  ppl->add_option("--csv", ppl_csv, "also write a CSV summary of the checks");

  unsigned pcs_m = 10, pcs_s = 2, pcs_draws = 200, pcs_pairs = 64;
  double pcs_eps = 0.5;
  std::uint64_t pcs_trials = 0, pcs_seed = 0;
  std::string pcs_out, pcs_csv;
  auto* pcs = probe->add_subcommand(
      "cstar", "fraction of random generator sets whose worst sampled pair "
               "probability exceeds 2^(-2(1-eps)m), against the combined "
               "failure bound");
  pcs->add_option("--m", pcs_m, "size");
  pcs->add_option("--s", pcs_s, "dimension");
  pcs->add_option("--epsilon", pcs_eps, "exponent slack");
  pcs->add_option("--c-draws", pcs_draws, "generator draws");
  pcs->add_option("--pair-samples", pcs_pairs, "index pairs sampled per draw");
  pcs->add_option("--trials", pcs_trials, "optional MC cross-check trials");
  pcs->add_option("--seed", pcs_seed, "seed")->required();
  pcs->add_option("--out", pcs_out, "append the JSON line here");
  pcs->add_option("--csv", pcs_csv, "also write a CSV summary of the checks");

  // ---- ci-coverage -----------------------------------------------------------
  GenOptions ci_gen;
  std::string ci_integrand = "xsq", ci_out;
  unsigned ci_E = 64, ci_R = 8, ci_reps = 1000;
  double ci_level = 0.95;
  std::uint64_t ci_seed = 0;
  auto* ci = app.add_subcommand(
      "ci-coverage", "empirical coverage of the Student-t interval built from "
                     "R scramble replicates");
  add_gen_options(ci, ci_gen);
  ci->add_option("--integrand", ci_integrand, "xsq or prod_xsq");
  ci->add_option("--E", ci_E, "digit precision");
  ci->add_option("--R", ci_R, "replicates per interval");
  ci->add_option("--reps", ci_reps, "number of intervals");
  ci->add_option("--level", ci_level, "nominal level in (0,1)");
  ci->add_option("--seed", ci_seed, "seed")->required();
  ci->add_option("--out", ci_out, "write the JSON report here");

  // ---- lemma-t -----------------------------------------------------------------
  unsigned lt_max = 10;
  std::string lt_out;
  auto* lt = app.add_subcommand(
      "lemma-t", "exhaustive check that the exact index-pair sum T(l1,l2,l12) "
                 "stays below 2^(-l1-l2-l12+2) and is permutation-symmetric");
  lt->add_option("--max", lt_max, "largest argument value")->check(CLI::Range(0, 12));
  lt->add_option("--out", lt_out, "write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage error
  }

  try {
    if (quality->parsed()) return run_net_quality(q_gen, q_out);
    if (gen->parsed()) return run_net_gen(g_gen, g_out);
    if (embed->parsed()) return run_net_embed(e_m, e_seed, e_base, e_out);
    if (points->parsed()) return run_points(p_gen, p_E, !p_raw, p_seed, p_out);
    if (estimate->parsed())
      return run_estimate(est_gen, est_integrand, est_E, est_seed, est_out);
    if (skew->parsed())
      return run_skewness(sk_gen, sk_integrand, sk_E, sk_R, sk_seed, sk_oracle,
                          sk_sample_centering, sk_workers, sk_out, false);
    if (var->parsed())
      return run_skewness(var_gen, var_integrand, var_E, var_R, var_seed, var_oracle,
                          var_sample_centering, var_workers, var_out, true);
    if (zprob->parsed())
      return run_zprob(z_gen, z_mode, z_k1, z_k2, z_E, z_trials, z_seed, z_out);
    if (pse->parsed()) {
      GeneratorSet g = resolve_generators(pse_gen);
      return emit_probe(
          probe_single_event(g, parse_kvec(pse_k1, g.s), pse_trials, pse_seed), pse_out,
          pse_csv);
    }
    if (ppe->parsed()) {
      GeneratorSet g = resolve_generators(ppe_gen);
      return emit_probe(probe_pair_event(g, parse_kvec(ppe_k1, g.s),
                                         parse_kvec(ppe_k2, g.s), ppe_trials, ppe_seed),
                        ppe_out, ppe_csv);
    }
    if (ptd->parsed())
      return emit_probe(probe_t_distribution(ptd_m, ptd_s, ptd_draws, ptd_seed), ptd_out, ptd_csv);
    if (ppl->parsed()) {
      if (ppl_m < 2) throw UsageError("pair-law needs m >= 2 for the default indices");
      auto default_kvec = [&](unsigned coord, unsigned l) {
        std::vector<KappaSet> comps(ppl_s);
        comps[coord] = KappaSet::of({l});
        return KappaVector(std::move(comps));
      };
      KappaVector k1 = ppl_k1.empty() ? default_kvec(0, ppl_m - 1)
                                      : parse_kvec(ppl_k1, ppl_s);
      KappaVector k2 = ppl_k2.empty() ? default_kvec(ppl_s > 1 ? 1 : 0, ppl_m)
                                      : parse_kvec(ppl_k2, ppl_s);
      return emit_probe(probe_random_pair_law(ppl_m, ppl_s, k1, k2, ppl_trials, ppl_seed),
                        ppl_out, ppl_csv);
    }
    if (pcs->parsed()) {
      CstarOptions opt{pcs_eps, pcs_draws, pcs_pairs, pcs_trials};
      return emit_probe(probe_cstar(pcs_m, pcs_s, opt, pcs_seed), pcs_out, pcs_csv);
    }
    if (ci->parsed())
      return run_ci(ci_gen, ci_integrand, ci_E, ci_R, ci_reps, ci_level, ci_seed, ci_out);
    if (lt->parsed()) return run_lemma_t(lt_max, lt_out);
    throw UsageError("no subcommand selected");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
