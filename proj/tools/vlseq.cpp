// vlseq: command-line front end for variable-exponent sequence spaces.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vlseq/vlseq.hpp"

using json = nlohmann::ordered_json;
using namespace vlseq;

namespace {

enum Exit { ok = 0, parse_error = 2, precondition = 3, undecided = 4, violation = 5 };

struct RunConfig {
  std::string command;
  std::string p_path, q_path, seq_path, table_path;
  std::size_t D = 24;
  std::uint64_t seed = 0;
  std::optional<double> c, K, epsilon;
  std::size_t n = 6;
  int blocks = 10;
  int groups = 0;
  std::size_t samples = 10'000;
  double inflate = 1.0;
  std::size_t subspace_dim = 3;
  int starts = 32;
  bool reversed = false;
  double tolerance = 1e-12;
  double verify_tol = 1e-6;
  std::string format = "table";
  std::string out;
};

json config_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  if (!c.p_path.empty()) j["p"] = c.p_path;
  if (!c.q_path.empty()) j["q"] = c.q_path;
  if (!c.seq_path.empty()) j["seq"] = c.seq_path;
  j["D"] = c.D;
  j["seed"] = c.seed;
  if (c.c) j["c"] = *c.c;
  if (c.K) j["K"] = *c.K;
  if (c.epsilon) j["epsilon"] = *c.epsilon;
  if (c.command == "bernstein") {
    j["n"] = c.n;
    j["starts"] = c.starts;
    j["reversed"] = c.reversed;
  }
  if (c.command == "witness") {
    j["blocks"] = c.blocks;
    j["groups"] = c.groups;
    j["verify_tol"] = c.verify_tol;
  }
  if (c.command == "topology") {
    j["samples"] = c.samples;
    j["inflate"] = c.inflate;
    j["subspace_dim"] = c.subspace_dim;
  }
  j["tolerance"] = c.tolerance;
  j["format"] = c.format;
  if (!c.out.empty()) j["out"] = c.out;
  return j;
}

// A report: nested key/value results plus an optional table.
struct Report {
  json result = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

void flatten(const json& v, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (const auto& [k, x] : v.items()) flatten(x, prefix.empty() ? k : prefix + "." + k, out);
  } else {
    out.emplace_back(prefix, scalar_text(v));
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

std::string render(const RunConfig& cfg, const Report& r) {
  std::ostringstream os;
  if (cfg.format == "structured") {
    json doc;
    doc["config"] = config_json(cfg);
    doc["result"] = r.result;
    if (!r.columns.empty()) {
      json table = json::array();
      for (const auto& row : r.rows) {
        json obj;
        for (std::size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = row[i];
        table.push_back(obj);
      }
      doc["rows"] = table;
    }
    os << doc.dump(2) << '\n';
    return os.str();
  }

  std::vector<std::pair<std::string, std::string>> cfg_items, items;
  flatten(config_json(cfg), "config", cfg_items);
  flatten(r.result, "", items);

  if (cfg.format == "rows") {
    for (const auto& [k, v] : cfg_items) os << "# " << k << "=" << v << '\n';
    if (!r.columns.empty()) {
      for (const auto& [k, v] : items) os << "# " << k << "=" << v << '\n';
      for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << csv_field(r.columns[i]);
      os << '\n';
      for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(scalar_text(row[i]));
        os << '\n';
      }
    } else {
      os << "key,value\n";
      for (const auto& [k, v] : items) os << csv_field(k) << ',' << csv_field(v) << '\n';
    }
    return os.str();
  }

  std::size_t width = 0;
  for (const auto& [k, v] : cfg_items) width = std::max(width, k.size());
  for (const auto& [k, v] : items) width = std::max(width, k.size());
  for (const auto& [k, v] : cfg_items) os << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  os << '\n';
  for (const auto& [k, v] : items) os << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
  if (!r.columns.empty()) {
    std::vector<std::size_t> w(r.columns.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = r.columns[i].size();
    for (const auto& row : r.rows)
      for (std::size_t i = 0; i < row.size(); ++i) w[i] = std::max(w[i], scalar_text(row[i]).size());
    os << '\n';
    for (std::size_t i = 0; i < w.size(); ++i) os << std::left << std::setw(static_cast<int>(w[i]) + 2) << r.columns[i];
    os << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << std::left << std::setw(static_cast<int>(w[i]) + 2) << scalar_text(row[i]);
      os << '\n';
    }
  }
  return os.str();
}

void emit(const RunConfig& cfg, const Report& r) {
  const auto text = render(cfg, r);
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw PreconditionError("cannot write output file '" + cfg.out + "'");
  f << text;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

ExponentSequence need_exponents(const std::string& path, const char* flag) {
  if (path.empty()) throw PreconditionError(std::string("missing ") + flag + " FILE");
  return load_exponent_sequence(path);
}

json direction_json(const DirectionVerdict& v) {
  json j;
  j["status"] = to_string(v.status);
  j["criterion"] = to_string(v.criterion.answer);
  if (v.criterion.answer == ExistsC::Answer::yes) {
    j["c"] = v.criterion.c;
    j["M"] = v.criterion.M;
  }
  if (v.status == DirectionVerdict::Status::holds) {
    j["constant_bound"] = v.constant_bound;
    if (v.criterion.answer == ExistsC::Answer::yes) j["regime"] = to_string(v.regime);
  }
  if (!v.witness.empty()) j["witness"] = v.witness;
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

// ---------------------------------------------------------------------------

int cmd_norm(const RunConfig& cfg) {
  const auto p = need_exponents(cfg.p_path, "--p");
  if (cfg.seq_path.empty()) throw PreconditionError("missing --seq FILE");
  const auto a = load_sequence(cfg.seq_path);
  NormOptions opts;
  opts.tolerance = cfg.tolerance;
  Report r;
  r.result["exponents"] = p.describe();
  r.result["dimension"] = a.dimension();
  r.result["modular"] = modular(a, p);
  r.result["luxemburg_norm"] = luxemburg_norm(a, p, opts);
  r.result["sup_norm"] = sup_norm(a);
  r.result["quasi_triangle_constant"] = quasi_triangle_constant(p);
  emit(cfg, r);
  return ok;
}

int cmd_classify(const RunConfig& cfg) {
  const auto p = need_exponents(cfg.p_path, "--p");
  const auto q = need_exponents(cfg.q_path, "--q");
  const auto v = classify_pair(p, q);
  Report r;
  r.result["p"] = p.describe();
  r.result["q"] = q.describe();
  r.result["classification"] = to_string(v.classification);
  r.result["forward"] = direction_json(v.forward);
  r.result["backward"] = direction_json(v.backward);
  if (cfg.c) {
    // Criterion sum for l_p -> l_q on {q_n < p_n} at the requested c.
    const auto drop = difference_set(q, p, Comparison::less);
    const auto s = criterion_sum(q, p, *cfg.c, drop, cfg.D);
    r.result["criterion_at_c"] = {{"c", s.c}, {"partial_sum", s.partial_sum}, {"summed_through", s.summed_through},
                                  {"tail", to_string(s.tail_verdict)}, {"M", optional_number(s.M)}};
  }
  const auto lp = linfty_relation(p);
  r.result["p_vs_linfty"] = lp.kind == LinftyRelation::Kind::coincides  ? "coincides"
                            : lp.kind == LinftyRelation::Kind::distinct ? "distinct"
                                                                        : "undecided";
  if (v.forward.status == DirectionVerdict::Status::fails || v.backward.status == DirectionVerdict::Status::fails)
    r.result["witness_hint"] = "vlseq witness --p P --q Q --K 2 --blocks 10 builds the refuting sequence";
  emit(cfg, r);
  return v.classification == PairClass::undecided ? undecided : ok;
}

int cmd_witness(const RunConfig& cfg) {
  const auto p = need_exponents(cfg.p_path, "--p");
  const auto q = need_exponents(cfg.q_path, "--q");
  const double K = cfg.K.value_or(2.0);
  WitnessOptions wopt;

  Witness w;
  std::string variant;
  bool passes = true;
  Report r;
  if (cfg.groups > 0) {
    variant = "universal";
    w = construct_universal_witness(p, q, cfg.groups, cfg.blocks, wopt);
    for (int k = 1; k <= cfg.groups; ++k) {
      const auto rep = verify_witness(w.sequence, p, q, k, cfg.blocks * (1.0 - cfg.verify_tol), cfg.verify_tol);
      r.result["scales"]["K=" + std::to_string(k)] = {{"scaled_p_modular", rep.scaled_p_modular},
                                                       {"passes", rep.passes}};
      passes = passes && rep.passes;
      if (k == 1) r.result["q_modular"] = rep.q_modular;
    }
  } else {
    const double eps = cfg.epsilon.value_or(1.0);
    variant = cfg.epsilon ? "scaled" : "block";
    w = cfg.epsilon ? construct_scaled_witness(p, q, eps, K, cfg.blocks, wopt)
                    : construct_block_witness(p, q, K, cfg.blocks, wopt);
    // sum (a_n/eps)^{q_n} <= 1 and sum (a_n/K)^{p_n} >= number of blocks
    const auto rep = verify_witness(w.sequence.scaled(1.0 / eps), p, q, K / eps,
                                    cfg.blocks * (1.0 - cfg.verify_tol), cfg.verify_tol);
    r.result["q_modular"] = rep.q_modular;
    r.result["scaled_p_modular"] = rep.scaled_p_modular;
    passes = rep.passes;
  }
  r.result["variant"] = variant;
  r.result["alpha"] = w.plan.alpha;
  r.result["blocks"] = w.plan.blocks.size();
  r.result["extent"] = w.plan.extent;
  r.result["runs"] = w.sequence.runs().size();
  r.result["passes"] = passes;
  r.columns = {"block", "group", "first", "length", "c", "target", "block_sum"};
  for (std::size_t b = 0; b < w.plan.blocks.size(); ++b) {
    const auto& s = w.plan.blocks[b];
    r.rows.push_back({b + 1, s.group, s.first, s.length, s.c, s.target, s.block_sum});
  }
  if (!cfg.table_path.empty()) {
    std::ofstream f(cfg.table_path);
    if (!f) throw PreconditionError("cannot write witness table '" + cfg.table_path + "'");
    write_run_table(f, w.sequence);
  }
  emit(cfg, r);
  return passes ? ok : violation;
}

int cmd_bernstein(const RunConfig& cfg) {
  const auto p = need_exponents(cfg.p_path, "--p");
  const auto q = need_exponents(cfg.q_path, "--q");
  if (cfg.n < 1 || cfg.n > cfg.D) throw PreconditionError("bernstein needs 1 <= n <= D");
  BernsteinOptions opt;
  opt.seed = cfg.seed;
  opt.search.starts = cfg.starts;

  std::vector<BernsteinReport> rows;
  if (cfg.reversed) {
    for (Index n = 1; n <= cfg.n; ++n) {
      try {
        rows.push_back(reversed_bn_estimate(p, q, n, cfg.D, opt));
      } catch (const PreconditionError&) {
        if (n == cfg.n) throw;
        continue;  // n <= k: nothing left after elimination
      }
      if (rows.size() > 1)
        rows.back().empirical_estimate = std::min(rows.back().raw_estimate, rows[rows.size() - 2].empirical_estimate);
    }
  } else {
    rows = bernstein_series(p, q, cfg.n, cfg.D, opt);
  }

  Report r;
  r.result["p"] = p.describe();
  r.result["q"] = q.describe();
  r.result["estimates"] = "heuristic except rows marked certified";
  if (rows.size() >= 3) {
    const auto fit = fit_decay(rows);
    r.result["fit"] = {{"C", fit.C}, {"beta", fit.beta}};
  }
  const auto verdict = singularity_classify(p, q);
  json vj;
  vj["kind"] = to_string(verdict.kind);
  if (verdict.kind == SingularityVerdict::Kind::not_strictly_singular) {
    vj["c"] = verdict.c;
    vj["M"] = verdict.M;
  }
  if (verdict.kind == SingularityVerdict::Kind::finitely_strictly_singular) vj["beta_bound"] = verdict.beta_bound;
  if (!verdict.note.empty()) vj["note"] = verdict.note;
  r.result["singularity"] = vj;

  r.columns = {"n", "shift", "theorem_bound", "proof_bound", "estimate", "raw_estimate", "certified", "subspace"};
  for (const auto& row : rows)
    r.rows.push_back({row.n, row.shift, optional_number(row.upper_bound_theorem), optional_number(row.upper_bound_proof),
                      row.empirical_estimate, row.raw_estimate, row.certified, row.subspace_descriptor});
  emit(cfg, r);
  return ok;
}

int cmd_topology(const RunConfig& cfg) {
  const auto p = need_exponents(cfg.p_path, "--p");
  const double eps = cfg.epsilon.value_or(0.5);
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("epsilon must lie in (0, 1)");
  if (!(cfg.inflate > 0.0)) throw PreconditionError("--inflate must be positive");

  Report r;
  std::size_t violations = 0;
  auto rng = detail::stream_rng(cfg.seed, 0xba11);

  // A center well inside both balls: scaled so that its modular is a quarter of epsilon.
  auto center = detail::random_sequence(rng, cfg.D);
  double lo = 0.0, hi = 1.0;
  while (modular(center * hi, p) < 0.25 * eps) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (modular(center * mid, p) < 0.25 * eps ? lo : hi) = mid;
  }
  center = center * lo;
  const auto zero = FiniteSequence::zeros(cfg.D);

  const auto d1 = inclusion_radius_U_in_B(center, eps, p);
  const auto d2 = inclusion_radius_B_in_U(center, eps, p);
  if (d1 && d2) {
    const auto c1 = check_inclusion({center, cfg.inflate * *d1, BallSpec::Kind::metric_ball},
                                    {zero, eps, BallSpec::Kind::quasi_norm_ball}, p, cfg.samples, cfg.seed);
    const auto c2 = check_inclusion({center, cfg.inflate * *d2, BallSpec::Kind::quasi_norm_ball},
                                    {zero, eps, BallSpec::Kind::metric_ball}, p, cfg.samples, cfg.seed + 1);
    r.result["U_in_B"] = {{"delta", *d1}, {"radius_used", cfg.inflate * *d1}, {"samples", c1.samples},
                          {"violations", c1.violations}, {"worst_ratio", c1.worst_ratio}};
    r.result["B_in_U"] = {{"delta", *d2}, {"radius_used", cfg.inflate * *d2}, {"samples", c2.samples},
                          {"violations", c2.violations}, {"worst_ratio", c2.worst_ratio}};
    violations += c1.violations + c2.violations;
  } else {
    r.result["inclusion_radii"] = "no formula: some exponent exceeds 1";
  }

  if (cfg.subspace_dim >= 1 && cfg.subspace_dim < cfg.D) {
    std::vector<FiniteSequence> basis;
    for (std::size_t j = 0; j < cfg.subspace_dim; ++j) {
      std::vector<double> v(cfg.D);
      for (auto& x : v) x = detail::gaussian(rng);
      basis.emplace_back(std::move(v));
    }
    const auto w = riesz_witness(basis, eps, p, cfg.D, cfg.seed);
    const double dist = sampled_distance_to_span(w.z, basis, p, cfg.samples, cfg.seed + 2);
    const bool fails = dist <= 1.0 - eps - cfg.verify_tol;
    r.result["riesz"] = {{"norm_z", luxemburg_norm(w.z, p)}, {"distance_u_to_L", w.distance},
                         {"min_sampled_distance", dist}, {"threshold", 1.0 - eps},
                         {"certified", w.certified}, {"violations", fails ? 1 : 0}};
    if (fails) ++violations;
  }
  r.result["violations"] = violations;
  emit(cfg, r);
  return violations == 0 ? ok : violation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-exponent sequence spaces: norms, embeddings, witnesses, Bernstein numbers"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--D", cfg.D, "truncation dimension")->check(CLI::PositiveNumber);
    sub->add_option("--seed", cfg.seed, "random seed");
    sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"table", "rows", "structured"}));
    sub->add_option("--out", cfg.out, "write the report here instead of stdout");
  };

  auto* norm = app.add_subcommand("norm", "modular, Luxemburg quasi-norm and sup norm of a sequence");
  norm->add_option("--p", cfg.p_path, "exponent file");
  norm->add_option("--seq", cfg.seq_path, "sequence file");
  norm->add_option("--tol", cfg.tolerance, "relative bisection tolerance");
  common(norm);

  auto* classify = app.add_subcommand("classify", "decide the embeddings between l_p and l_q");
  classify->add_option("--p", cfg.p_path, "exponent file for p");
  classify->add_option("--q", cfg.q_path, "exponent file for q");
  common(classify);

  auto* witness = app.add_subcommand("witness", "build and verify a sequence refuting l_q -> l_p");
  witness->add_option("--p", cfg.p_path, "exponent file for p");
  witness->add_option("--q", cfg.q_path, "exponent file for q");
  witness->add_option("--K", cfg.K, "scale K > 1");
  witness->add_option("--epsilon", cfg.epsilon, "scaled variant: epsilon in (0, 1]");
  witness->add_option("--blocks", cfg.blocks, "number of blocks (per group for --groups)");
  witness->add_option("--groups", cfg.groups, "universal variant refuting every K <= groups");
  witness->add_option("--table", cfg.table_path, "write the run table (CSV) here");
  witness->add_option("--verify-tol", cfg.verify_tol, "verification tolerance");
  common(witness);

  auto* bern = app.add_subcommand("bernstein", "Bernstein number bounds, estimates and singularity");
  bern->add_option("--p", cfg.p_path, "exponent file for p");
  bern->add_option("--q", cfg.q_path, "exponent file for q");
  bern->add_option("--n", cfg.n, "largest subspace dimension");
  bern->add_option("--starts", cfg.starts, "multistarts per subspace")->check(CLI::PositiveNumber);
  bern->add_flag("--reversed", cfg.reversed, "estimate l_q -> l_p after eliminating {p_n < q_n}");
  common(bern);

  auto* topo = app.add_subcommand("topology", "ball inclusions and Riesz witness");
  topo->add_option("--p", cfg.p_path, "exponent file");
  topo->add_option("--epsilon", cfg.epsilon, "ball radius in (0, 1)");
  topo->add_option("--samples", cfg.samples, "samples per check")->check(CLI::PositiveNumber);
  topo->add_option("--inflate", cfg.inflate, "multiply the inclusion radii (negative control)");
  topo->add_option("--dimL", cfg.subspace_dim, "dimension of the Riesz subspace (0 skips)");
  topo->add_option("--verify-tol", cfg.verify_tol, "distance check tolerance");
  common(topo);

  for (auto* sub : {norm, classify, witness, bern, topo}) sub->add_option("--c", cfg.c, "criterion constant c");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : parse_error;
  }

  try {
    if (*norm) return cfg.command = "norm", cmd_norm(cfg);
    if (*classify) return cfg.command = "classify", cmd_classify(cfg);
    if (*witness) return cfg.command = "witness", cmd_witness(cfg);
    if (*bern) return cfg.command = "bernstein", cmd_bernstein(cfg);
    if (*topo) return cfg.command = "topology", cmd_topology(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return parse_error;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return precondition;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return violation;
  }
  return ok;
}
