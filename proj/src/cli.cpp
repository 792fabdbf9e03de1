#include "ofl/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ofl/adversary.hpp"
#include "ofl/core.hpp"
#include "ofl/mechanisms.hpp"
#include "ofl/objectives.hpp"
#include "ofl/optima.hpp"
#include "ofl/truthfulness.hpp"
#include "ofl/witnesses.hpp"

namespace ofl {
namespace {

using json = nlohmann::ordered_json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Formatting helpers.
// ---------------------------------------------------------------------------

// JSON has no infinity literal; use the same lowercase sentinel as the CSVs.
json json_real(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  if (std::isnan(v)) return json("nan");
  return json(v);
}

json json_profile(const Profile& x) {
  json arr = json::array();
  for (double v : x.locations()) arr.push_back(v);
  return arr;
}

// The exponent column: a number for the finite families, direction tags for
// the limit objectives.
std::string p_tag(const ObjectiveSpec& spec) {
  switch (spec.kind) {
    case ObjectiveKind::Su:
    case ObjectiveKind::Sc:
      return format_real(spec.p);
    case ObjectiveKind::SuMax:
    case ObjectiveKind::ScMax:
      return "inf";
    case ObjectiveKind::SuMin:
      return "-inf";
    case ObjectiveKind::SuGeoMean:
      return "0+";
  }
  return "?";
}

json json_p(const ObjectiveSpec& spec) {
  if (spec.kind == ObjectiveKind::Su || spec.kind == ObjectiveKind::Sc) {
    return json(spec.p);
  }
  return json(p_tag(spec));
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string quoted = "\"";
  for (char c : cell) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string join_csv(const std::vector<std::string>& cells) {
  std::string line;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += csv_escape(cells[i]);
  }
  return line;
}

std::string join_profile(const Profile& x) {
  std::string s;
  for (int i = 0; i < x.n(); ++i) {
    if (i) s += ';';
    s += format_real(x[i]);
  }
  return s;
}

void emit(const std::string& path, const std::string& content,
          std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open output file: " + path);
  f << content;
}

// ---------------------------------------------------------------------------
// Input parsing helpers.
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_real_token(const std::string& raw) {
  const std::string tok = trim(raw);
  if (tok.empty()) throw ConfigError("empty numeric token");
  if (tok == "inf" || tok == "+inf") return kInf;
  if (tok == "-inf") return -kInf;
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw ConfigError("trailing junk in '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    throw ConfigError("not a number: '" + tok + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("number out of range: '" + tok + "'");
  }
}

std::vector<double> parse_real_list(const std::string& csv) {
  std::vector<double> vals;
  std::string cur;
  std::stringstream ss(csv);
  while (std::getline(ss, cur, ',')) vals.push_back(parse_real_token(cur));
  if (vals.empty()) throw ConfigError("empty list: '" + csv + "'");
  return vals;
}

// Grid steps accept a plain decimal ("0.02") or a fraction ("1/50").
double parse_step(const std::string& raw) {
  const std::string tok = trim(raw);
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return parse_real_token(tok);
  const double num = parse_real_token(tok.substr(0, slash));
  const double den = parse_real_token(tok.substr(slash + 1));
  if (den == 0.0) throw ConfigError("zero denominator in step '" + tok + "'");
  return num / den;
}

// Inline comma list or a one-value-per-line file; exactly one source.
Profile load_profile(const std::string& inline_list,
                     const std::string& file_path) {
  if (!inline_list.empty() && !file_path.empty()) {
    throw ConfigError("give either --profile or --profile-file, not both");
  }
  if (!inline_list.empty()) return Profile::make(parse_real_list(inline_list));
  if (file_path.empty()) {
    throw ConfigError("a profile is required (--profile or --profile-file)");
  }
  std::ifstream f(file_path);
  if (!f) throw ConfigError("cannot open profile file: " + file_path);
  std::vector<double> vals;
  std::string line;
  while (std::getline(f, line)) {
    std::string cell = trim(line);
    if (!cell.empty() && cell.back() == ',') cell.pop_back();
    cell = trim(cell);
    if (cell.empty() || cell[0] == '#') continue;
    vals.push_back(parse_real_token(cell));
  }
  return Profile::make(std::move(vals));
}

// Same ratio semantics as ratio_at, for evaluations under an explicitly
// chosen convention.
double safe_ratio(bool utility, double alg, double opt) {
  const double num = utility ? opt : alg;
  const double den = utility ? alg : opt;
  if (den <= 0.0) return num <= 0.0 ? 1.0 : kInf;
  return num / den;
}

// ---------------------------------------------------------------------------
// Report serialization.
// ---------------------------------------------------------------------------

json report_json(const RatioReport& rep) {
  json j;
  j["mechanism"] = rep.mechanism.name();
  j["objective"] = rep.objective.name();
  j["worst_ratio"] = json_real(rep.worst_ratio);
  j["witness"] = json_profile(rep.witness);
  j["claimed"] = rep.claimed ? json_real(*rep.claimed) : json(nullptr);
  j["slack"] = rep.slack ? json_real(*rep.slack) : json(nullptr);
  j["conjecture"] = rep.conjecture;
  j["falsification"] = rep.falsification;
  j["unbounded"] = rep.unbounded;
  j["config"] = {
      {"n_min", rep.config.n_min},
      {"n_max", rep.config.n_max},
      {"grid_step", json_real(rep.config.grid_step)},
      {"restarts", rep.config.restarts},
      {"seed", rep.config.seed},
      {"policy",
       rep.config.policy == ExecPolicy::Serial ? "serial" : "parallel"},
  };
  return j;
}

std::vector<std::string> report_csv_cells(const RatioReport& rep) {
  return {
      rep.mechanism.name(),
      rep.objective.name(),
      format_real(rep.worst_ratio),
      join_profile(rep.witness),
      rep.claimed ? format_real(*rep.claimed) : std::string(),
      rep.slack ? format_real(*rep.slack) : std::string(),
      rep.conjecture ? "true" : "false",
      rep.falsification ? "true" : "false",
      rep.unbounded ? "true" : "false",
  };
}

json witness_to_json(const DeviationWitness& w) {
  json j;
  j["profile"] = json_profile(w.profile);
  j["agents"] = w.agent_set;
  j["misreports"] = w.misreports;
  j["gains"] = w.gain_per_agent;
  return j;
}

// ---------------------------------------------------------------------------
// The reproduction table.
// ---------------------------------------------------------------------------

struct TableRow {
  std::string objective;
  std::string p;
  std::string family;  // mechanism_or_family
  double claimed = 0.0;
  double found = 0.0;
  std::string method;
  double slack = 0.0;
  std::string status;
};

std::vector<TableRow> build_reproduction_table(double grid_step,
                                               ExecPolicy policy,
                                               uint64_t budget) {
  std::vector<TableRow> rows;

  SearchConfig base;
  base.grid_step = grid_step;
  base.policy = policy;
  base.max_evals = budget;

  const std::string search_method = "worst-case search n=2 grid+climb";

  auto add_search = [&](const MechanismSpec& mech, const ObjectiveSpec& spec) {
    RatioReport rep = search_worst_ratio(mech, spec, base);
    TableRow row;
    row.objective = spec.is_utility() ? "su" : "sc";
    row.p = p_tag(spec);
    row.family = mech.name();
    row.claimed =
        rep.claimed ? *rep.claimed : std::numeric_limits<double>::quiet_NaN();
    row.found = rep.worst_ratio;
    row.method = search_method;
    row.slack = row.claimed - row.found;
    if (rep.falsification) {
      row.status = "FALSIFICATION";
    } else if (rep.conjecture) {
      row.status = "CONJECTURE";
    } else if (row.found >= row.claimed - 0.01 * std::max(1.0, row.claimed)) {
      row.status = "TIGHT-AT-DESK-SCALE";
    } else {
      row.status = "BOUND-RESPECTED";
    }
    rows.push_back(row);
  };

  auto add_check = [&](const std::string& objective, const std::string& p,
                       const std::string& family, double claimed, double found,
                       const std::string& method, double tol,
                       const std::string& pass_status) {
    TableRow row;
    row.objective = objective;
    row.p = p;
    row.family = family;
    row.claimed = claimed;
    row.found = found;
    row.method = method;
    row.slack = std::abs(found - claimed);
    row.status = row.slack <= tol ? pass_status : "FALSIFICATION";
    rows.push_back(row);
  };

  auto add_unbounded = [&](const ObjectiveSpec& spec) {
    const Profile x = Profile::make({0.0, 1.0});
    const double r = ratio_at(MechanismSpec::majority_vote(), spec, x);
    TableRow row;
    row.objective = "su";
    row.p = p_tag(spec);
    row.family = "majority-vote";
    row.claimed = kInf;
    row.found = r;
    row.method = "exhibit profile=(0;1)";
    row.slack = 0.0;
    row.status = std::isinf(r) ? "UNBOUNDED-EXHIBITED" : "FALSIFICATION";
    rows.push_back(row);
  };

  const std::string lp_method = "constrained-lottery profile=(1/3;1)";

  auto add_su_lp = [&](double p) {
    const SuLowerBoundRow row = lower_bound_curve_su({p})[0];
    add_check("su", std::isinf(p) ? "inf" : format_real(p), "extremal-lottery",
              row.r_formula, row.r_lp, lp_method, 1e-9, "WITNESS-REPRODUCED");
  };

  auto add_sc_lp = [&](double p) {
    const ConstrainedDistProblem prob{
        Profile::make({1.0 / 3.0, 1.0}), ObjectiveSpec::sc(p),
        2.0 / 3.0,                       0.5,
        ConstrainedDistProblem::Sense::Min, {}};
    const ExtremalSolution sol = solve_extremal_distribution(prob);
    const double opt = opt_best(prob.objective, prob.profile).value;
    add_check("sc", format_real(p), "extremal-lottery",
              std::pow(1.25, 1.0 / p), sol.value / opt, lp_method, 1e-9,
              "WITNESS-REPRODUCED");
  };

  // --- su, p = +inf -------------------------------------------------------
  add_search(MechanismSpec::majority_vote(), ObjectiveSpec::su_max());
  add_su_lp(kInf);
  add_search(MechanismSpec::power_weighted(kInf), ObjectiveSpec::su_max());

  // --- su, 1 <= p < inf ---------------------------------------------------
  for (double p : {1.0, 2.0}) {
    add_search(MechanismSpec::majority_vote(), ObjectiveSpec::su(p));
    add_su_lp(p);
    add_search(MechanismSpec::power_weighted(p), ObjectiveSpec::su(p));
  }

  // --- su, 0 < p < 1 ------------------------------------------------------
  add_search(MechanismSpec::majority_vote(), ObjectiveSpec::su(0.5));
  add_su_lp(0.5);
  add_search(MechanismSpec::power_weighted(0.5), ObjectiveSpec::su(0.5));

  // --- su, p -> 0+ (geometric mean) ---------------------------------------
  add_unbounded(ObjectiveSpec::su_geomean());
  {
    const GeoMeanScanResult scan = geomean_extremal_scan();
    add_check("su", "0+", "extremal-lottery", std::sqrt(1.2),
              std::sqrt(scan.ratio_sq), "mixture scan atoms={0;2/3}", 1e-6,
              "WITNESS-REPRODUCED");
    const PerAgentRatioBound agent = uniform_per_agent_bound(1e-5);
    add_check("su", "0+", "uniform", std::sqrt(2.0) + 1.0, agent.worst_ratio,
              "per-agent scan grid=1e-5", 1e-4, "TIGHT-AT-DESK-SCALE");
  }

  // --- su, p = -inf (minimum utility) --------------------------------------
  add_unbounded(ObjectiveSpec::su_min());
  {
    const MinUtilityN2Bound mu = min_utility_n2_bound();
    add_check("su", "-inf", "endpoint-lottery chain n=2", 1.025909,
              1.0 + mu.epsilon, "scalar chain optimization", 1e-4,
              "WITNESS-REPRODUCED");
    const std::vector<FamilyRatioPoint> fam =
        min_utility_family_curve({4, 16, 64, 256});
    add_check("su", "-inf", "uniform", 0.5, loglog_slope(fam),
              "loglog growth fit n={4;16;64;256}", 0.1, "BOUND-RESPECTED");
  }

  // --- sc, p = +inf (maximum cost) -----------------------------------------
  add_search(MechanismSpec::majority_vote(), ObjectiveSpec::sc_max());
  {
    const MaxCostLowerBound mc = max_cost_lower_bound();
    add_check("sc", "inf", "endpoint-lottery chain n=2", 1.008,
              mc.reference_ratio, "scalar chain optimization", 1e-3,
              "WITNESS-REPRODUCED");
  }
  add_search(MechanismSpec::square_weighted(), ObjectiveSpec::sc_max());

  // --- sc, 1 <= p < inf ----------------------------------------------------
  add_search(MechanismSpec::majority_vote(), ObjectiveSpec::sc(2.0));
  add_sc_lp(2.0);
  add_search(MechanismSpec::square_weighted(), ObjectiveSpec::sc(2.0));

  // --- sc, p = 1 ------------------------------------------------------------
  add_search(MechanismSpec::majority_vote(), ObjectiveSpec::sc(1.0));
  add_sc_lp(1.0);
  add_search(MechanismSpec::square_weighted(), ObjectiveSpec::sc(1.0));

  return rows;
}

std::string table_to_csv(const std::vector<TableRow>& rows) {
  std::string csv =
      "objective,p,mechanism_or_family,claimed,found_or_verified,method,"
      "slack,status\n";
  for (const TableRow& row : rows) {
    csv += join_csv({row.objective, row.p, row.family,
                     format_real(row.claimed), format_real(row.found),
                     row.method, format_real(row.slack), row.status});
    csv += '\n';
  }
  return csv;
}

json table_to_json(const std::vector<TableRow>& rows) {
  json arr = json::array();
  for (const TableRow& row : rows) {
    arr.push_back({{"objective", row.objective},
                   {"p", row.p},
                   {"mechanism_or_family", row.family},
                   {"claimed", json_real(row.claimed)},
                   {"found_or_verified", json_real(row.found)},
                   {"method", row.method},
                   {"slack", json_real(row.slack)},
                   {"status", row.status}});
  }
  return arr;
}

// ---------------------------------------------------------------------------
// Subcommand runners.
// ---------------------------------------------------------------------------

struct CommonOut {
  std::string format = "json";
  std::string output = "-";
};

int cmd_evaluate(const std::string& mech_name, const std::string& obj_name,
                 const std::string& profile_inline,
                 const std::string& profile_file,
                 const std::string& convention, const CommonOut& io,
                 std::ostream& out) {
  const MechanismSpec mech = MechanismSpec::parse(mech_name);
  const ObjectiveSpec spec = ObjectiveSpec::parse(obj_name);
  const Profile x = load_profile(profile_inline, profile_file);
  const FacilityDistribution dist = run_mechanism(mech, x);

  ObjectiveValue v{};
  if (convention == "default") {
    v = eval_default(spec, x, dist);
  } else if (convention == "expected-aggregate") {
    v = eval_expected_aggregate(spec, x, dist);
  } else if (convention == "aggregate-of-expectations") {
    v = eval_aggregate_of_expectations(spec, x, dist);
  } else {
    throw ConfigError("unknown convention: " + convention);
  }

  const OptResult opt = opt_best(spec, x);
  const double ratio = safe_ratio(spec.is_utility(), v.value, opt.value);

  if (io.format == "csv") {
    std::string csv =
        "mechanism,objective,p,profile,alg,opt,opt_location,ratio,"
        "convention\n";
    csv += join_csv({mech.name(), spec.name(), p_tag(spec), join_profile(x),
                     format_real(v.value), format_real(opt.value),
                     format_real(opt.argmax_or_argmin), format_real(ratio),
                     convention_name(v.convention)});
    csv += '\n';
    emit(io.output, csv, out);
  } else {
    json j;
    j["mechanism"] = mech.name();
    j["objective"] = spec.name();
    j["p"] = json_p(spec);
    j["profile"] = json_profile(x);
    j["alg"] = json_real(v.value);
    j["opt"] = json_real(opt.value);
    j["opt_location"] = json_real(opt.argmax_or_argmin);
    j["ratio"] = json_real(ratio);
    j["convention"] = convention_name(v.convention);
    emit(io.output, j.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_optimize(const std::string& obj_name,
                 const std::string& profile_inline,
                 const std::string& profile_file, const std::string& method,
                 double grid_step, const CommonOut& io, std::ostream& out) {
  const ObjectiveSpec spec = ObjectiveSpec::parse(obj_name);
  const Profile x = load_profile(profile_inline, profile_file);
  OptResult opt{};
  if (method == "auto") {
    opt = opt_best(spec, x);
  } else if (method == "grid") {
    opt = opt_grid(spec, x, grid_step);
  } else {
    throw ConfigError("unknown method: " + method + " (auto|grid)");
  }

  if (io.format == "csv") {
    std::string csv = "objective,p,profile,opt,opt_location,method\n";
    csv += join_csv({spec.name(), p_tag(spec), join_profile(x),
                     format_real(opt.value),
                     format_real(opt.argmax_or_argmin),
                     opt_method_name(opt.method)});
    csv += '\n';
    emit(io.output, csv, out);
  } else {
    json j;
    j["objective"] = spec.name();
    j["p"] = json_p(spec);
    j["profile"] = json_profile(x);
    j["opt"] = json_real(opt.value);
    j["opt_location"] = json_real(opt.argmax_or_argmin);
    j["method"] = opt_method_name(opt.method);
    emit(io.output, j.dump(2) + "\n", out);
  }
  return 0;
}

int cmd_verify(bool gsp, const std::string& mech_name, int n,
               const std::string& step_raw, int max_coalition,
               const TruthCheckConfig& cfg, const CommonOut& io,
               std::ostream& out) {
  const MechanismSpec mech = MechanismSpec::parse(mech_name);
  const double step = parse_step(step_raw);
  std::optional<DeviationWitness> w;
  if (gsp) {
    w = check_gsp(mech, n, step, max_coalition, cfg);
  } else {
    w = check_sp(mech, n, step, cfg);
  }

  json j;
  j["mechanism"] = mech.name();
  j["mode"] = gsp ? "gsp" : "sp";
  j["n"] = n;
  j["grid_step"] = json_real(step);
  if (gsp) j["max_coalition"] = max_coalition;
  j["result"] = w ? "witness" : "no witness";
  if (w) {
    j["witness"] = witness_to_json(*w);
    j["replayed_gains"] = replay_witness_gains(mech, *w);
  }
  emit(io.output, j.dump(2) + "\n", out);
  return w ? 1 : 0;
}

int cmd_search_ratio(const std::string& mech_name, const std::string& obj_name,
                     const SearchConfig& cfg, const CommonOut& io,
                     std::ostream& out) {
  const MechanismSpec mech = MechanismSpec::parse(mech_name);
  const ObjectiveSpec spec = ObjectiveSpec::parse(obj_name);
  const RatioReport rep = search_worst_ratio(mech, spec, cfg);

  if (io.format == "csv") {
    std::string csv =
        "mechanism,objective,worst_ratio,witness,claimed,slack,conjecture,"
        "falsification,unbounded\n";
    csv += join_csv(report_csv_cells(rep));
    csv += '\n';
    emit(io.output, csv, out);
  } else {
    emit(io.output, report_json(rep).dump(2) + "\n", out);
  }
  return rep.falsification ? 1 : 0;
}

int cmd_bound_curve(const std::string& mech_name, const std::string& family,
                    const std::string& p_list, const SearchConfig& cfg,
                    const CommonOut& io, std::ostream& out) {
  const MechanismSpec mech = MechanismSpec::parse(mech_name);
  const std::vector<double> ps = parse_real_list(p_list);
  const std::vector<RatioReport> reports = bound_curve(mech, family, ps, cfg);

  bool falsified = false;
  for (const RatioReport& rep : reports) falsified |= rep.falsification;

  if (io.format == "json") {
    json arr = json::array();
    for (size_t i = 0; i < reports.size(); ++i) {
      json j = report_json(reports[i]);
      j["family"] = family;
      j["p"] = json_real(ps[i]);
      arr.push_back(std::move(j));
    }
    emit(io.output, arr.dump(2) + "\n", out);
  } else {
    std::string csv =
        "family,p,mechanism,objective,worst_ratio,witness,claimed,slack,"
        "conjecture,falsification,unbounded\n";
    for (size_t i = 0; i < reports.size(); ++i) {
      std::vector<std::string> cells = {family, format_real(ps[i])};
      const std::vector<std::string> rest = report_csv_cells(reports[i]);
      cells.insert(cells.end(), rest.begin(), rest.end());
      csv += join_csv(cells);
      csv += '\n';
    }
    emit(io.output, csv, out);
  }
  return falsified ? 1 : 0;
}

int cmd_reproduce_table(double grid_step, ExecPolicy policy, uint64_t budget,
                        const CommonOut& io, std::ostream& out) {
  const std::vector<TableRow> rows =
      build_reproduction_table(grid_step, policy, budget);
  if (io.format == "json") {
    emit(io.output, table_to_json(rows).dump(2) + "\n", out);
  } else {
    emit(io.output, table_to_csv(rows), out);
  }
  for (const TableRow& row : rows) {
    if (row.status == "FALSIFICATION") return 1;
  }
  return 0;
}

int cmd_witnesses(const std::string& p_list, const CommonOut& io,
                  std::ostream& out) {
  const std::vector<double> ps = parse_real_list(p_list);
  const std::vector<SuLowerBoundRow> curve = lower_bound_curve_su(ps);
  const MinUtilityN2Bound mu = min_utility_n2_bound();
  const MaxCostLowerBound mc = max_cost_lower_bound();
  const GeoMeanScanResult scan = geomean_extremal_scan();
  const std::vector<FamilyRatioPoint> fam =
      min_utility_family_curve({4, 16, 64, 256});
  const double slope = loglog_slope(fam);
  const PerAgentRatioBound agent = uniform_per_agent_bound(1e-5);
  std::vector<TwoCandidateScBound> two_cand;
  for (double p : {1.0, 2.0, 4.0}) two_cand.push_back(two_candidate_sc_bound(p));
  const double two_cand_max = two_candidate_sc_max_bound();

  if (io.format == "csv") {
    std::string csv = "section,key,value\n";
    auto add = [&csv](const std::string& section, const std::string& key,
                      double value) {
      csv += join_csv({section, key, format_real(value)});
      csv += '\n';
    };
    for (const SuLowerBoundRow& row : curve) {
      const std::string tag = "p=" + format_real(row.p);
      add("su-lower-curve", tag + ":r_formula", row.r_formula);
      add("su-lower-curve", tag + ":r_lp", row.r_lp);
      add("su-lower-curve", tag + ":r_rooted_mixture", row.r_rooted_mixture);
    }
    add("min-utility-n2", "delta", mu.delta);
    add("min-utility-n2", "epsilon", mu.epsilon);
    add("min-utility-n2", "ratio_bound", 1.0 + mu.epsilon);
    add("max-cost", "reference_ratio", mc.reference_ratio);
    add("max-cost", "optimized_ratio", mc.optimized_ratio);
    add("max-cost", "optimized_delta", mc.optimized_delta);
    for (const TwoCandidateScBound& b : two_cand) {
      const std::string tag = "p=" + format_real(b.p);
      add("two-candidate-sc", tag + ":p_power_bound", b.p_power_bound);
      add("two-candidate-sc", tag + ":ratio_bound", b.ratio_bound);
      add("two-candidate-sc", tag + ":achieved_p_power", b.achieved_p_power);
    }
    add("two-candidate-sc", "max-cost:ratio", two_cand_max);
    add("geomean-scan", "q", scan.q);
    add("geomean-scan", "alg_sq", scan.alg_sq);
    add("geomean-scan", "opt_sq", scan.opt_sq);
    add("geomean-scan", "ratio_sq", scan.ratio_sq);
    for (const FamilyRatioPoint& pt : fam) {
      const std::string tag = "n=" + std::to_string(pt.n);
      add("min-utility-family", tag + ":alg", pt.alg);
      add("min-utility-family", tag + ":opt", pt.opt);
      add("min-utility-family", tag + ":ratio", pt.ratio);
    }
    add("min-utility-family", "loglog_slope", slope);
    add("uniform-per-agent", "worst_x", agent.worst_x);
    add("uniform-per-agent", "worst_ratio", agent.worst_ratio);
    emit(io.output, csv, out);
  } else {
    json j;
    json curve_arr = json::array();
    for (const SuLowerBoundRow& row : curve) {
      curve_arr.push_back({{"p", json_real(row.p)},
                           {"r_formula", json_real(row.r_formula)},
                           {"r_lp", json_real(row.r_lp)},
                           {"r_rooted_mixture",
                            json_real(row.r_rooted_mixture)}});
    }
    j["su_lower_bound_curve"] = std::move(curve_arr);
    j["min_utility_n2"] = {{"delta", mu.delta},
                           {"epsilon", mu.epsilon},
                           {"ratio_bound", 1.0 + mu.epsilon}};
    j["max_cost"] = {{"reference_ratio", mc.reference_ratio},
                     {"optimized_ratio", mc.optimized_ratio},
                     {"optimized_delta", mc.optimized_delta}};
    json tc = json::array();
    for (const TwoCandidateScBound& b : two_cand) {
      tc.push_back({{"p", b.p},
                    {"p_power_bound", b.p_power_bound},
                    {"ratio_bound", b.ratio_bound},
                    {"witness", json_profile(b.witness)},
                    {"achieved_p_power", b.achieved_p_power}});
    }
    j["two_candidate_sc"] = std::move(tc);
    j["two_candidate_sc_max"] = {{"ratio", two_cand_max}};
    j["geomean_scan"] = {{"q", scan.q},
                         {"alg_sq", scan.alg_sq},
                         {"opt_sq", scan.opt_sq},
                         {"ratio_sq", scan.ratio_sq}};
    json fam_arr = json::array();
    for (const FamilyRatioPoint& pt : fam) {
      fam_arr.push_back({{"n", pt.n},
                         {"alg", pt.alg},
                         {"opt", pt.opt},
                         {"ratio", pt.ratio}});
    }
    j["min_utility_family"] = {{"points", std::move(fam_arr)},
                               {"loglog_slope", slope}};
    j["uniform_per_agent"] = {{"worst_x", agent.worst_x},
                              {"worst_ratio", agent.worst_ratio}};
    emit(io.output, j.dump(2) + "\n", out);
  }
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------
// Argument wiring.
// ---------------------------------------------------------------------------

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  register_builtin_custom_mechanisms();

  CLI::App app{
      "Obnoxious facility location on [0,1]: mechanism evaluation, "
      "optimal-value computation, strategyproofness verification, and "
      "worst-case ratio searches."};
  app.require_subcommand(1);

  // --- evaluate -----------------------------------------------------------
  auto* c_eval = app.add_subcommand(
      "evaluate", "Evaluate a mechanism against an objective on one profile");
  std::string ev_mech, ev_obj, ev_profile, ev_profile_file;
  std::string ev_convention = "default";
  CommonOut ev_io;
  c_eval->add_option("--mechanism", ev_mech, "Mechanism name")->required();
  c_eval->add_option("--objective", ev_obj, "Objective name")->required();
  c_eval->add_option("--profile", ev_profile, "Inline comma-separated profile");
  c_eval->add_option("--profile-file", ev_profile_file,
                     "One-column file of locations");
  c_eval->add_option("--convention", ev_convention,
                     "Randomized-evaluation convention")
      ->check(CLI::IsMember(
          {"default", "expected-aggregate", "aggregate-of-expectations"}));
  c_eval->add_option("--format", ev_io.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_eval->add_option("--output", ev_io.output, "Output path ('-' = stdout)");

  // --- optimize -----------------------------------------------------------
  auto* c_opt = app.add_subcommand(
      "optimize", "Compute the optimal facility value for one profile");
  std::string op_obj, op_profile, op_profile_file;
  std::string op_method = "auto";
  double op_grid_step = 0.005;
  CommonOut op_io;
  c_opt->add_option("--objective", op_obj, "Objective name")->required();
  c_opt->add_option("--profile", op_profile, "Inline comma-separated profile");
  c_opt->add_option("--profile-file", op_profile_file,
                    "One-column file of locations");
  c_opt->add_option("--method", op_method, "auto|grid")
      ->check(CLI::IsMember({"auto", "grid"}));
  c_opt->add_option("--grid-step", op_grid_step,
                    "Grid resolution for --method grid (in (0, 0.01])");
  c_opt->add_option("--format", op_io.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_opt->add_option("--output", op_io.output, "Output path ('-' = stdout)");

  // --- verify-sp / verify-gsp ----------------------------------------------
  std::string vs_mech, vs_step = "0.02";
  int vs_n = 2;
  uint64_t vs_budget = default_eval_budget();
  bool vs_serial = false;
  CommonOut vs_io;
  auto* c_vsp = app.add_subcommand(
      "verify-sp", "Exhaustive single-agent deviation search on a grid");
  c_vsp->add_option("--mechanism", vs_mech, "Mechanism name")->required();
  c_vsp->add_option("--n", vs_n, "Number of agents (1..4)");
  c_vsp->add_option("--grid-step", vs_step, "Grid step, decimal or 1/k");
  c_vsp->add_option("--budget", vs_budget, "Evaluation budget");
  c_vsp->add_flag("--serial", vs_serial, "Force the serial reference path");
  c_vsp->add_option("--output", vs_io.output, "Output path ('-' = stdout)");

  std::string vg_mech, vg_step = "0.02";
  int vg_n = 2;
  int vg_coalition = 0;  // 0 = up to n
  uint64_t vg_budget = default_eval_budget();
  bool vg_serial = false;
  CommonOut vg_io;
  auto* c_vgsp = app.add_subcommand(
      "verify-gsp", "Exhaustive coalition deviation search on a grid");
  c_vgsp->add_option("--mechanism", vg_mech, "Mechanism name")->required();
  c_vgsp->add_option("--n", vg_n, "Number of agents (1..3)");
  c_vgsp->add_option("--grid-step", vg_step, "Grid step, decimal or 1/k");
  c_vgsp->add_option("--max-coalition", vg_coalition,
                     "Largest coalition size (default n)");
  c_vgsp->add_option("--budget", vg_budget, "Evaluation budget");
  c_vgsp->add_flag("--serial", vg_serial, "Force the serial reference path");
  c_vgsp->add_option("--output", vg_io.output, "Output path ('-' = stdout)");

  // --- search-ratio ---------------------------------------------------------
  auto* c_search = app.add_subcommand(
      "search-ratio", "Search the worst-case approximation ratio");
  std::string sr_mech, sr_obj;
  SearchConfig sr_cfg;
  CommonOut sr_io;
  bool sr_serial = false;
  c_search->add_option("--mechanism", sr_mech, "Mechanism name")->required();
  c_search->add_option("--objective", sr_obj, "Objective name")->required();
  c_search->add_option("--n-min", sr_cfg.n_min, "Smallest profile size");
  c_search->add_option("--n-max", sr_cfg.n_max, "Largest profile size");
  c_search->add_option("--grid-step", sr_cfg.grid_step,
                       "Phase-1 grid resolution / initial climb step");
  c_search->add_option("--restarts", sr_cfg.restarts,
                       "Random climb starts per profile size");
  auto* sr_seed_opt =
      c_search->add_option("--seed", sr_cfg.seed, "RNG seed for restarts");
  c_search->add_option("--budget", sr_cfg.max_evals, "Evaluation budget");
  c_search->add_flag("--serial", sr_serial, "Force the serial reference path");
  c_search->add_option("--format", sr_io.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_search->add_option("--output", sr_io.output, "Output path ('-' = stdout)");

  // --- bound-curve ----------------------------------------------------------
  auto* c_curve = app.add_subcommand(
      "bound-curve", "Worst-ratio search across a family of exponents");
  std::string bc_mech, bc_family, bc_pvals;
  SearchConfig bc_cfg;
  CommonOut bc_io;
  bc_io.format = "csv";
  bool bc_serial = false;
  c_curve->add_option("--mechanism", bc_mech, "Mechanism name")->required();
  c_curve->add_option("--family", bc_family, "Objective family")
      ->required()
      ->check(CLI::IsMember({"su", "sc"}));
  c_curve
      ->add_option("--p-values", bc_pvals,
                   "Comma-separated exponents ('inf' = max variant)")
      ->required();
  c_curve->add_option("--n-min", bc_cfg.n_min, "Smallest profile size");
  c_curve->add_option("--n-max", bc_cfg.n_max, "Largest profile size");
  c_curve->add_option("--grid-step", bc_cfg.grid_step,
                      "Phase-1 grid resolution / initial climb step");
  c_curve->add_option("--restarts", bc_cfg.restarts,
                      "Random climb starts per profile size");
  auto* bc_seed_opt =
      c_curve->add_option("--seed", bc_cfg.seed, "RNG seed for restarts");
  c_curve->add_option("--budget", bc_cfg.max_evals, "Evaluation budget");
  c_curve->add_flag("--serial", bc_serial, "Force the serial reference path");
  c_curve->add_option("--format", bc_io.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_curve->add_option("--output", bc_io.output, "Output path ('-' = stdout)");

  // --- reproduce-table -------------------------------------------------------
  auto* c_table = app.add_subcommand(
      "reproduce-table",
      "Re-derive the headline bound table at desk scale, one row per bound");
  double rt_grid_step = 0.005;
  uint64_t rt_budget = default_eval_budget();
  bool rt_serial = false;
  CommonOut rt_io;
  rt_io.format = "csv";
  c_table->add_option("--grid-step", rt_grid_step,
                      "Search resolution for the per-mechanism rows");
  c_table->add_option("--budget", rt_budget, "Evaluation budget");
  c_table->add_flag("--serial", rt_serial, "Force the serial reference path");
  c_table->add_option("--format", rt_io.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_table->add_option("--output", rt_io.output, "Output path ('-' = stdout)");

  // --- witnesses --------------------------------------------------------------
  auto* c_wit = app.add_subcommand(
      "witnesses", "Run the full lower-bound construction suite");
  std::string wt_pvals = "0.5,1,2,4,8,16,32,64,inf";
  CommonOut wt_io;
  c_wit->add_option("--p-values", wt_pvals,
                    "Exponents for the lower-bound curve");
  c_wit->add_option("--format", wt_io.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  c_wit->add_option("--output", wt_io.output, "Output path ('-' = stdout)");

  // --- parse ------------------------------------------------------------------
  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_eval->parsed()) {
      return cmd_evaluate(ev_mech, ev_obj, ev_profile, ev_profile_file,
                          ev_convention, ev_io, out);
    }
    if (c_opt->parsed()) {
      return cmd_optimize(op_obj, op_profile, op_profile_file, op_method,
                          op_grid_step, op_io, out);
    }
    if (c_vsp->parsed()) {
      const TruthCheckConfig cfg{
          vs_serial ? ExecPolicy::Serial : ExecPolicy::Parallel, vs_budget};
      return cmd_verify(false, vs_mech, vs_n, vs_step, 0, cfg, vs_io, out);
    }
    if (c_vgsp->parsed()) {
      const TruthCheckConfig cfg{
          vg_serial ? ExecPolicy::Serial : ExecPolicy::Parallel, vg_budget};
      const int coalition = vg_coalition > 0 ? vg_coalition : vg_n;
      return cmd_verify(true, vg_mech, vg_n, vg_step, coalition, cfg, vg_io,
                        out);
    }
    if (c_search->parsed()) {
      if (sr_cfg.restarts > 0 && sr_seed_opt->count() == 0) {
        throw ConfigError("--seed is required when --restarts > 0");
      }
      sr_cfg.policy = sr_serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
      return cmd_search_ratio(sr_mech, sr_obj, sr_cfg, sr_io, out);
    }
    if (c_curve->parsed()) {
      if (bc_cfg.restarts > 0 && bc_seed_opt->count() == 0) {
        throw ConfigError("--seed is required when --restarts > 0");
      }
      bc_cfg.policy = bc_serial ? ExecPolicy::Serial : ExecPolicy::Parallel;
      return cmd_bound_curve(bc_mech, bc_family, bc_pvals, bc_cfg, bc_io, out);
    }
    if (c_table->parsed()) {
      return cmd_reproduce_table(
          rt_grid_step, rt_serial ? ExecPolicy::Serial : ExecPolicy::Parallel,
          rt_budget, rt_io, out);
    }
    if (c_wit->parsed()) {
      return cmd_witnesses(wt_pvals, wt_io, out);
    }
    throw ConfigError("no subcommand selected");
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return 4;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace ofl
