#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qinv/suites.hpp"

using namespace qinv;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct JobConfig {
  std::string command;
  std::string group;
  std::string k;
  std::string a;
  int max_deg = -1;
  std::string tau;
  int orbit = 0;
  int shift_a = 1;
  std::string suite = "all";
  std::string out;
  std::string format = "json";

  nlohmann::json to_json() const {
    nlohmann::json j{{"command", command}, {"group", group}, {"k", k.empty() ? "zero" : k}, {"format", format}};
    if (!a.empty()) j["a"] = a;
    if (max_deg >= 0) j["maxDeg"] = max_deg;
    if (!tau.empty()) j["tau"] = tau;
    if (command == "shift-op") {
      j["orbit"] = orbit;
      j["shiftA"] = shift_a;
    }
    if (command == "verify") j["suite"] = suite;
    return j;
  }
};

struct Job {
  nlohmann::json body;
  bool ok = true;
};

ReflectionGroup load_group(const JobConfig& c) {
  if (c.group.empty()) throw ConfigError("--group is required");
  try {
    return builtin_group(c.group);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad group spec: ") + e.what());
  }
}

Multiplicity load_k(const ReflectionGroup& g, const JobConfig& c) {
  if (c.k.empty()) {
    Multiplicity z = Multiplicity::zero(g);
    if (!c.a.empty()) throw ConfigError("--a needs --k");
    return z;
  }
  try {
    return Multiplicity::parse(g, c.k, c.a);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("bad multiplicity: ") + e.what());
  }
}

int with_default(int v, int d) { return v < 0 ? d : v; }

Job group_info(const JobConfig& c) {
  ReflectionGroup g = load_group(c);
  nlohmann::json j = g.to_json();
  j["fundamentalDegrees"] = fundamental_degrees(g);
  j["irrepsAvailable"] = g.irreps_available();
  return {j, true};
}

Job qi_basis(const JobConfig& c) {
  ReflectionGroup g = load_group(c);
  Multiplicity k = load_k(g, c);
  int max_deg = with_default(c.max_deg, 8);
  if (c.tau.empty()) return {compute_basis(g, k, max_deg).to_json(g), true};
  WRep tau;
  if (c.tau == "regular") {
    tau = regular_rep(g);
  } else if (c.tau == "trivial") {
    tau = trivial_rep(g);
  } else {
    int idx = -1;
    try {
      idx = g.irrep_index(c.tau);
    } catch (const std::exception&) {
    }
    if (idx < 0) throw ConfigError("unknown representation " + c.tau);
    tau = g.irreps()[idx];
  }
  return {tau_quasi_invariants(g, k, tau, max_deg).to_json(g), true};
}

Job qi_poincare(const JobConfig& c) {
  ReflectionGroup g = load_group(c);
  Multiplicity k = load_k(g, c);
  int max_deg = with_default(c.max_deg, 12);
  PoincareData f = poincare_by_formula(g, k, max_deg);
  PoincareData m = poincare_by_membership(g, k, max_deg);
  nlohmann::json j = f.to_json();
  j["seriesByMembership"] = m.series;
  j["agree"] = f.series == m.series;
  return {j, f.series == m.series};
}

Job free_gens(const JobConfig& c) {
  ReflectionGroup g = load_group(c);
  return {free_generators(g, load_k(g, c)).to_json(), true};
}

Job kz(const JobConfig& c) {
  ReflectionGroup g = load_group(c);
  TwistPermutation t = kz_twist(g, load_k(g, c));
  nlohmann::json j = t.to_json(g);
  bool identity = true;
  for (size_t i = 0; i < t.mapping.size(); ++i) identity = identity && t.mapping[i] == static_cast<int>(i);
  j["identity"] = identity;
  return {j, true};
}

Job shift_op(const JobConfig& c) {
  ReflectionGroup g = load_group(c);
  Multiplicity k = load_k(g, c);
  if (c.orbit < 0 || c.orbit >= g.num_orbits()) throw ConfigError("--orbit out of range");
  ShiftOp s = elementary_shift(g, k, c.orbit, c.shift_a);
  nlohmann::json j = s.to_json();
  j["symbolMatches"] = s.op.top_order_part() == expected_symbol(g, s);
  nlohmann::json checks = nlohmann::json::array();
  bool ok = true;
  auto ps = basic_dual_invariants(g);
  std::stable_sort(ps.begin(), ps.end(), [](const MultiPoly& x, const MultiPoly& y) { return x.degree() < y.degree(); });
  if (ps.size() > 2) ps.resize(2);
  for (const auto& p : ps) {
    IntertwineResult r = intertwine_check(g, s, p);
    checks.push_back({{"p", p.to_string()}, {"intertwines", r.ok}});
    ok = ok && r.ok;
  }
  j["intertwining"] = checks;
  return {j, ok};
}

Job verify(const JobConfig& c) {
  ReflectionGroup g = load_group(c);
  Multiplicity k = load_k(g, c);
  std::vector<std::string> names;
  if (c.suite == "all") {
    names = suite_names();
  } else {
    const auto& all = suite_names();
    if (std::find(all.begin(), all.end(), c.suite) == all.end()) throw ConfigError("unknown suite " + c.suite);
    names.push_back(c.suite);
  }
  SuiteOptions opt;
  opt.max_deg = c.max_deg;
  nlohmann::json suites = nlohmann::json::array();
  bool ok = true;
  for (const auto& n : names) {
    SuiteOutcome o = run_suite(n, g, k, opt);
    ok = ok && o.status != SuiteStatus::fail;
    suites.push_back(o.to_json());
  }
  return {{{"suites", suites}, {"ok", ok}}, ok};
}

Job baf(const JobConfig& c) {
  ReflectionGroup g = load_group(c);
  Multiplicity k = load_k(g, c);
  nlohmann::json details;
  CheckReport r = baf_suite(g, k, &details);
  details["report"] = r.to_json();
  return {details, r.ok};
}

void render_text(const nlohmann::json& j, const std::string& indent, std::ostream& os) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    std::string key = j.is_object() ? it.key() : "-";
    bool nested = (v.is_object() && !v.empty()) ||
                  (v.is_array() && std::any_of(v.begin(), v.end(), [](const nlohmann::json& e) {
                     return e.is_object() || e.is_array();
                   }));
    if (nested) {
      os << indent << key << ":\n";
      render_text(v, indent + "  ", os);
    } else if (v.is_string()) {
      os << indent << key << ": " << v.get<std::string>() << "\n";
    } else {
      os << indent << key << ": " << v.dump() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-invariants of complex reflection groups"};
  app.require_subcommand(1);
  JobConfig cfg;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"group-info", "group data and reflection arrangement"},
      {"qi-basis", "graded basis of quasi-invariants"},
      {"qi-poincare", "Poincare series by formula and by membership"},
      {"free-gens", "free generators over the invariants"},
      {"kz-twist", "KZ twist permutation of irreducibles"},
      {"shift-op", "elementary shift operator"},
      {"verify", "run a verification suite"},
      {"baf", "Baker-Akhiezer function and certificates"}};
  for (const auto& [name, desc] : commands) {
    CLI::App* sub = app.add_subcommand(name, desc);
    sub->add_option("--group", cfg.group, "group spec, e.g. cyclic:3 or dihedral:4:1")->required();
    sub->add_option("--k", cfg.k, "multiplicity, orbits separated by ';', entries by ','");
    sub->add_option("--a", cfg.a, "twist per orbit, comma separated");
    sub->add_option("--max-deg", cfg.max_deg, "degree bound");
    sub->add_option("--tau", cfg.tau, "representation name, 'regular' or 'trivial'");
    sub->add_option("--orbit", cfg.orbit, "hyperplane orbit id");
    sub->add_option("--shift-a", cfg.shift_a, "elementary shift index");
    sub->add_option("--suite", cfg.suite, "suite name or 'all'");
    sub->add_option("--out", cfg.out, "output file");
    sub->add_option("--format", cfg.format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (cfg.max_deg < 0) {
    if (cfg.command == "qi-basis") cfg.max_deg = 8;
    else if (cfg.command == "qi-poincare") cfg.max_deg = 12;
    else if (cfg.command == "verify") cfg.max_deg = 25;
  }

  nlohmann::json out{{"schemaVersion", 1}, {"config", cfg.to_json()}};
  int rc = 0;
  try {
    Job job;
    if (cfg.command == "group-info") job = group_info(cfg);
    else if (cfg.command == "qi-basis") job = qi_basis(cfg);
    else if (cfg.command == "qi-poincare") job = qi_poincare(cfg);
    else if (cfg.command == "free-gens") job = free_gens(cfg);
    else if (cfg.command == "kz-twist") job = kz(cfg);
    else if (cfg.command == "shift-op") job = shift_op(cfg);
    else if (cfg.command == "verify") job = verify(cfg);
    else job = baf(cfg);
    out["result"] = job.body;
    out["ok"] = job.ok;
    rc = job.ok ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NotInvariant& e) {
    out["ok"] = false;
    out["error"] = {{"type", "NotInvariant"}, {"message", e.what()}, {"witness", e.witness}};
    rc = 1;
  } catch (const std::exception& e) {
    out["ok"] = false;
    out["error"] = {{"type", "ComputationError"}, {"message", e.what()}};
    rc = 1;
  }

  std::ostringstream text;
  if (cfg.format == "json") {
    text << out.dump(2) << "\n";
  } else {
    render_text(out, "", text);
  }
  if (cfg.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(cfg.out);
    if (!f) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return 2;
    }
    f << text.str();
  }
  return rc;
}
