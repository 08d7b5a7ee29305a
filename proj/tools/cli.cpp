#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "itervote/dynamics.hpp"
#include "itervote/montecarlo.hpp"
#include "itervote/oracle.hpp"
#include "itervote/profile_io.hpp"
#include "itervote/welfare.hpp"

namespace itervote::cli {
namespace {

using nlohmann::json;

// Infeasible construction parameters.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A verification check failed; reported like a validation error.
class CheckFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

long parse_long(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ValidationError("invalid " + what + ": '" + text + "'");
  }
  return value;
}

std::string scores_string(const ScoreTable& scores) {
  std::string out = "(";
  for (Alternative a = 1; a <= scores.num_alternatives(); ++a) {
    if (a > 1) out += ',';
    out += std::to_string(scores[a]);
  }
  return out + ")";
}

json set_json(AlternativeSet s) { return s.to_vector(); }

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  return file;
}

struct Common {
  std::uint64_t budget = kDefaultStateBudget;
  ExplorationOptions exploration() const { return {budget}; }
};

// ---- ew ----------------------------------------------------------------

struct EwArgs {
  std::string file;
  std::string utility = "borda";
  bool exhaustive = false;
  std::string format = "text";
};

int cmd_ew(const EwArgs& args, const Common& common, std::ostream& out) {
  const Profile profile = read_profile_file(args.file);
  const int m = profile.num_alternatives();
  const UtilityVector u = parse_utility(args.utility, m);
  const ScoreTable scores = plurality_scores(profile);
  const AlternativeSet pw = potential_winners(scores);
  const EquilibriumResult ew =
      args.exhaustive
          ? equilibrium_winners_exhaustive(profile, common.exploration())
          : equilibrium_winners(profile, common.exploration());
  const LossReport loss = adversarial_loss(profile, u, ew.winners);
  const std::vector<double> sw = welfare_table(profile, u);

  if (args.format == "json") {
    json doc = {{"n", profile.num_agents()},
                {"m", m},
                {"scores", std::vector<int>(scores.values().begin(),
                                            scores.values().end())},
                {"truthful_winner", loss.truthful_winner},
                {"potential_winners", set_json(pw)},
                {"equilibrium_winners", set_json(ew.winners)},
                {"social_welfare", sw},
                {"loss", loss.loss},
                {"max_depth", ew.max_depth},
                {"states_visited", ew.states_visited}};
    if (ew.sequence_count) doc["sequence_count"] = *ew.sequence_count;
    out << doc.dump(2) << '\n';
    return kOk;
  }
  out << "agents: " << profile.num_agents() << "  alternatives: " << m << '\n'
      << "scores: " << scores_string(scores) << '\n'
      << "truthful winner: " << loss.truthful_winner << '\n'
      << "potential winners: " << pw.to_string() << '\n'
      << "equilibrium winners: " << ew.winners.to_string() << '\n';
  if (ew.sequence_count) out << "BR sequences: " << *ew.sequence_count << '\n';
  out << "longest BR sequence: " << ew.max_depth << '\n' << "social welfare:";
  for (Alternative a = 1; a <= m; ++a) {
    out << ' ' << a << '=' << format_number(sw[a - 1]);
  }
  out << '\n' << "D+: " << format_number(loss.loss) << '\n';
  return kOk;
}

// ---- eadpoa ------------------------------------------------------------

struct EadpoaArgs {
  int m = 4;
  std::string n_range;
  std::string utility = "borda";
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_path;
  std::string format = "csv";
};

json summary_rows_json(const RunSummary& s) {
  json rows = json::array();
  auto row = [&](const std::string& alpha, const ClassSummary& c) {
    rows.push_back({{"n", s.n},
                    {"alpha", alpha},
                    {"count", c.count},
                    {"mean_loss", c.mean_loss},
                    {"ci95", c.ci95},
                    {"probability", c.probability},
                    {"budget_failures", s.budget_failures}});
  };
  for (int c = 0; c < kTieClasses; ++c) row(tie_class_label(c), s.by_class[c]);
  row("overall", s.overall);
  return rows;
}

void print_summary_table(std::ostream& out, const RunSummary& s) {
  out << "n=" << s.n << "  samples=" << s.samples
      << "  budget_failures=" << s.budget_failures << '\n';
  out << "  alpha     count      probability   mean_loss       ci95\n";
  auto row = [&](const std::string& alpha, const ClassSummary& c) {
    out << "  " << std::left << std::setw(8) << alpha << std::right
        << std::setw(10) << c.count << "  " << std::setw(14)
        << format_number(c.probability) << "  " << std::setw(14)
        << format_number(c.mean_loss) << "  " << format_number(c.ci95) << '\n';
  };
  for (int c = 0; c < kTieClasses; ++c) row(tie_class_label(c), s.by_class[c]);
  row("overall", s.overall);
}

int cmd_eadpoa(const EadpoaArgs& args, const Common& common, std::ostream& out) {
  const UtilityVector u = parse_utility(args.utility, args.m);
  std::vector<RunSummary> runs;
  for (int n : parse_n_range(args.n_range)) {
    SamplerConfig config{args.m, n, args.samples, args.seed, args.workers};
    runs.push_back(estimate_eadpoa(config, u, common.exploration()));
  }

  std::ostringstream body;
  if (args.format == "csv") {
    body << kCsvHeader << '\n';
    for (const auto& s : runs) write_summary_csv_rows(body, s);
  } else {
    json rows = json::array();
    for (const auto& s : runs) {
      for (auto& r : summary_rows_json(s)) rows.push_back(std::move(r));
    }
    body << rows.dump(2) << '\n';
  }

  if (args.out_path.empty()) {
    out << body.str();
  } else {
    auto file = open_output(args.out_path);
    file << body.str();
    if (!file) throw IoError("write failure on '" + args.out_path + "'");
    for (const auto& s : runs) print_summary_table(out, s);
  }
  std::uint64_t failures = 0;
  for (const auto& s : runs) failures += s.budget_failures;
  if (failures > 0) {
    out << "warning: " << failures
        << " samples exceeded the exploration budget and were excluded\n";
  }
  return kOk;
}

// ---- construct ---------------------------------------------------------

struct ConstructArgs {
  int m = 3;
  int n = 14;
  std::string utility = "borda";
  std::string out_path;
};

int cmd_construct(const ConstructArgs& args, const Common& common,
                  std::ostream& out) {
  const UtilityVector u = parse_utility(args.utility, args.m);
  std::optional<WorstCaseConstruction> built;
  try {
    built = build_theorem1_profile(args.m, args.n, u);
  } catch (const ValidationError& e) {
    throw Infeasible(std::string(e.what()) +
                     " (feasible when n is even, m divides n + m - 2 and "
                     "(alpha - 1)(m - 2) is even and at least 2)");
  }
  const LossReport loss = adversarial_loss(built->profile, u, common.exploration());
  const double bound = worst_case_lower_bound(args.m, args.n, u);

  if (!args.out_path.empty()) {
    std::ostringstream header;
    header << "worst-case profile m=" << args.m << " n=" << args.n
           << " alpha=" << built->alpha << " beta=" << built->beta
           << " k=" << built->k;
    write_profile_file(args.out_path, built->profile, header.str());
  } else {
    write_profile(out, built->profile);
  }
  out << "alpha: " << built->alpha << "  beta: " << built->beta
      << "  k: " << built->k << '\n'
      << "equilibrium winners: " << loss.equilibrium_winners.to_string() << '\n'
      << "D+: " << format_number(loss.loss)
      << "  bound (u2-um)(n/m-2): " << format_number(bound)
      << "  D+ >= bound: " << (loss.loss >= bound ? "yes" : "no") << '\n';
  return kOk;
}

// ---- verify ------------------------------------------------------------

struct VerifyArgs {
  std::string scope = "all";
  int n_max = 30;
  int u_max = 200;
  std::string utility = "2,1,0";
  int m = 3;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 200'000;
  int workers = 1;
  std::string csv_path;
};

void report_check(std::ostream& out, bool pass, const std::string& name,
                  const std::string& detail) {
  out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
  if (!pass) throw CheckFailed(name + ": " + detail);
}

void verify_claim1(const VerifyArgs& args, std::ostream& out) {
  const Claim1Result r = check_claim1(args.n_max);
  std::ostringstream detail;
  if (r.holds) {
    detail << r.cases_checked << " (n, p) pairs with n <= " << args.n_max;
  } else {
    detail << "identity fails at n=" << r.violation->first
           << " p=" << r.violation->second;
  }
  report_check(out, r.holds, "claim1", detail.str());
}

void verify_stirling(const VerifyArgs& args, std::ostream& out) {
  const auto points = check_stirling_ratio(args.u_max);
  const StirlingVerdict v = evaluate_stirling(points);
  if (!args.csv_path.empty()) {
    auto file = open_output(args.csv_path);
    file << "u,ratio\n";
    for (const auto& p : points) file << p.u << ',' << format_number(p.ratio) << '\n';
  }
  std::ostringstream detail;
  detail << "ratios for u in [4, " << args.u_max << "] "
         << (v.in_band ? "inside" : "outside") << " [0.1, 1.0], "
         << (v.converging ? "converging" : "not converging")
         << "; empirical limit " << format_number(v.limit_estimate)
         << " (1/sqrt(2 pi) = " << format_number(1.0 / std::sqrt(2.0 * M_PI))
         << ")";
  report_check(out, v.in_band && v.converging, "stirling", detail.str());
}

void verify_enumeration(const VerifyArgs& args, const Common& common,
                        std::ostream& out) {
  constexpr int m = 3;
  constexpr int n = 5;
  OracleOptions options;
  options.exploration = common.exploration();
  const EnumerationReport r =
      exact_eadpoa(m, n, parse_utility(args.utility, m), options);
  std::ostringstream detail;
  detail << r.total_profiles << " profiles, " << r.mismatch_count
         << " mismatches, EW within PW: " << (r.ew_within_pw ? "yes" : "no")
         << ", longest sequence " << r.max_depth << " (bound " << n * m
         << "), exact EADPoA " << format_number(r.exact_eadpoa);
  if (!r.mismatches.empty()) {
    const Mismatch& first = r.mismatches.front();
    detail << "; first mismatch (" << first.check << "): fast "
           << first.fast_result.to_string() << " vs exhaustive "
           << first.oracle_result.to_string();
  }
  report_check(out,
               r.mismatch_count == 0 && r.ew_within_pw && r.max_depth <= n * m,
               "enum-m3n5", detail.str());
}

void verify_ties(const VerifyArgs& args, std::ostream& out) {
  if (!args.seed) throw ValidationError("verify ties requires --seed");
  const std::vector<int> ns{50, 100, 200, 400};
  std::vector<double> two_scaled;
  std::vector<double> three_scaled;
  for (int n : ns) {
    const TieStatistics t =
        tie_statistics({args.m, n, args.samples, *args.seed, args.workers});
    two_scaled.push_back(t.probability[1] * std::sqrt(static_cast<double>(n)));
    three_scaled.push_back(t.probability[2] * n);
    out << "  n=" << n << "  Pr(|PW|=2)*sqrt(n)=" << format_number(two_scaled.back())
        << "  Pr(|PW|=3)*n=" << format_number(three_scaled.back()) << '\n';
  }
  auto spread = [](const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *lo > 0 ? *hi / *lo : INFINITY;
  };
  const double s2 = spread(two_scaled);
  const double s3 = spread(three_scaled);
  std::ostringstream detail;
  detail << "max/min of Pr(|PW|=2)*sqrt(n) = " << format_number(s2)
         << ", of Pr(|PW|=3)*n = " << format_number(s3) << " (band 2)";
  report_check(out, s2 <= 2.0 && s3 <= 2.0, "ties", detail.str());
}

int cmd_verify(const VerifyArgs& args, const Common& common, std::ostream& out) {
  const std::string& s = args.scope;
  const bool all = s == "all";
  if (!all && s != "claim1" && s != "stirling" && s != "enum-m3n5" && s != "ties") {
    throw ValidationError("unknown verify scope '" + s + "'");
  }
  if (all && !args.seed) throw ValidationError("verify all requires --seed");
  if (all || s == "claim1") verify_claim1(args, out);
  if (all || s == "stirling") verify_stirling(args, out);
  if (all || s == "enum-m3n5") verify_enumeration(args, common, out);
  if (all || s == "ties") verify_ties(args, out);
  return kOk;
}

}  // namespace

UtilityVector parse_utility(const std::string& text, int m) {
  if (text == "borda") return UtilityVector::borda(m);
  if (text == "plurality") return UtilityVector::plurality(m);
  std::vector<double> u;
  for (const std::string& part : split(text, ',')) {
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != part.size()) {
      throw ValidationError("invalid utility entry '" + part + "'");
    }
    u.push_back(value);
  }
  if (static_cast<int>(u.size()) != m) {
    throw ValidationError("utility vector has " + std::to_string(u.size()) +
                          " entries, expected m = " + std::to_string(m));
  }
  return UtilityVector(std::move(u));
}

std::vector<int> parse_n_range(const std::string& text) {
  std::vector<int> ns;
  for (const std::string& item : split(text, ',')) {
    const auto fields = split(item, ':');
    if (fields.size() == 1) {
      ns.push_back(static_cast<int>(parse_long(fields[0], "n")));
    } else if (fields.size() == 3) {
      const long start = parse_long(fields[0], "range start");
      const long stop = parse_long(fields[1], "range stop");
      const long step = parse_long(fields[2], "range step");
      if (step <= 0 || stop < start) {
        throw ValidationError("range '" + item + "' needs step > 0 and stop >= start");
      }
      for (long n = start; n <= stop; n += step) ns.push_back(static_cast<int>(n));
    } else {
      throw ValidationError("invalid n range '" + item + "'");
    }
  }
  if (ns.empty()) throw ValidationError("empty n range");
  for (int n : ns) {
    if (n < 1) throw ValidationError("n must be >= 1");
  }
  return ns;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Iterative plurality voting: equilibrium winners, adversarial "
               "loss and Impartial Culture Monte Carlo."};
  app.name("itervote");
  app.require_subcommand(1);

  Common common;
  app.add_option("--budget", common.budget,
                 "Exploration state budget per profile")
      ->envname(kBudgetEnv)
      ->check(CLI::PositiveNumber);

  EwArgs ew;
  auto* ew_cmd = app.add_subcommand(
      "ew", "Equilibrium winners and adversarial loss of a profile file");
  ew_cmd->add_option("file", ew.file, "Profile text file")->required();
  ew_cmd->add_option("--u", ew.utility, "Utility: borda, plurality or u1,...,um")
      ->capture_default_str();
  ew_cmd->add_flag("--exhaustive", ew.exhaustive,
                   "Enumerate every BR sequence instead of the pruned search");
  ew_cmd->add_option("--format", ew.format)
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  EadpoaArgs ea;
  auto* ea_cmd = app.add_subcommand(
      "eadpoa", "Monte Carlo estimate of the expected adversarial loss");
  ea_cmd->add_option("--m", ea.m, "Number of alternatives")->capture_default_str();
  ea_cmd->add_option("--n", ea.n_range,
                     "Agent counts: N, start:stop:step (stop inclusive when "
                     "aligned) or a comma list of those")
      ->required();
  ea_cmd->add_option("--u", ea.utility)->capture_default_str();
  ea_cmd->add_option("--samples", ea.samples)->capture_default_str();
  ea_cmd->add_option("--seed", ea.seed, "Master seed (required)")->required();
  ea_cmd->add_option("--workers", ea.workers)->capture_default_str();
  ea_cmd->add_option("--out", ea.out_path, "Output file (default: stdout)");
  ea_cmd->add_option("--format", ea.format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ConstructArgs co;
  auto* co_cmd = app.add_subcommand(
      "construct", "Build the worst-case profile for linear adversarial loss");
  co_cmd->add_option("--m", co.m)->required();
  co_cmd->add_option("--n", co.n)->required();
  co_cmd->add_option("--u", co.utility)->capture_default_str();
  co_cmd->add_option("--out", co.out_path, "Profile output file (default: stdout)");

  VerifyArgs ve;
  auto* ve_cmd = app.add_subcommand("verify", "Run oracle checks");
  ve_cmd->add_option("scope", ve.scope, "all, claim1, stirling, enum-m3n5 or ties")
      ->capture_default_str();
  ve_cmd->add_option("--nmax", ve.n_max)->capture_default_str();
  ve_cmd->add_option("--umax", ve.u_max)->capture_default_str();
  ve_cmd->add_option("--u", ve.utility, "Utility for enum-m3n5")->capture_default_str();
  ve_cmd->add_option("--m", ve.m, "Alternatives for ties")->capture_default_str();
  ve_cmd->add_option("--seed", ve.seed, "Master seed for ties");
  ve_cmd->add_option("--samples", ve.samples, "Samples per n for ties")
      ->capture_default_str();
  ve_cmd->add_option("--workers", ve.workers)->capture_default_str();
  ve_cmd->add_option("--csv", ve.csv_path, "Write Stirling ratios as CSV");

  std::vector<std::string> argv_storage{"itervote"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (ew_cmd->parsed()) return cmd_ew(ew, common, out);
    if (ea_cmd->parsed()) return cmd_eadpoa(ea, common, out);
    if (co_cmd->parsed()) return cmd_construct(co, common, out);
    if (ve_cmd->parsed()) return cmd_verify(ve, common, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetOrInfeasible;
  } catch (const Infeasible& e) {
    err << "error: " << e.what() << '\n';
    return kBudgetOrInfeasible;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const CheckFailed& e) {
    err << "verification failed: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}

}  // namespace itervote::cli
