#include "cbcdbd/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cbcdbd/bounds.hpp"
#include "cbcdbd/campaign.hpp"
#include "cbcdbd/construct.hpp"
#include "cbcdbd/io.hpp"

namespace cbcdbd {

namespace {

using io::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::uint64_t digest_text(const std::string& text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_text(path, text);
  }
}

int parse_int(const std::string& text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw UsageError("not an integer: '" + text + "'");
  return value;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) values.push_back(parse_int(item));
  if (values.empty()) throw UsageError("empty list");
  return values;
}

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw UsageError("range must look like a..b");
  const int lo = parse_int(text.substr(0, dots));
  const int hi = parse_int(text.substr(dots + 2));
  if (hi < lo) throw UsageError("empty n-range '" + text + "'");
  return {lo, hi};
}

struct ConstructOptions {
  int n = 0;
  int s = 0;
  std::string weights;
  std::string path = "auto";
  std::string out;
  bool timing = true;
};

int cmd_construct(const ConstructOptions& opt, std::ostream& out) {
  const auto weights = io::load_weights(opt.weights);
  ConstructionConfig config{.n = opt.n,
                            .s = opt.s,
                            .weights = weights,
                            .path = parse_construction_path(opt.path),
                            .limits = {}};
  const auto result = construct(config);
  auto doc = io::vector_to_json(result.vector, nullptr);
  doc["diagnostics"] = io::diagnostics_to_json(result.diagnostics, opt.timing);
  io::RunManifest manifest{
      .command = "construct",
      .config_digest = io::hex_digest(digest_text(
          std::to_string(opt.n) + "/" + std::to_string(opt.s) + "/" + opt.path + "/" +
          io::hex_digest(fingerprint(weights)))),
      .inputs = {opt.weights},
      .outputs = {opt.out.empty() ? "-" : opt.out},
      .seed = 0,
      .tool_version = kToolVersion};
  doc["manifest"] = io::manifest_to_json(manifest);
  emit(opt.out, doc.dump(2) + "\n", out);
  return kExitOk;
}

struct VerifyOptions {
  std::string campaign = "all";
  int n_min = 1;
  int n_max = 4;
  int s_min = 1;
  int s_max = 3;
  int draws = 5;
  std::uint64_t seed = 0;
  std::string family = "mixed";
  std::string out;
};

int cmd_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  CampaignConfig config;
  if (opt.campaign == "all") {
    config.campaigns = kCampaigns;
  } else {
    config.campaigns = {opt.campaign};
  }
  config.n_min = opt.n_min;
  config.n_max = opt.n_max;
  config.s_min = opt.s_min;
  config.s_max = opt.s_max;
  config.draws = opt.draws;
  config.seed = opt.seed;
  config.family = parse_weight_family(opt.family);
  const auto rows = run_campaigns(config);

  std::size_t violated = 0, skipped = 0;
  json report_rows = json::array();
  for (const auto& row : rows) {
    if (row.status == RowStatus::violated) ++violated;
    if (row.status == RowStatus::skipped) ++skipped;
    json entry{{"campaign", row.campaign}, {"theorem", row.theorem}, {"n", row.n},
               {"s", row.s},               {"draw", row.draw},       {"seed", row.seed}};
    if (row.status == RowStatus::skipped) {
      entry["lhs"] = nullptr;
      entry["rhs"] = nullptr;
      entry["satisfied"] = "skipped";
    } else {
      entry["lhs"] = row.lhs;
      entry["rhs"] = row.rhs;
      entry["satisfied"] = row.status == RowStatus::satisfied;
    }
    if (!row.note.empty()) entry["note"] = row.note;
    report_rows.push_back(std::move(entry));
  }

  const std::string csv = campaign_csv(rows);
  const std::string config_text = opt.campaign + "/" + std::to_string(opt.n_min) + ".." +
                                  std::to_string(opt.n_max) + "/" + std::to_string(opt.s_min) +
                                  ".." + std::to_string(opt.s_max) + "/" +
                                  std::to_string(opt.draws) + "/" + opt.family;
  io::RunManifest manifest{.command = "verify",
                           .config_digest = io::hex_digest(digest_text(config_text)),
                           .inputs = {},
                           .outputs = {},
                           .seed = opt.seed,
                           .tool_version = kToolVersion};
  if (opt.out.empty()) {
    out << csv;
  } else {
    manifest.outputs = {opt.out + ".csv", opt.out + ".json"};
    json doc{{"manifest", io::manifest_to_json(manifest)},
             {"rows", std::move(report_rows)},
             {"summary",
              {{"rows", rows.size()}, {"violated", violated}, {"skipped", skipped}}}};
    io::write_text(opt.out + ".csv", csv);
    io::write_text(opt.out + ".json", doc.dump(2) + "\n");
  }
  err << rows.size() << " checks, " << violated << " violated, " << skipped << " skipped\n";
  return violated > 0 ? kExitBoundViolation : kExitOk;
}

struct ConvergenceOptions {
  int alpha = 2;
  std::string n_range;
  int s = 1;
  std::string weights;
  bool universal = false;
  std::string out;
};

int cmd_convergence(const ConvergenceOptions& opt, std::ostream& out) {
  const auto [lo, hi] = parse_range(opt.n_range);
  WeightScheme target = [&] {
    if (!opt.weights.empty()) return io::load_weights(opt.weights);
    std::vector<double> gammas(opt.s);
    for (int j = 1; j <= opt.s; ++j) gammas[j - 1] = 1.0 / (static_cast<double>(j) * j);
    return WeightScheme::product(std::move(gammas));
  }();
  const auto series = convergence_series(opt.alpha, target, opt.s, lo, hi, opt.universal);
  std::string csv = "n,N,dual_error\n";
  for (const auto& p : series) {
    csv += std::to_string(p.n) + "," + std::to_string(p.points) + "," +
           io::format_double(p.dual_error) + "\n";
  }
  if (series.size() >= 2) csv += "# fitted_slope," + io::format_double(fitted_slope(series)) + "\n";
  emit(opt.out, csv, out);
  return kExitOk;
}

struct BenchOptions {
  std::string path = "fast-pod";
  std::string n_list = "10,11,12";
  std::string s_list = "5,10";
  int repeats = 3;
};

int cmd_bench(const BenchOptions& opt, std::ostream& out) {
  const auto path = parse_construction_path(opt.path);
  const auto ns = parse_int_list(opt.n_list);
  const auto ss = parse_int_list(opt.s_list);
  std::map<std::pair<int, int>, BenchRow> rows;
  out << "path,n,s,median_seconds,table_doubles,table_doubles_per_Ns\n";
  for (int s : ss) {
    for (int n : ns) {
      const auto row = bench_construction(path, n, s, opt.repeats);
      rows[{n, s}] = row;
      out << to_string(path) << "," << n << "," << s << "," << io::format_double(row.median_seconds)
          << "," << row.table_doubles << ","
          << io::format_double(static_cast<double>(row.table_doubles) / std::ldexp(1.0 * s, n))
          << "\n";
    }
  }
  for (int s : ss) {
    for (std::size_t i = 1; i < ns.size(); ++i) {
      const auto& a = rows[{ns[i - 1], s}];
      const auto& b = rows[{ns[i], s}];
      out << "# ratio s=" << s << " n " << ns[i - 1] << "->" << ns[i] << ": "
          << io::format_double(b.median_seconds / a.median_seconds) << "\n";
    }
  }
  for (int n : ns) {
    for (std::size_t i = 1; i < ss.size(); ++i) {
      const auto& a = rows[{n, ss[i - 1]}];
      const auto& b = rows[{n, ss[i]}];
      out << "# ratio n=" << n << " s " << ss[i - 1] << "->" << ss[i] << ": "
          << io::format_double(b.median_seconds / a.median_seconds) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CBC-DBD lattice rule construction and verification", "cbcdbd"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  ConstructOptions construct_opt;
  auto* construct_cmd = app.add_subcommand("construct", "construct a generating vector");
  construct_cmd->add_option("--n", construct_opt.n, "N = 2^n")->required()->check(CLI::Range(1, 40));
  construct_cmd->add_option("--s", construct_opt.s, "dimension")->required()->check(
      CLI::Range(1, kMaxDimension));
  construct_cmd->add_option("--weights", construct_opt.weights, "weights JSON file")->required();
  construct_cmd->add_option("--path", construct_opt.path, "auto|naive|fast-pod|fast-product")
      ->check(CLI::IsMember({"auto", "naive", "fast-pod", "fast-product"}));
  construct_cmd->add_option("--out", construct_opt.out, "output file (default stdout)");
  construct_cmd->add_flag("!--no-timing", construct_opt.timing, "omit timing fields");

  VerifyOptions verify_opt;
  auto* verify_cmd = app.add_subcommand("verify", "run bound-checking campaigns");
  verify_cmd->add_option("--campaign", verify_opt.campaign, "inequality to check")
      ->check(CLI::IsMember({"thm2", "induction", "hbound", "prop1", "all"}));
  verify_cmd->add_option("--n-min", verify_opt.n_min, "smallest n (default 1)")->check(CLI::Range(1, 40));
  verify_cmd->add_option("--n-max", verify_opt.n_max, "largest n (default 4)")->check(CLI::Range(1, 40));
  verify_cmd->add_option("--s-min", verify_opt.s_min, "smallest s (default 1)")->check(CLI::Range(1, kMaxDimension));
  verify_cmd->add_option("--s-max", verify_opt.s_max, "largest s (default 3)")->check(CLI::Range(1, kMaxDimension));
  verify_cmd->add_option("--draws", verify_opt.draws, "random weight draws per (n, s) (default 5)")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--seed", verify_opt.seed, "campaign seed (default 0)");
  verify_cmd->add_option("--family", verify_opt.family, "weight family (default mixed)")
      ->check(CLI::IsMember({"product", "pod", "general", "mixed"}));
  verify_cmd->add_option("--out", verify_opt.out, "output prefix for .csv and .json");

  ConvergenceOptions conv_opt;
  auto* conv_cmd = app.add_subcommand("convergence", "dual error against N");
  conv_cmd->add_option("--alpha", conv_opt.alpha, "smoothness (default 2)")->check(CLI::IsMember({2, 4, 6}));
  conv_cmd->add_option("--n-range", conv_opt.n_range, "a..b")->required();
  conv_cmd->add_option("--s", conv_opt.s, "dimension (default 1)")->check(CLI::Range(1, kMaxDimension));
  conv_cmd->add_option("--weights", conv_opt.weights, "weights JSON file (default gamma_j = 1/j^2)");
  conv_cmd->add_flag("--universal", conv_opt.universal,
                     "construct with the target weights and measure with their alpha-th power");
  conv_cmd->add_option("--out", conv_opt.out, "output file (default stdout)");

  BenchOptions bench_opt;
  auto* bench_cmd = app.add_subcommand("bench", "time the fast construction paths");
  bench_cmd->add_option("--path", bench_opt.path, "construction path (default fast-pod)")
      ->check(CLI::IsMember({"fast-pod", "fast-product"}));
  bench_cmd->add_option("--n-list", bench_opt.n_list, "comma-separated n values");
  bench_cmd->add_option("--s-list", bench_opt.s_list, "comma-separated s values");
  bench_cmd->add_option("--repeats", bench_opt.repeats, "timed runs per cell (median reported)")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream text;
    const int code = app.exit(e, text, text);
    (code == 0 ? out : err) << text.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*construct_cmd) return cmd_construct(construct_opt, out);
    if (*verify_cmd) return cmd_verify(verify_opt, out, err);
    if (*conv_cmd) return cmd_convergence(conv_opt, out);
    if (*bench_cmd) return cmd_bench(bench_opt, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace cbcdbd
