#include "invtest/cli.hpp"

#include "invtest/copula.hpp"
#include "invtest/data_io.hpp"
#include "invtest/group_actions.hpp"
#include "invtest/invariance_test.hpp"
#include "invtest/parallel.hpp"
#include "invtest/report.hpp"
#include "invtest/simulate.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace invtest {
namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct UsageError : Error {
  using Error::Error;
};

constexpr const char* kStatlogBase = "https://archive.ics.uci.edu/ml/machine-learning-databases/statlog/satimage/";

struct RunContext {
  std::vector<std::string> args;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::vector<std::pair<std::string, std::string>> inputs;  // path, sha256

  void add_input(const std::string& path) { inputs.emplace_back(path, sha256_file(path)); }
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write '" + path.string() + "'");
  os << text;
}

// Every output artifact gets <artifact>.manifest.json next to it. The
// manifest carries the wall time, so only the artifact itself is expected to
// be byte-identical across runs.
void write_manifest(const RunContext& ctx, const fs::path& artifact, std::uint64_t seed) {
  ojson m;
  m["schema_version"] = kSchemaVersion;
  m["artifact"] = artifact.filename().string();
  m["command"] = ctx.args;
  m["seed"] = seed;
  m["version"] = INVTEST_VERSION;
  m["wall_time_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start).count();
  auto inputs = ojson::array();
  for (const auto& [path, digest] : ctx.inputs) inputs.push_back(ojson{{"path", path}, {"sha256", digest}});
  m["inputs"] = std::move(inputs);
  write_text(fs::path(artifact.string() + ".manifest.json"), m.dump(2) + "\n");
}

std::optional<FunctionalLayout> parse_layout(const std::string& text, Eigen::Index width) {
  if (text.empty()) return std::nullopt;
  const auto x = text.find('x');
  if (x == std::string::npos) throw UsageError("--functional expects COMPONENTSxGRID, e.g. 3x100");
  FunctionalLayout layout{std::stoi(text.substr(0, x)), std::stoi(text.substr(x + 1))};
  if (layout.components < 1 || layout.grid < 2) throw UsageError("--functional needs components >= 1 and grid >= 2");
  if (layout.width() != width) {
    throw UsageError("--functional " + text + " needs " + std::to_string(layout.width()) + " columns, data has " +
                     std::to_string(width));
  }
  return layout;
}

GroupSpec resolve_group(const std::string& choice, const Sample& x, RunContext& ctx) {
  const int components = x.functional ? x.functional->components : static_cast<int>(x.cols());
  auto lift = [&](const GroupSpec& g) { return x.functional ? lift_to_blocks(g, x.functional->grid) : g; };
  if (choice == "exchangeable") {
    if (components < 2) throw UsageError("exchangeability needs at least two coordinates");
    return lift(permutation_generators(components));
  }
  if (choice == "sign-exchangeable") {
    if (components < 2) throw UsageError("sign-exchangeability needs at least two coordinates");
    return lift(signed_permutation_generators(components));
  }
  if (choice.rfind("file:", 0) == 0) {
    const std::string path = choice.substr(5);
    std::ifstream in(path);
    if (!in) throw DataError("cannot open group file '" + path + "'");
    ctx.add_input(path);
    nlohmann::json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("group file '" + path + "' is not valid JSON: " + e.what());
    }
    GroupSpec g = group_from_json(doc);
    if (x.functional && g.dim() == components) return lift(g);
    return g;
  }
  throw UsageError("unknown group '" + choice + "' (expected exchangeable, sign-exchangeable or file:PATH)");
}

std::vector<long> parse_sizes(const std::string& text) {
  std::vector<long> sizes;
  for (const auto& item : split_list(text)) sizes.push_back(std::stol(item));
  return sizes;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> v;
  for (const auto& item : split_list(text)) v.push_back(std::stod(item));
  return v;
}

// --- test -----------------------------------------------------------------

struct TestOptions {
  std::string input;
  std::string columns;
  std::string procedure = "b";
  std::string group = "exchangeable";
  std::string functional;
  std::string rank = "auto";
  std::string scheme = "centered";
  double alpha = 0.05;
  int directions = 50;
  int bootstrap = 1000;
  int replicates = 10000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = "report.json";
  std::string dump_directions;
  bool share_direction = false;
};

void add_test_command(CLI::App& app, TestOptions& o) {
  auto* cmd = app.add_subcommand("test", "Test a data file for invariance under a group");
  cmd->add_option("--input", o.input, "CSV file with a header row")->required();
  cmd->add_option("--columns", o.columns, "Comma-separated columns to use (default: all numeric)");
  cmd->add_option("--procedure", o.procedure, "a | b | perm-null")
      ->check(CLI::IsMember({"a", "b", "perm-null"}))
      ->capture_default_str();
  cmd->add_option("--group", o.group, "exchangeable | sign-exchangeable | file:PATH")->capture_default_str();
  cmd->add_option("--functional", o.functional, "Treat rows as curves, COMPONENTSxGRID (e.g. 3x100)");
  cmd->add_option("--rank-transform", o.rank, "auto (on for perm-null) | on | off")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  cmd->add_option("--bootstrap-scheme", o.scheme, "centered | plain")
      ->check(CLI::IsMember({"centered", "plain"}))
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Test level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--directions", o.directions, "Random directions per statistic (l)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--bootstrap", o.bootstrap, "Bootstrap replicates (B)")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--replicates", o.replicates, "Permutation-null replicates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = available parallelism)")->capture_default_str();
  cmd->add_option("--out", o.out, "Report JSON path")->capture_default_str();
  cmd->add_option("--dump-directions", o.dump_directions, "Write the observed directions as CSV");
  cmd->add_flag("--share-direction", o.share_direction, "Procedure A diagnostic: one direction for all generators");
}

int cmd_test(const TestOptions& o, RunContext& ctx, std::ostream& out) {
  const auto columns = split_list(o.columns);
  Dataset data = load_csv(o.input, columns);
  ctx.add_input(o.input);
  if (data.rows() < 2) throw DataError(o.input + ": fewer than two complete rows");
  Sample x = data.to_sample();
  x.functional = parse_layout(o.functional, x.cols());
  const bool rank = o.rank == "on" || (o.rank == "auto" && o.procedure == "perm-null");
  if (rank) x.data = rank_transform(x).values;
  const GroupSpec g = resolve_group(o.group, x, ctx);
  if (g.dim() != x.cols()) {
    throw UsageError("group acts on R^" + std::to_string(g.dim()) + " but " + std::to_string(x.cols()) +
                     " columns were selected");
  }

  TestReport report;
  if (o.procedure == "a") {
    if (!g.all_orthogonal()) {
      throw UsageError("procedure a requires orthogonal generators; use --procedure b for this group");
    }
    ProcedureAConfig cfg{o.alpha, derive_seed(o.seed, {10}), derive_seed(o.seed, {11}), o.share_direction};
    report = test_procedure_a(x, g, cfg);
  } else if (o.procedure == "b") {
    ProcedureBConfig cfg{o.alpha, o.directions, o.bootstrap, o.seed,
                         o.scheme == "plain" ? BootstrapScheme::kPlain : BootstrapScheme::kCentered, o.threads};
    report = test_procedure_b(x, g, cfg);
  } else {
    PermutationNullConfig cfg{o.alpha, o.directions, o.replicates, o.seed, o.threads};
    report = permutation_null_test(x, g, cfg);
  }

  out << data.provenance << (rank ? ", rank transformed" : "") << '\n';
  write_report_table(out, report);
  write_text(o.out, report_to_json(report).dump(2) + "\n");
  write_manifest(ctx, o.out, o.seed);
  if (!o.dump_directions.empty()) {
    std::ostringstream csv;
    write_directions_csv(csv, report.directions);
    write_text(o.dump_directions, csv.str());
    write_manifest(ctx, o.dump_directions, o.seed);
  }
  return kExitOk;
}

// --- simulate -------------------------------------------------------------

struct SimulateOptions {
  std::string scenario = "gauss";
  long n = 1000;
  int dim = 6;
  double rho = 0.5;
  int grid = 100;
  std::string params;
  std::string procedure = "b";
  std::string scheme = "centered";
  double alpha = 0.05;
  int directions = 50;
  int bootstrap = 1000;
  int replicates = 500;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = "curve.csv";
};

void add_simulate_command(CLI::App& app, SimulateOptions& o) {
  auto* cmd = app.add_subcommand("simulate", "Estimate an empirical power curve by simulation");
  cmd->add_option("--scenario", o.scenario, "gauss | clayton-c1 | clayton-c2 | sign | functional")
      ->check(CLI::IsMember({"gauss", "clayton-c1", "clayton-c2", "sign", "functional"}))
      ->capture_default_str();
  cmd->add_option("--n", o.n, "Sample size")->check(CLI::Range(2L, 100000000L))->capture_default_str();
  cmd->add_option("--dim", o.dim, "Dimension (gauss, sign)")->capture_default_str();
  cmd->add_option("--rho", o.rho, "Correlation of the gauss scenario")->capture_default_str();
  cmd->add_option("--grid", o.grid, "Grid points per curve (functional)")->capture_default_str();
  cmd->add_option("--params", o.params, "Comma-separated sweep values (xi, rho or delta); default: full grid");
  cmd->add_option("--procedure", o.procedure, "a | b")->check(CLI::IsMember({"a", "b"}))->capture_default_str();
  cmd->add_option("--bootstrap-scheme", o.scheme, "centered | plain")
      ->check(CLI::IsMember({"centered", "plain"}))
      ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Test level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--directions", o.directions, "Random directions (l)")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--bootstrap", o.bootstrap, "Bootstrap replicates (B)")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--replicates", o.replicates, "Monte Carlo replicates per sweep value")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = available parallelism)")->capture_default_str();
  cmd->add_option("--out", o.out, "Curve CSV path")->capture_default_str();
}

int cmd_simulate(const SimulateOptions& o, RunContext& ctx, std::ostream& out) {
  Scenario s;
  if (o.scenario == "gauss") s.kind = ScenarioKind::kGaussianMixture;
  else if (o.scenario == "sign") s.kind = ScenarioKind::kSignInvariantGaussian;
  else if (o.scenario == "functional") s.kind = ScenarioKind::kFunctional;
  else {
    s.kind = ScenarioKind::kHierarchicalClayton;
    s.variant = o.scenario == "clayton-c1" ? ClaytonVariant::kC1 : ClaytonVariant::kC2;
  }
  s.n = o.n;
  s.dim = o.dim;
  s.rho = o.rho;
  s.grid = o.grid;
  s.params = o.params.empty() ? default_params(s.kind) : parse_doubles(o.params);
  if (s.kind == ScenarioKind::kSignInvariantGaussian) {
    // The default rho sweep ends at the singular rho = 1; stop just short.
    for (auto& p : s.params) p = std::min(p, 0.99);
  }
  validate(s);

  TestSettings t;
  t.procedure = o.procedure == "a" ? Procedure::kA : Procedure::kB;
  t.alpha = o.alpha;
  t.directions = o.directions;
  t.bootstrap = o.bootstrap;
  t.scheme = o.scheme == "plain" ? BootstrapScheme::kPlain : BootstrapScheme::kCentered;

  const PowerCurve curve = power_curve(s, t, o.replicates, o.seed, o.threads);
  std::ostringstream csv;
  write_power_curve_csv(csv, curve);
  write_text(o.out, csv.str());
  write_manifest(ctx, o.out, o.seed);

  out << scenario_name(s) << ", n=" << s.n << ", procedure " << to_string(t.procedure) << ", l=" << t.directions
      << ", B=" << t.bootstrap << ", replicates=" << o.replicates << '\n';
  out << std::setw(8) << scenario_param_name(s.kind) << std::setw(10) << "power" << std::setw(10) << "se" << '\n';
  out << std::fixed << std::setprecision(4);
  for (const auto& pt : curve.points) out << std::setw(8) << pt.param << std::setw(10) << pt.rate << std::setw(10) << pt.se << '\n';
  return kExitOk;
}

// --- copula-index ---------------------------------------------------------

struct CopulaOptions {
  std::string input;
  std::string columns;
  std::string pairs = "all";
  std::string out;
};

void add_copula_command(CLI::App& app, CopulaOptions& o) {
  auto* cmd = app.add_subcommand("copula-index", "Pairwise bivariate symmetry indices of the empirical copula");
  cmd->add_option("--input", o.input, "CSV file with a header row")->required();
  cmd->add_option("--columns", o.columns, "Comma-separated columns to use (default: all numeric)");
  cmd->add_option("--pairs", o.pairs, "Only 'all' is supported")->check(CLI::IsMember({"all"}))->capture_default_str();
  cmd->add_option("--out", o.out, "Matrix CSV path (default: stdout)");
}

int cmd_copula_index(const CopulaOptions& o, RunContext& ctx, std::ostream& out) {
  Dataset data = load_csv(o.input, split_list(o.columns));
  ctx.add_input(o.input);
  if (data.columns.size() < 2) throw UsageError("copula-index needs at least two columns");
  const Matrix m = pairwise_symmetry_matrix(rank_transform(data.to_sample()));
  std::ostringstream csv;
  csv << "column";
  for (const auto& c : data.columns) csv << ',' << c;
  csv << '\n' << std::setprecision(17);
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    csv << data.columns[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m.cols(); ++b) csv << ',' << m(a, b);
    csv << '\n';
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    write_text(o.out, csv.str());
    write_manifest(ctx, o.out, 0);
  }
  return kExitOk;
}

// --- sweep ----------------------------------------------------------------

struct SweepOptions {
  std::string input;
  std::string columns;
  std::string sizes = "50,150,250,350,450,550";
  double alpha = 0.05;
  int directions = 50;
  int replicates = 1000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = "sweep.csv";
};

void add_sweep_command(CLI::App& app, SweepOptions& o) {
  auto* cmd = app.add_subcommand(
      "sweep", "Permutation-null exchangeability test of the copula on growing prefixes of a data file");
  cmd->add_option("--input", o.input, "CSV file with a header row")->required();
  cmd->add_option("--columns", o.columns, "Comma-separated columns to use (default: all numeric)");
  cmd->add_option("--sizes", o.sizes, "Comma-separated prefix sizes")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Test level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--directions", o.directions, "Random directions (l)")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--replicates", o.replicates, "Permutation-null replicates")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = available parallelism)")->capture_default_str();
  cmd->add_option("--out", o.out, "Sweep CSV path")->capture_default_str();
}

int cmd_sweep(const SweepOptions& o, RunContext& ctx, std::ostream& out) {
  Dataset data = load_csv(o.input, split_list(o.columns));
  ctx.add_input(o.input);
  if (data.columns.size() < 2) throw UsageError("sweep needs at least two columns");
  const auto sizes = parse_sizes(o.sizes);
  const auto parts = subsample_prefix_sweep(data, sizes);
  const GroupSpec g = permutation_generators(static_cast<int>(data.columns.size()));
  std::ostringstream csv;
  csv << "n,statistic,p_value,reject\n" << std::setprecision(17);
  out << std::setw(8) << "n" << std::setw(12) << "statistic" << std::setw(10) << "p-value" << '\n';
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Sample u = rank_transform(parts[i].to_sample()).as_sample();
    PermutationNullConfig cfg{o.alpha, o.directions, o.replicates, derive_seed(o.seed, {i}), o.threads};
    const TestReport r = permutation_null_test(u, g, cfg);
    csv << parts[i].rows() << ',' << r.statistic << ',' << *r.p_value << ',' << (r.overall_reject ? 1 : 0) << '\n';
    out << std::setw(8) << parts[i].rows() << std::fixed << std::setprecision(5) << std::setw(12) << r.statistic
        << std::setw(10) << *r.p_value << (r.overall_reject ? "  reject" : "") << '\n';
    out.unsetf(std::ios::fixed);
  }
  write_text(o.out, csv.str());
  write_manifest(ctx, o.out, o.seed);
  return kExitOk;
}

// --- group ----------------------------------------------------------------

struct GroupOptions {
  std::string group = "exchangeable";
  int dim = 3;
  std::size_t cap = 100000;
  std::string write;
};

void add_group_command(CLI::App& app, GroupOptions& o) {
  auto* cmd = app.add_subcommand("group", "Inspect or validate a generator set");
  cmd->add_option("--group", o.group, "exchangeable | sign-exchangeable | file:PATH")->capture_default_str();
  cmd->add_option("--dim", o.dim, "Dimension for the built-in groups")->capture_default_str();
  cmd->add_option("--closure-cap", o.cap, "Largest group to enumerate")->capture_default_str();
  cmd->add_option("--write", o.write, "Write the generator set as JSON");
}

int cmd_group(const GroupOptions& o, RunContext& ctx, std::ostream& out) {
  if (o.dim < 2) throw UsageError("--dim must be >= 2");
  const Sample probe{Matrix::Zero(1, o.dim), std::nullopt};
  const GroupSpec g = o.group.rfind("file:", 0) == 0
                          ? resolve_group(o.group, Sample{Matrix::Zero(1, 2), std::nullopt}, ctx)
                          : resolve_group(o.group, probe, ctx);
  out << "group " << g.name() << " on R^" << g.dim() << ", " << g.size() << " generator(s)\n";
  for (const auto& t : g.generators()) {
    out << "  " << t.label() << (is_orthogonal(t, 1e-9) ? "  orthogonal" : "  not orthogonal (procedure b only)")
        << (t.is_permutation() ? ", permutation" : (t.signed_permutation() ? ", signed permutation" : "")) << '\n';
  }
  try {
    out << "closure: " << closure(g, o.cap).size() << " elements\n";
  } catch (const InvalidArgument& e) {
    out << "closure: " << e.what() << '\n';
  }
  if (!o.write.empty()) {
    write_text(o.write, group_to_json(g).dump(2) + "\n");
    write_manifest(ctx, o.write, 0);
  }
  return kExitOk;
}

// --- fetch ----------------------------------------------------------------

struct FetchOptions {
  std::string dataset;
  bool allow_network = false;
  std::string from_files;
  std::string out;
};

void add_fetch_command(CLI::App& app, FetchOptions& o) {
  auto* cmd = app.add_subcommand("fetch", "Obtain the real-data example tables (no network unless allowed)");
  cmd->add_option("--dataset", o.dataset, "ais | statlog")->check(CLI::IsMember({"ais", "statlog"}))->required();
  cmd->add_flag("--allow-network", o.allow_network, "Download the Statlog satimage files from UCI");
  cmd->add_option("--from-files", o.from_files, "Comma-separated local sat.trn,sat.tst to convert");
  cmd->add_option("--out", o.out, "Output CSV path");
}

int cmd_fetch(const FetchOptions& o, RunContext& ctx, std::ostream& out) {
  if (o.dataset == "ais") {
    out << "The AIS biometric table (202 rows, 13 variables) ships with the R packages locfit and DAAG.\n"
           "Export it with, e.g.,  Rscript -e 'write.csv(DAAG::ais, \"ais.csv\", row.names = FALSE)'\n"
           "and run:  invtest test --input ais.csv --columns rcc,hc,hg,lbm,ht --procedure perm-null\n";
    return kExitOk;
  }
  if (o.from_files.empty() && !o.allow_network) {
    out << "Statlog satimage: " << kStatlogBase << "{sat.trn,sat.tst}\n"
        << "Convert local copies with  invtest fetch --dataset statlog --from-files sat.trn,sat.tst --out satimage.csv\n"
        << "or download with --allow-network. Rows keep file order (sat.trn, then sat.tst).\n";
    return kExitOk;
  }
  if (o.out.empty()) throw UsageError("--out is required to write the converted table");
  std::string text;
  if (!o.from_files.empty()) {
    for (const auto& path : split_list(o.from_files)) {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw DataError("cannot open '" + path + "'");
      ctx.add_input(path);
      text += std::string(std::istreambuf_iterator<char>(in), {});
      if (!text.empty() && text.back() != '\n') text.push_back('\n');
    }
  } else {
    for (const char* part : {"sat.trn", "sat.tst"}) text += http_get(std::string(kStatlogBase) + part);
  }
  std::istringstream in(text);
  const Dataset d = parse_satimage(in, "statlog-satimage");
  std::ostringstream csv;
  write_csv(csv, d);
  write_text(o.out, csv.str());
  write_manifest(ctx, o.out, 0);
  out << "wrote " << d.rows() << " rows x " << d.columns.size() << " attributes to " << o.out << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random-projection tests for invariance of a distribution under a group of linear maps", "invtest"};
  app.set_version_flag("--version", std::string("invtest ") + INVTEST_VERSION);
  app.require_subcommand(1);

  TestOptions test_opts;
  SimulateOptions sim_opts;
  CopulaOptions copula_opts;
  SweepOptions sweep_opts;
  GroupOptions group_opts;
  FetchOptions fetch_opts;
  add_test_command(app, test_opts);
  add_simulate_command(app, sim_opts);
  add_copula_command(app, copula_opts);
  add_sweep_command(app, sweep_opts);
  add_group_command(app, group_opts);
  add_fetch_command(app, fetch_opts);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion& e) {
    out << e.what() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    for (const auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  RunContext ctx;
  ctx.args = args;
  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "test") return cmd_test(test_opts, ctx, out);
    if (name == "simulate") return cmd_simulate(sim_opts, ctx, out);
    if (name == "copula-index") return cmd_copula_index(copula_opts, ctx, out);
    if (name == "sweep") return cmd_sweep(sweep_opts, ctx, out);
    if (name == "group") return cmd_group(group_opts, ctx, out);
    if (name == "fetch") return cmd_fetch(fetch_opts, ctx, out);
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: invalid number: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    err << "error: number out of range: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace invtest
