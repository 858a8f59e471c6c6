// tpz: generate Toeplitz sequences, verify their properties, and export
// rotation-vector clouds, sweep paths and figures.
//
// Exit codes: 0 success / all checks pass, 1 a check failed,
//             2 usage or invalid parameters, 3 budget exceeded.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toeplitz/toeplitz.hpp"

using namespace toeplitz;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// --budget wins over TPZ_BUDGET, which wins over the default.
std::uint64_t resolve_budget(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TPZ_BUDGET")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError("TPZ_BUDGET must be a non-negative integer");
    }
  }
  return fallback;
}

std::pair<Rational, Rational> parse_pair(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("expected two comma-separated values, got '" + s + "'");
  return {parse_rational(s.substr(0, comma)), parse_rational(s.substr(comma + 1))};
}

std::set<std::string> split_checks(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.insert(item);
  return out;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string v;
  std::optional<std::uint64_t> a1;
  std::uint64_t K = 17, L = 64;
  int dexp = -1;
  bool toy = false;
  int levels = 4;
  std::uint64_t target_seed = 0;
  std::uint64_t length = 0;
  std::string out;
};

int generate_segment_cmd(const GenerateArgs& g) {
  const auto [vx, vy] = parse_pair(g.v);
  const SegmentParams P = derive_segment_params(vx, vy, g.a1);
  if (g.length == 0) throw UsageError("--length must be positive");
  const SegmentSequence s = generate_segment(P, g.length);
  write_sequence_file(g.out, segment_manifest(s), s.sequence);
  std::cout << "segment: t=" << P.t << " a1=" << P.a1 << " length=" << s.sequence.horizon() << " -> " << g.out
            << "\n";
  return 0;
}

int generate_separator_cmd(const GenerateArgs& g) {
  const int dexp = g.dexp < 0 ? 5 : g.dexp;
  const SeparatorSequence seq(make_separator_params(g.K, g.L, LevelRule::pow2(dexp), g.toy));
  if (g.length == 0) throw UsageError("--length must be positive");
  if (g.length > seq.horizon()) throw UsageError("--length exceeds the 64-bit evaluable horizon");
  std::vector<Symbol> sym(g.length);
  for (std::uint64_t j = 1; j <= g.length; ++j) sym[j - 1] = seq.at(j);
  write_sequence_file(g.out, separator_manifest(seq, g.length), MaterializedSequence(std::move(sym)));
  std::cout << "separator: a1=" << seq.schedule().a(1) << " length=" << g.length << " -> " << g.out << "\n";
  return 0;
}

int generate_interior_cmd(const GenerateArgs& g) {
  if (!g.a1) throw UsageError("--a1 is required");
  const int dexp = g.dexp < 0 ? 4 : g.dexp;
  const InteriorParams P = make_interior_params(*g.a1, LevelRule::pow2(dexp), g.target_seed);
  if (P.schedule.a64(g.levels) > 100'000'000) throw UsageError("--levels would materialize more than 1e8 symbols");
  const InteriorSequence s = generate_interior(P, g.levels);
  write_sequence_file(g.out, interior_manifest(s), s.sequence);
  std::cout << "interior: delta=" << to_string(P.delta) << " levels=" << g.levels
            << " length=" << s.sequence.horizon() << " -> " << g.out << "\n";
  for (const auto& t : s.targets)
    std::cout << "  rho_" << t.level << " = (" << to_string(t.x()) << ", " << to_string(t.y()) << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string in;
  std::string checks;
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> samples;
  bool timing = false;
  std::string out;
};

const std::vector<std::string> kAllChecks = {"facts", "toeplitz", "almost", "pis",   "geometry", "freq",
                                             "depth", "pq",       "ps",     "lemmas", "sweep",   "interior"};

const std::map<std::string, std::set<std::string>> kApplicable = {
    {"segment", {"facts", "toeplitz", "almost", "pis", "geometry", "freq", "depth"}},
    {"separator", {"facts", "toeplitz", "almost", "pq", "ps", "lemmas", "sweep"}},
    {"interior", {"facts", "toeplitz", "almost", "interior"}},
};

std::vector<Report> run_check(const std::string& name, const std::string& construction, const SequenceFile& f,
                              const VerifyArgs& a) {
  const BlockSchedule S = BlockSchedule::from_json(f.manifest.at("schedule"));
  const auto& body = f.body;
  const std::uint64_t budget = resolve_budget(a.budget, 100'000'000);

  if (!kApplicable.at(construction).count(name))
    return {Report::skipped(name, "", "check '" + name + "' does not apply to " + construction + " sequences")};

  if (name == "facts") {
    FactsOptions o;
    o.budget = budget;
    return verify_facts(S, o);
  }
  if (name == "toeplitz") {
    ToeplitzOptions o;
    o.seed = a.seed;
    o.budget = budget;
    if (a.samples) o.samples = *a.samples;
    return {toeplitz_check(body, S, o)};
  }
  if (name == "almost") {
    AlmostPeriodicityOptions o;
    o.horizon = std::min<std::uint64_t>(body.horizon(), 1'000'000);
    o.budget = budget;
    return {almost_periodicity_check(body, o)};
  }
  if (construction == "segment") {
    const SegmentParams P = segment_params_from(f.manifest);
    if (name == "pis") {
      std::vector<Report> out;
      const std::uint64_t hi = std::min<std::uint64_t>(body.horizon(), 100'000);
      for (int n = 1; n <= 2; ++n) out.push_back(check_pis(P, body, n, 1, hi));
      return out;
    }
    if (name == "geometry") return {check_window_geometry(P, body, 2)};
    if (name == "freq") return {check_endpoint_frequencies(P, body)};
    if (name == "depth") {
      // Needs the generator's bookkeeping; regenerate and compare with the file.
      const SegmentSequence s = generate_segment(P, body.horizon());
      if (!std::equal(s.sequence.symbols().begin(), s.sequence.symbols().end(), body.symbols().begin()))
        return {Report::skipped("segment_depth_bound", "", "file body differs from the regenerated sequence")};
      return {check_depth_bound(s)};
    }
  }
  if (construction == "separator") {
    const SeparatorSequence seq(separator_params_from(f.manifest));
    if (name == "pq") {
      std::vector<Report> out;
      for (int n = 1; n <= 3 && n < seq.schedule().max_level(); ++n) out.push_back(verify_pq(seq, n));
      return out;
    }
    if (name == "ps") {
      CorridorOptions o;
      o.seed = a.seed;
      if (a.samples) o.samples = *a.samples;
      return {check_corridor(seq, o)};
    }
    if (name == "lemmas") {
      LemmaOptions o;
      o.seed = a.seed;
      if (a.samples) o.samples = *a.samples;
      return check_separator_lemmas(seq, o);
    }
    if (name == "sweep") return {check_sweep(seq, sweep_path(seq, 1))};
  }
  if (construction == "interior" && name == "interior")
    return {check_interior(interior_params_from(f.manifest), body, targets_from_json(f.manifest.at("params").at("targets")))};
  throw std::logic_error("unhandled check " + name);
}

int verify_cmd(const VerifyArgs& a) {
  const SequenceFile f = read_sequence_file(a.in);
  const auto construction = f.manifest.at("construction").get<std::string>();
  if (!kApplicable.count(construction)) throw UsageError("unknown construction '" + construction + "'");
  std::vector<std::string> names;
  if (a.checks.empty()) {
    for (const auto& c : kAllChecks)
      if (kApplicable.at(construction).count(c)) names.push_back(c);
  } else {
    const auto wanted = split_checks(a.checks);
    for (const auto& c : wanted)
      if (std::find(kAllChecks.begin(), kAllChecks.end(), c) == kAllChecks.end())
        throw UsageError("unknown check '" + c + "'");
    for (const auto& c : kAllChecks)
      if (wanted.count(c)) names.push_back(c);
  }
  json reports = json::array();
  bool failed = false;
  for (const auto& name : names) {
    const auto t0 = std::chrono::steady_clock::now();
    auto reps = run_check(name, construction, f, a);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& r : reps) {
      if (a.timing) r.wall_time = secs;
      failed = failed || r.status == Status::fail;
      reports.push_back(r.to_json());
    }
  }
  const std::string text = reports.dump(2) + "\n";
  if (a.out.empty())
    std::cout << text;
  else
    write_atomically(a.out, text);
  return failed ? kExitFail : 0;
}

// ---------------------------------------------------------------------------
// analyze / sweep / plot

struct AnalyzeArgs {
  std::string in, out, range;
  std::uint64_t window = 0, stride = 1;
  std::optional<std::uint64_t> budget;
};

int analyze_cmd(const AnalyzeArgs& a) {
  const SequenceFile f = read_sequence_file(a.in);
  std::uint64_t lo = 1, hi = f.body.horizon();
  if (!a.range.empty()) {
    const auto [l, h] = parse_pair(a.range);
    lo = to_u64(boost::multiprecision::numerator(l));
    hi = to_u64(boost::multiprecision::numerator(h));
  }
  if (a.window == 0) throw UsageError("--window must be positive");
  const auto cloud = window_cloud(f.body, a.window, lo, hi, a.stride, resolve_budget(a.budget, 10'000'000));
  json footer = {{"kind", "window_cloud"},
                 {"label", "finite-n approximant"},
                 {"construction", f.manifest.at("construction")},
                 {"window", a.window},
                 {"stride", a.stride},
                 {"range", {lo, hi}},
                 {"points", cloud.points.size()},
                 {"truncated", cloud.truncated}};
  if (!cloud.points.empty()) {
    std::vector<RotationVector> pts;
    pts.reserve(cloud.points.size());
    for (const auto& pr : cloud.points) pts.push_back(pr.second);
    const Hull h = hull(pts);
    footer["hull_vertices"] = h.vertices.size();
    footer["hull_area"] = to_string(h.area);
  }
  write_atomically(a.out, render_csv(cloud.points, &footer));
  std::cout << "cloud: " << cloud.points.size() << " points -> " << a.out << (cloud.truncated ? " (truncated)" : "")
            << "\n";
  return cloud.truncated ? kExitBudget : 0;
}

struct SweepArgs {
  std::string in, out;
  int level = 1;
  std::uint64_t stride = 0;
};

int sweep_cmd(const SweepArgs& a) {
  const SequenceFile f = read_sequence_file(a.in);
  if (f.manifest.at("construction") != "separator") throw UsageError("sweep needs a separator sequence file");
  const SeparatorSequence seq(separator_params_from(f.manifest));
  const SweepPath sp = sweep_path(seq, a.level, a.stride);
  const Report rep = check_sweep(seq, sp);
  std::vector<std::pair<std::uint64_t, RotationVector>> rows;
  rows.reserve(sp.points.size());
  for (const auto& [i, r] : sp.points) rows.emplace_back(sp.J1.lo + i, r);
  json footer = rep.statistics;
  footer["kind"] = "sweep_path";
  footer["status"] = to_string(rep.status);
  write_atomically(a.out, render_csv(rows, &footer));
  std::cout << "sweep: " << rows.size() << " points, winding number " << footer["winding_number"] << " -> " << a.out
            << "\n";
  return rep.passed() ? 0 : kExitFail;
}

int plot_cmd(const std::string& in, const std::string& out) {
  const CsvCloud c = parse_csv(read_file(in));
  std::vector<Point2> pts;
  pts.reserve(c.rows.size());
  for (const auto& r : c.rows) pts.push_back(r.second);
  const bool path = c.footer.is_object() && c.footer.value("kind", "") == "sweep_path";
  write_atomically(out, render_svg(pts, path));
  std::cout << "plot: " << pts.size() << " markers -> " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toeplitz sequences over {0,1,2} and their symbolic rotation sets"};
  app.require_subcommand(1);
  int rc = 0;

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "generate a sequence file");
  gen->require_subcommand(1);
  auto* gseg = gen->add_subcommand("segment", "rotation set equal to the segment [0, v]");
  gseg->add_option("--v", g.v, "v as x,y (rationals such as 1/4,1/4)")->required();
  gseg->add_option("--a1", g.a1, "override a_1 (must not be below the minimum)");
  gseg->add_option("--length", g.length, "number of symbols")->required();
  gseg->add_option("--out", g.out, "output file")->required();
  gseg->callback([&] { rc = generate_segment_cmd(g); });

  auto* gsep = gen->add_subcommand("separator", "plane-separating rotation set");
  gsep->add_option("--K", g.K, "K (>= 17)");
  gsep->add_option("--L", g.L, "L (>= 64)");
  gsep->add_option("--dexp", g.dexp, "d_n = 2^(n + dexp), default 5");
  gsep->add_flag("--toy-mode", g.toy, "record violated conditions instead of rejecting");
  gsep->add_option("--length", g.length, "number of symbols")->required();
  gsep->add_option("--out", g.out, "output file")->required();
  gsep->callback([&] { rc = generate_separator_cmd(g); });

  auto* gint = gen->add_subcommand("interior", "rotation set with non-empty interior");
  gint->add_option("--a1", g.a1, "a_1")->required();
  gint->add_option("--dexp", g.dexp, "d_n = 2^(n + dexp), default 4");
  gint->add_option("--levels", g.levels, "levels to materialize")->check(CLI::Range(1, 10));
  gint->add_option("--target-seed", g.target_seed, "first index of the low-discrepancy target sequence");
  gint->add_option("--out", g.out, "output file")->required();
  gint->callback([&] { rc = generate_interior_cmd(g); });

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "run verification checks on a sequence file");
  ver->add_option("--in", va.in, "sequence file")->required();
  ver->add_option("--checks", va.checks,
                  "comma-separated: facts,toeplitz,almost,pis,geometry,freq,depth,pq,ps,lemmas,sweep,interior");
  ver->add_option("--budget", va.budget, "work budget (overrides TPZ_BUDGET)");
  ver->add_option("--seed", va.seed, "seed for sampled checks");
  ver->add_option("--samples", va.samples, "sample count for sampled checks");
  ver->add_flag("--timing", va.timing, "record wall time in reports");
  ver->add_option("--out", va.out, "write reports here instead of stdout");
  ver->callback([&] { rc = verify_cmd(va); });

  AnalyzeArgs aa;
  auto* ana = app.add_subcommand("analyze", "window cloud of rotation vectors as CSV");
  ana->add_option("--in", aa.in, "sequence file")->required();
  ana->add_option("--window", aa.window, "window length n")->required();
  ana->add_option("--stride", aa.stride, "distance between window starts");
  ana->add_option("--range", aa.range, "index range lo,hi covered by the windows");
  ana->add_option("--budget", aa.budget, "maximum number of windows");
  ana->add_option("--out", aa.out, "output CSV")->required();
  ana->callback([&] { rc = analyze_cmd(aa); });

  SweepArgs sa;
  auto* swp = app.add_subcommand("sweep", "separator sweep path as CSV with winding-number footer");
  swp->add_option("--in", sa.in, "separator sequence file")->required();
  swp->add_option("--level", sa.level, "level n");
  swp->add_option("--stride", sa.stride, "stride (default |J1|/1000)");
  swp->add_option("--out", sa.out, "output CSV")->required();
  swp->callback([&] { rc = sweep_cmd(sa); });

  std::string plot_in, plot_out;
  auto* plt = app.add_subcommand("plot", "SVG figure of a cloud or path CSV");
  plt->add_option("--in", plot_in, "CSV file")->required();
  plt->add_option("--out", plot_out, "output SVG")->required();
  plt->callback([&] { rc = plot_cmd(plot_in, plot_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const ParameterError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const FormatError& e) {
    std::cerr << "bad input file: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return rc;
}
