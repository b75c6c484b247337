#include "evotransit/cli.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "evotransit/error.hpp"
#include "evotransit/imaging.hpp"
#include "evotransit/parallel.hpp"

namespace evotransit::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kProgram = "evotransit";
constexpr int kDefaultGifDelayMs = 100;

[[noreturn]] void usage(const std::string& message) { throw Error(ErrorKind::UsageError, message); }

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) usage("invalid " + std::string(what) + ": '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = text.find(sep, pos);
    parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return parts;
}

std::vector<double> parse_milestones(std::string_view text) {
  std::vector<double> out;
  for (std::string_view part : split(text, ',')) out.push_back(parse_number<double>(part, "milestone"));
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!(out[i] > 0.0 && out[i] < 1.0)) usage("milestones must lie strictly between 0 and 1");
    if (i > 0 && !(out[i] > out[i - 1])) usage("milestones must be strictly increasing");
  }
  return out;
}

std::vector<std::size_t> parse_size_list(std::string_view text, std::string_view what) {
  std::vector<std::size_t> out;
  for (std::string_view part : split(text, ',')) out.push_back(parse_number<std::size_t>(part, what));
  return out;
}

Extent parse_extent(std::string_view text, std::string_view what) {
  const auto parts = split(text, 'x');
  if (parts.size() != 2) usage(std::string(what) + " must look like WIDTHxHEIGHT");
  Extent e{parse_number<std::size_t>(parts[0], what), parse_number<std::size_t>(parts[1], what)};
  if (e.width < 1 || e.height < 1) usage(std::string(what) + " dimensions must be >= 1");
  return e;
}

Interleave parse_interleave(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) usage("--interleave must look like A:B");
  Interleave r{parse_number<std::uint32_t>(parts[0], "interleave"), parse_number<std::uint32_t>(parts[1], "interleave")};
  if (r.asymmetric < 1 || r.partner < 1) usage("--interleave terms must be >= 1");
  return r;
}

SeedRange parse_seed_range(std::string_view text) {
  const std::size_t dots = text.find("..");
  if (dots == std::string_view::npos) usage("--seeds must look like A..B");
  SeedRange r{parse_number<std::uint64_t>(text.substr(0, dots), "seed"),
              parse_number<std::uint64_t>(text.substr(dots + 2), "seed")};
  if (r.last < r.first) usage("--seeds range is empty");
  return r;
}

Sampling parse_sampling(std::string_view text) {
  if (text == "per-cell") return Sampling::PerCell;
  if (text == "skip") return Sampling::GeometricSkip;
  usage("--sampling must be per-cell or skip");
}

std::string join_csv(const std::vector<double>& values) {
  std::string out;
  for (double v : values) out += (out.empty() ? "" : ",") + format_double(v);
  return out;
}

std::string shell_quote(const std::string& arg) {
  if (!arg.empty() && arg.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-_=./:,+") ==
                          std::string::npos) {
    return arg;
  }
  std::string out = "'";
  for (char c : arg) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

void require_existing_file(const fs::path& path, std::string_view flag) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) usage(std::string(flag) + ": no such file '" + path.string() + "'");
}

void parse_transition(CLI::App& sub, const std::map<std::string, std::string>& values,
                      const std::vector<int>& gif_values, bool toggle, bool fit, TransitionArgs& t) {
  auto has = [&](const std::string& name) { return sub.count(name) > 0; };
  auto value = [&](const std::string& name) { return values.at(name); };

  if (!has("--start")) usage("transition needs --start");
  if (!has("--target")) usage("transition needs --target");
  t.start = value("--start");
  t.target = value("--target");
  require_existing_file(t.start, "--start");
  require_existing_file(t.target, "--target");

  OperatorSpec& op = t.config.op;
  if (has("--operator")) t.operator_name = value("--operator");
  apply_operator_name(t.operator_name, op);
  if (has("--cs")) op.c_s = parse_number<double>(value("--cs"), "--cs");
  if (has("--ct")) op.c_t = parse_number<double>(value("--ct"), "--ct");
  if (!(op.c_s >= 1.0)) usage("--cs must be >= 1");
  if (!(op.c_t >= 1.0)) usage("--ct must be >= 1");
  if (has("--strip-length")) op.strip_length = parse_number<std::size_t>(value("--strip-length"), "--strip-length");
  if (op.strip_length < 1) usage("--strip-length must be >= 1");
  if (has("--h-strip")) op.h_strip = parse_extent(value("--h-strip"), "--h-strip");
  if (has("--v-strip")) op.v_strip = parse_extent(value("--v-strip"), "--v-strip");
  if (has("--box-size")) op.box_size = parse_number<std::size_t>(value("--box-size"), "--box-size");
  if (op.box_size < 1) usage("--box-size must be >= 1");
  if (has("--interleave")) op.interleave = parse_interleave(value("--interleave"));
  if (has("--sampling")) op.sampling = parse_sampling(value("--sampling"));
  op.geometric_mode = toggle ? GeometricMode::Toggle : GeometricMode::SetToTarget;
  op.anchor_mode = fit ? AnchorMode::Fit : AnchorMode::Clip;

  if (has("--seed") && has("--seeds")) usage("--seed and --seeds are mutually exclusive");
  if (has("--seed")) t.config.seed = parse_number<std::uint64_t>(value("--seed"), "--seed");
  if (has("--seeds")) t.seeds = parse_seed_range(value("--seeds"));
  if (has("--milestones")) t.config.milestones = parse_milestones(value("--milestones"));
  if (has("--max-gens")) t.config.max_generations = parse_number<std::uint64_t>(value("--max-gens"), "--max-gens");
  if (t.config.max_generations < 1) usage("--max-gens must be >= 1");
  if (has("--frame-every")) {
    t.config.frame_every = parse_number<std::uint64_t>(value("--frame-every"), "--frame-every");
    if (*t.config.frame_every < 1) usage("--frame-every must be >= 1");
  }
  if (has("--out-dir")) t.out_dir = value("--out-dir");
  if (has("--report")) t.report_path = value("--report");
  if (has("--gif")) {
    if (!t.out_dir) usage("--gif needs --out-dir");
    t.gif_delay_ms = gif_values.empty() ? kDefaultGifDelayMs : gif_values.front();
    if (*t.gif_delay_ms < 0) usage("--gif delay must be >= 0");
  }
  try {
    t.config.validate();
  } catch (const Error& e) {
    usage(e.what());
  }
}

void parse_onemax(CLI::App& sub, const std::map<std::string, std::string>& values, OnemaxArgs& o) {
  auto has = [&](const std::string& name) { return sub.count(name) > 0; };
  auto value = [&](const std::string& name) { return values.at(name); };

  const std::string op = has("--operator") ? value("--operator") : "asymmetric";
  if (op == "standard") {
    o.op.kind = onemax::LabOperator::Standard;
  } else if (op == "asymmetric") {
    o.op.kind = onemax::LabOperator::Asymmetric;
  } else {
    usage("onemax --operator must be standard or asymmetric");
  }
  if (has("--cs")) o.op.c_s = parse_number<double>(value("--cs"), "--cs");
  if (has("--ct")) o.op.c_t = parse_number<double>(value("--ct"), "--ct");
  if (!(o.op.c_s >= 1.0) || !(o.op.c_t >= 1.0)) usage("--cs and --ct must be >= 1");
  if (has("--sampling")) o.op.sampling = parse_sampling(value("--sampling"));
  if (has("--experiment")) {
    const std::string e = value("--experiment");
    if (e == "scaling") {
      o.experiment = LabExperiment::Scaling;
    } else if (e == "drift") {
      o.experiment = LabExperiment::Drift;
    } else {
      usage("--experiment must be scaling or drift");
    }
  }
  if (has("--n-list")) o.n_list = parse_size_list(value("--n-list"), "--n-list");
  for (std::size_t i = 0; i < o.n_list.size(); ++i) {
    if (o.n_list[i] < 1 || (i > 0 && o.n_list[i] <= o.n_list[i - 1])) {
      usage("--n-list must be positive and strictly increasing");
    }
  }
  if (has("--repeats")) o.repeats = parse_number<std::size_t>(value("--repeats"), "--repeats");
  if (o.repeats < onemax::kMinRepeats) usage("--repeats must be >= " + std::to_string(onemax::kMinRepeats));
  if (has("--seed")) o.seed = parse_number<std::uint64_t>(value("--seed"), "--seed");
  if (has("--csv")) o.csv = value("--csv");
  if (has("--n")) o.drift_n = parse_number<std::size_t>(value("--n"), "--n");
  if (o.drift_n < 1) usage("--n must be >= 1");
  if (has("--k-list")) o.k_list = parse_size_list(value("--k-list"), "--k-list");
  for (std::size_t k : o.k_list) {
    if (k < 1 || k > o.drift_n) usage("--k-list values must lie in [1, n]");
  }
  if (has("--samples")) o.samples = parse_number<std::size_t>(value("--samples"), "--samples");
  if (o.samples < 2) usage("--samples must be >= 2");
}

struct SeedOutcome {
  std::string summary;
  int exit_code = kExitOk;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorKind::IoError, "cannot create directory " + dir.string());
}

SeedOutcome run_one_seed(const TransitionArgs& args, const Raster& start, const Raster& target, std::uint64_t seed,
                         const std::optional<fs::path>& out_dir, const fs::path& report_path) {
  RunConfig config = args.config;
  config.seed = seed;
  std::optional<DirectoryFrameSink> sink;
  if (out_dir) {
    ensure_dir(*out_dir);
    sink.emplace(*out_dir);
  }
  const RunReport report = run(start, target, config, sink ? &*sink : nullptr);

  Json json = to_json(report, config_echo(args, seed));
  if (args.gif_delay_ms && sink) {
    const fs::path gif = *out_dir / "transition.gif";
    assemble_animation(sink->records(), gif, *args.gif_delay_ms);
    json["animation"] = gif.string();
  }
  std::string reproduce;
  for (const std::string& a : reproduce_args(args, seed, out_dir, report_path)) {
    reproduce += (reproduce.empty() ? "" : " ") + shell_quote(a);
  }
  json["reproduce"] = reproduce;
  if (report_path.has_parent_path()) ensure_dir(report_path.parent_path());
  write_text(report_path, dump(json));

  std::ostringstream line;
  line << "seed=" << seed << " operator=" << args.operator_name << " generations=" << report.generations_run
       << " accepted=" << report.accepted << " rejected=" << report.rejected << " final_fraction=" << std::fixed
       << std::setprecision(4) << report.final_fraction << " termination=" << to_string(report.termination)
       << " report=" << report_path.string();
  return {line.str(), kExitOk};
}

int execute_transition(const TransitionArgs& args, std::ostream& out) {
  const Raster start = load_raster(args.start);
  const Raster target = load_raster(args.target);
  if (!start.same_shape(target)) {
    throw Error(ErrorKind::DimensionMismatch, args.start.string() + " and " + args.target.string() + " differ in size");
  }
  const fs::path default_report = args.out_dir ? *args.out_dir / "report.json" : fs::path("report.json");

  if (!args.seeds) {
    const SeedOutcome o = run_one_seed(args, start, target, args.config.seed, args.out_dir,
                                       args.report_path.value_or(default_report));
    out << o.summary << '\n';
    return o.exit_code;
  }

  // Batch: each seed gets its own subdirectory next to the report.
  const fs::path base = args.out_dir ? *args.out_dir : args.report_path.value_or(default_report).parent_path();
  const std::uint64_t count = args.seeds->last - args.seeds->first + 1;
  std::vector<SeedOutcome> outcomes(count);
  parallel_for(count, thread_budget(), [&](std::size_t i) {
    const std::uint64_t seed = args.seeds->first + i;
    const fs::path dir = base / ("seed_" + std::to_string(seed));
    outcomes[i] = run_one_seed(args, start, target, seed, args.out_dir ? std::optional<fs::path>(dir) : std::nullopt,
                               dir / "report.json");
  });
  for (const SeedOutcome& o : outcomes) out << o.summary << '\n';
  return kExitOk;
}

int execute_onemax(const OnemaxArgs& args, std::ostream& out) {
  if (args.experiment == LabExperiment::Drift) {
    const auto points = onemax::drift_experiment(args.drift_n, args.k_list, args.op, args.samples, args.seed);
    out << "operator=" << onemax::to_string(args.op) << " n=" << args.drift_n << " samples=" << args.samples << '\n';
    for (const auto& p : points) {
      out << "k=" << p.k << " drift=" << format_double(p.mean_gain) << " stderr=" << format_double(p.std_error)
          << " p_improve=" << format_double(p.improve_probability) << '\n';
    }
    return kExitOk;
  }
  const onemax::ScalingResult result = onemax::scaling_experiment(args.op, args.n_list, args.repeats, args.seed);
  if (args.csv) {
    std::ofstream csv(*args.csv, std::ios::trunc);
    if (!csv) throw Error(ErrorKind::IoError, "cannot open " + args.csv->string() + " for writing");
    onemax::write_scaling_csv(result, csv);
    if (!csv) throw Error(ErrorKind::IoError, "write failed for " + args.csv->string());
  }
  out << "operator=" << onemax::to_string(args.op) << " repeats=" << args.repeats << '\n';
  for (const auto& row : result.rows) {
    out << "n=" << row.n << " mean=" << format_double(row.mean) << " sd=" << format_double(row.stddev)
        << " trimmed_mean=" << format_double(row.trimmed_mean) << '\n';
  }
  if (!result.sufficient_points) {
    out << "fit: insufficient points\n";
    return kExitOk;
  }
  for (std::size_t i = 0; i < result.doubling_ratios.size(); ++i) {
    out << "ratio T(" << result.rows[i + 1].n << ")/T(" << result.rows[i].n
        << ")=" << format_double(result.doubling_ratios[i]) << '\n';
  }
  out << "fit linear c=" << format_double(result.linear.coefficient)
      << " residual=" << format_double(result.linear.residual) << '\n'
      << "fit n_log_n c=" << format_double(result.nlogn.coefficient)
      << " residual=" << format_double(result.nlogn.residual) << '\n'
      << "better=" << onemax::to_string(result.better) << '\n';
  return kExitOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UsageError:
    case ErrorKind::InvalidArgument: return kExitUsage;
    case ErrorKind::UnreadableFile:
    case ErrorKind::UnsupportedFormat:
    case ErrorKind::DecodeError:
    case ErrorKind::IoError:
    case ErrorKind::EmptyFrameList: return kExitIo;
    case ErrorKind::DimensionMismatch: return kExitDimensionMismatch;
    case ErrorKind::EmptyMutableSet:
    case ErrorKind::SafetyCapExceeded: return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace

void apply_operator_name(std::string_view name, OperatorSpec& spec) {
  static constexpr std::pair<std::string_view, OperatorKind> kSimple[] = {
      {"standard", OperatorKind::Standard},
      {"asymmetric", OperatorKind::Asymmetric},
      {"strip", OperatorKind::Strip},
      {"combined-strip", OperatorKind::CombinedStrip},
      {"box", OperatorKind::Box},
  };
  for (const auto& [n, kind] : kSimple) {
    if (name == n) {
      spec.kind = kind;
      return;
    }
  }
  constexpr std::string_view kPrefix = "asym+";
  if (name.starts_with(kPrefix)) {
    const std::string_view partner = name.substr(kPrefix.size());
    for (const auto& [n, kind] : kSimple) {
      if (partner == n && (kind == OperatorKind::Strip || kind == OperatorKind::CombinedStrip || kind == OperatorKind::Box)) {
        spec.kind = OperatorKind::Composite;
        spec.composite_partner = kind;
        return;
      }
    }
  }
  usage("unknown operator '" + std::string(name) +
        "' (expected standard, asymmetric, strip, combined-strip, box, asym+strip, asym+combined-strip, asym+box)");
}

CliInvocation parse_and_validate(const std::vector<std::string>& args) {
  CLI::App app{"Evolutionary image transition with (1+1) EA mutation operators", std::string(kProgram)};
  app.require_subcommand(0, 1);

  std::map<std::string, std::string> tvalues;
  std::vector<int> gif_values;
  bool toggle = false;
  bool fit = false;
  CLI::App* transition = app.add_subcommand("transition", "Evolve a start image into a target image");
  const std::pair<const char*, const char*> transition_flags[] = {
      {"--start", "Start image (PNG, JPEG or BMP)"},
      {"--target", "Target image with the same dimensions"},
      {"--operator", "standard, asymmetric, strip, combined-strip, box, asym+strip, asym+combined-strip, asym+box"},
      {"--cs", "Asymmetric constant for S pixels (>= 1, default 100)"},
      {"--ct", "Asymmetric constant for T pixels (>= 1, default 50)"},
      {"--strip-length", "Vertical strip length (default 180)"},
      {"--h-strip", "Horizontal strip of the combined operator, WxH (default 200x40)"},
      {"--v-strip", "Vertical strip of the combined operator, WxH (default 1x200)"},
      {"--box-size", "Box side length (default 3)"},
      {"--interleave", "Composite schedule A:B, asymmetric then partner generations (default 1:1)"},
      {"--seed", "RNG seed (default 0)"},
      {"--seeds", "Inclusive seed range A..B, one run per seed"},
      {"--milestones", "Comma-separated fractions in (0,1) (default 0.125,0.375,0.625,0.875)"},
      {"--max-gens", "Generation cap (default 10000000)"},
      {"--frame-every", "Also write a frame every N generations"},
      {"--out-dir", "Directory for frames and report.json"},
      {"--report", "Path of the JSON report"},
      {"--sampling", "per-cell (reproducible default) or skip (geometric skipping)"},
  };
  for (const auto& [flag, help] : transition_flags) transition->add_option(flag, tvalues[flag], help);
  transition->add_option("--gif", gif_values, "Write transition.gif, optional frame delay in ms")->expected(0, 1);
  transition->add_flag("--toggle-geometric", toggle, "Geometric operators toggle instead of setting to target");
  transition->add_flag("--fit-anchors", fit, "Keep geometric regions inside the image where possible");

  std::map<std::string, std::string> ovalues;
  CLI::App* lab = app.add_subcommand("onemax", "OneMax runtime and drift experiments");
  const std::pair<const char*, const char*> lab_flags[] = {
      {"--operator", "standard or asymmetric (default asymmetric)"},
      {"--cs", "Asymmetric constant for zero bits (default 1)"},
      {"--ct", "Asymmetric constant for one bits (default 1)"},
      {"--n-list", "Comma-separated, strictly increasing bitstring lengths"},
      {"--repeats", "Runs per n, at least 30 (default 50)"},
      {"--seed", "Base seed (default 0)"},
      {"--csv", "Write per-run generations to this CSV file"},
      {"--experiment", "scaling or drift (default scaling)"},
      {"--n", "Bitstring length for drift (default 10000)"},
      {"--k-list", "Comma-separated zero counts for drift (default 1000,100)"},
      {"--samples", "Proposals per k for drift (default 1000000)"},
      {"--sampling", "skip (default) or per-cell"},
  };
  for (const auto& [flag, help] : lab_flags) lab->add_option(flag, ovalues[flag], help);

  CliInvocation inv;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    inv.help_text = transition->parsed() ? transition->help() : lab->parsed() ? lab->help() : app.help();
    return inv;
  } catch (const CLI::ParseError& e) {
    usage(e.what());
  }
  if (transition->parsed()) {
    inv.subcommand = Subcommand::Transition;
    parse_transition(*transition, tvalues, gif_values, toggle, fit, inv.transition);
  } else if (lab->parsed()) {
    inv.subcommand = Subcommand::Onemax;
    parse_onemax(*lab, ovalues, inv.onemax);
  } else {
    usage("a subcommand is required: transition or onemax (see --help)");
  }
  return inv;
}

Json config_echo(const TransitionArgs& args, std::uint64_t seed) {
  const OperatorSpec& op = args.config.op;
  Json j;
  j["start"] = args.start.string();
  j["target"] = args.target.string();
  j["operator"] = args.operator_name;
  j["cs"] = op.c_s;
  j["ct"] = op.c_t;
  j["strip_length"] = op.strip_length;
  j["h_strip"] = std::to_string(op.h_strip.width) + "x" + std::to_string(op.h_strip.height);
  j["v_strip"] = std::to_string(op.v_strip.width) + "x" + std::to_string(op.v_strip.height);
  j["box_size"] = op.box_size;
  j["interleave"] = std::to_string(op.interleave.asymmetric) + ":" + std::to_string(op.interleave.partner);
  j["seed"] = seed;
  j["seeds"] = args.seeds ? Json(std::to_string(args.seeds->first) + ".." + std::to_string(args.seeds->last))
                          : Json(nullptr);
  j["milestones"] = args.config.milestones;
  j["max_gens"] = args.config.max_generations;
  j["frame_every"] = args.config.frame_every ? Json(*args.config.frame_every) : Json(nullptr);
  j["out_dir"] = args.out_dir ? Json(args.out_dir->string()) : Json(nullptr);
  j["gif"] = args.gif_delay_ms ? Json(*args.gif_delay_ms) : Json(nullptr);
  j["toggle_geometric"] = op.geometric_mode == GeometricMode::Toggle;
  j["fit_anchors"] = op.anchor_mode == AnchorMode::Fit;
  j["sampling"] = to_string(op.sampling);
  j["engine"] = to_json(args.config);
  j["engine"]["seed"] = seed;
  return j;
}

std::vector<std::string> reproduce_args(const TransitionArgs& args, std::uint64_t seed,
                                        const std::optional<fs::path>& out_dir, const fs::path& report_path) {
  const OperatorSpec& op = args.config.op;
  std::vector<std::string> a{std::string(kProgram),
                             "transition",
                             "--start",
                             args.start.string(),
                             "--target",
                             args.target.string(),
                             "--operator",
                             args.operator_name,
                             "--cs",
                             format_double(op.c_s),
                             "--ct",
                             format_double(op.c_t),
                             "--strip-length",
                             std::to_string(op.strip_length),
                             "--h-strip",
                             std::to_string(op.h_strip.width) + "x" + std::to_string(op.h_strip.height),
                             "--v-strip",
                             std::to_string(op.v_strip.width) + "x" + std::to_string(op.v_strip.height),
                             "--box-size",
                             std::to_string(op.box_size),
                             "--interleave",
                             std::to_string(op.interleave.asymmetric) + ":" + std::to_string(op.interleave.partner),
                             "--seed",
                             std::to_string(seed),
                             "--milestones",
                             join_csv(args.config.milestones),
                             "--max-gens",
                             std::to_string(args.config.max_generations),
                             "--sampling",
                             std::string(to_string(op.sampling))};
  if (args.config.frame_every) {
    a.insert(a.end(), {"--frame-every", std::to_string(*args.config.frame_every)});
  }
  if (out_dir) a.insert(a.end(), {"--out-dir", out_dir->string()});
  a.insert(a.end(), {"--report", report_path.string()});
  if (args.gif_delay_ms && out_dir) a.insert(a.end(), {"--gif", std::to_string(*args.gif_delay_ms)});
  if (op.geometric_mode == GeometricMode::Toggle) a.emplace_back("--toggle-geometric");
  if (op.anchor_mode == AnchorMode::Fit) a.emplace_back("--fit-anchors");
  return a;
}

int execute(const CliInvocation& invocation, std::ostream& out, std::ostream& err) {
  if (!invocation.help_text.empty()) {
    out << invocation.help_text;
    return kExitOk;
  }
  try {
    switch (invocation.subcommand) {
      case Subcommand::Transition: return execute_transition(invocation.transition, out);
      case Subcommand::Onemax: return execute_onemax(invocation.onemax, out);
      case Subcommand::None: break;
    }
  } catch (const Error& e) {
    err << kProgram << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << kProgram << ": " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CliInvocation inv;
  try {
    inv = parse_and_validate(args);
  } catch (const Error& e) {
    err << kProgram << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
  return execute(inv, out, err);
}

}  // namespace evotransit::cli
