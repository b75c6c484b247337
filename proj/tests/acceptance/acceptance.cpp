// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "evotransit/cli.hpp"
#include "evotransit/engine.hpp"
#include "evotransit/imaging.hpp"
#include "evotransit/mutation.hpp"
#include "evotransit/onemax.hpp"
#include "fixtures.hpp"

using namespace evotransit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << std::fixed << v;
  return s.str();
}

class MemorySink final : public FrameSink {
 public:
  std::string emit(const Raster& frame, const FrameEvent& event) override {
    frames.push_back(frame);
    events.push_back(event);
    return {};
  }
  std::vector<Raster> frames;
  std::vector<FrameEvent> events;
};

// 1. Mean proposed flips under asymmetric mutation with c_s = 100, c_t = 50.
Outcome expected_flip_law() {
  constexpr int kProposals = 100'000;
  constexpr double kTolS = 1.0;
  constexpr double kTolT = 0.7;
  struct Setup {
    std::size_t w, h, t_count;
    Sampling sampling;
    const char* name;
  };
  // Both layouts keep count_s >= 1000 and count_t >= 500.
  const Setup setups[] = {{200, 200, 20'000, Sampling::GeometricSkip, "200x200 skip"},
                          {60, 50, 1'000, Sampling::PerCell, "60x50 per-cell"}};
  Outcome o{true, ""};
  for (const Setup& s : setups) {
    const auto pair = fixtures::all_differing(s.w, s.h, 17);
    auto state = TransitionState::build(pair.start, pair.target);
    std::vector<CellState> a(state.mutable_total(), CellState::S);
    for (std::size_t i = 0; i < s.t_count; ++i) a[i * (a.size() / s.t_count)] = CellState::T;
    state.assign(a);
    Rng rng(20240101);
    double s_to_t = 0;
    double t_to_s = 0;
    for (int i = 0; i < kProposals; ++i) {
      const auto d = asymmetric_mutation(state, 100.0, 50.0, rng, s.sampling);
      s_to_t += double(d.s_to_t());
      t_to_s += double(d.t_to_s());
    }
    s_to_t /= kProposals;
    t_to_s /= kProposals;
    o.pass = o.pass && std::abs(s_to_t - 50.0) <= kTolS && std::abs(t_to_s - 25.0) <= kTolT;
    o.detail += std::string(o.detail.empty() ? "" : "; ") + s.name + ": s->t " + fmt(s_to_t) + " (50+-1), t->s " +
                fmt(t_to_s) + " (25+-0.7)";
  }
  return o;
}

// 2. Doubling ratios of OneMax runtimes.
Outcome onemax_scaling() {
  const std::vector<std::size_t> ns{1024, 2048, 4096, 8192};
  constexpr std::size_t kRepeats = 50;
  constexpr std::uint64_t kSeed = 2024;
  const onemax::LabOperatorSpec asym{onemax::LabOperator::Asymmetric, 1.0, 1.0, Sampling::GeometricSkip};
  const onemax::LabOperatorSpec standard{onemax::LabOperator::Standard, 1.0, 1.0, Sampling::GeometricSkip};
  const auto ra = onemax::scaling_experiment(asym, ns, kRepeats, kSeed);
  const auto rs = onemax::scaling_experiment(standard, ns, kRepeats, kSeed);

  bool pass = ra.sufficient_points && rs.sufficient_points;
  std::string detail = "asym ratios";
  for (double r : ra.doubling_ratios) {
    pass = pass && r >= 1.7 && r <= 2.3;
    detail += " " + fmt(r, 3);
  }
  detail += " in [1.7,2.3]; standard ratios";
  for (double r : rs.doubling_ratios) {
    pass = pass && r > 2.1;
    detail += " " + fmt(r, 3);
  }
  pass = pass && rs.nlogn.residual < rs.linear.residual;
  detail += " > 2.1; standard residual nlogn " + fmt(rs.nlogn.residual, 5) + " vs linear " +
            fmt(rs.linear.residual, 5);
  return {pass, detail};
}

// 3. Drift at k and k/10 zeros, n = 10^4.
Outcome drift_law() {
  constexpr std::size_t kN = 10'000;
  constexpr std::size_t kSamples = 1'000'000;
  const std::vector<std::size_t> ks{1000, 100};
  const onemax::LabOperatorSpec asym{onemax::LabOperator::Asymmetric, 1.0, 1.0, Sampling::GeometricSkip};
  const onemax::LabOperatorSpec standard{onemax::LabOperator::Standard, 1.0, 1.0, Sampling::GeometricSkip};
  const auto ds = onemax::drift_experiment(kN, ks, standard, kSamples, 31);
  const auto da = onemax::drift_experiment(kN, ks, asym, kSamples, 31);
  const double rs = ds[0].mean_gain / ds[1].mean_gain;
  const double ra = da[0].mean_gain / da[1].mean_gain;
  const bool pass = rs >= 7.0 && rs <= 13.0 && ra >= 0.5 && ra <= 2.0;
  return {pass, "standard " + fmt(ds[0].mean_gain, 5) + "/" + fmt(ds[1].mean_gain, 5) + " = " + fmt(rs, 3) +
                    " in [7,13]; asymmetric " + fmt(da[0].mean_gain, 5) + "/" + fmt(da[1].mean_gain, 5) + " = " +
                    fmt(ra, 3) + " in [0.5,2]"};
}

std::vector<OperatorSpec> every_operator() {
  std::vector<OperatorSpec> out;
  for (OperatorKind kind : {OperatorKind::Standard, OperatorKind::Asymmetric, OperatorKind::Strip,
                            OperatorKind::CombinedStrip, OperatorKind::Box}) {
    OperatorSpec op;
    op.kind = kind;
    out.push_back(op);
  }
  for (OperatorKind partner : {OperatorKind::Strip, OperatorKind::CombinedStrip, OperatorKind::Box}) {
    OperatorSpec op;
    op.kind = OperatorKind::Composite;
    op.composite_partner = partner;
    out.push_back(op);
  }
  return out;
}

// 4. Fitness never drops; geometric operators never reject.
Outcome elitism() {
  const auto pair = fixtures::all_differing(64, 64, 4);
  Outcome o{true, ""};
  std::size_t geometric_rejections = 0;
  std::size_t drops = 0;
  constexpr std::uint64_t kSteps = 10'000;
  for (const OperatorSpec& op : every_operator()) {
    // Runs that complete early are followed by fresh runs until kSteps
    // steps have been taken in total.
    std::uint64_t steps = 0;
    std::uint64_t rejected = 0;
    std::size_t restarts = 0;
    for (std::uint64_t seed = 99; steps < kSteps; ++seed, ++restarts) {
      RunConfig config;
      config.op = op;
      config.seed = seed;
      config.max_generations = kSteps - steps;
      config.check_invariants = true;
      std::size_t last = 0;
      const RunReport report = run(pair.start, pair.target, config, nullptr,
                                   [&](std::uint64_t, bool, const TransitionState& s) {
                                     if (fitness(s) < last) ++drops;
                                     last = fitness(s);
                                   });
      steps += report.generations_run;
      rejected += report.rejected;
    }
    const bool geometric = op.kind == OperatorKind::Strip || op.kind == OperatorKind::CombinedStrip ||
                           op.kind == OperatorKind::Box;
    if (geometric) geometric_rejections += rejected;
    o.detail += std::string(o.detail.empty() ? "" : ", ") + std::string(to_string(op.kind)) +
                (op.kind == OperatorKind::Composite ? "/" + std::string(to_string(op.composite_partner)) : "") +
                " " + std::to_string(steps) + " steps in " + std::to_string(restarts) + " runs, " +
                std::to_string(rejected) + " rejected";
  }
  o.pass = drops == 0 && geometric_rejections == 0;
  o.detail = "fitness drops " + std::to_string(drops) + ", geometric rejections " +
             std::to_string(geometric_rejections) + " (" + o.detail + ")";
  return o;
}

// 5. One milestone frame per threshold at the first generation reaching it.
Outcome milestones() {
  const auto pair = fixtures::all_differing(64, 64, 5);
  RunConfig config;
  config.op.kind = OperatorKind::Box;
  config.seed = 12;
  MemorySink sink;
  std::vector<std::size_t> t_by_generation{0};
  const RunReport report = run(pair.start, pair.target, config, &sink,
                               [&](std::uint64_t, bool, const TransitionState& s) {
                                 t_by_generation.push_back(s.count_t());
                               });
  const double total = 64.0 * 64.0;
  bool pass = report.termination == Termination::Complete;
  std::string detail;
  std::size_t milestone_frames = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < sink.frames.size(); ++i) {
    if (sink.events[i].tag != FrameTag::Milestone) continue;
    ++milestone_frames;
    if (m >= kDefaultMilestones.size()) {
      pass = false;
      break;
    }
    const double threshold = kDefaultMilestones[m++];
    const std::uint64_t g = sink.events[i].generation;
    // Recount the frame against the target pixel by pixel.
    std::size_t agree = 0;
    for (std::size_t p = 0; p < sink.frames[i].size(); ++p) agree += sink.frames[i][p] == pair.target[p];
    const bool first = double(agree) / total >= threshold && double(t_by_generation[g - 1]) / total < threshold &&
                       agree == t_by_generation[g];
    pass = pass && first && sink.events[i].fraction == threshold;
    detail += (detail.empty() ? "" : ", ") + fmt(threshold, 3) + "@g" + std::to_string(g) + " (" +
              std::to_string(agree) + "/4096)";
  }
  pass = pass && milestone_frames == kDefaultMilestones.size();
  return {pass, std::to_string(milestone_frames) + " milestone frames: " + detail};
}

// 6. Identical config and seed give identical files, for every operator.
Outcome determinism() {
  fixtures::TempDir dir;
  const auto pair = fixtures::all_differing(32, 32, 6);
  write_png(pair.start, dir / "start.png");
  write_png(pair.target, dir / "target.png");
  const std::vector<std::string> names{"standard", "asymmetric", "strip", "combined-strip",
                                       "box", "asym+strip", "asym+combined-strip", "asym+box"};
  std::size_t files = 0;
  std::vector<std::string> failures;
  for (const std::string& name : names) {
    const fs::path out = dir / "out";
    const std::vector<std::string> args{"transition", "--start", (dir / "start.png").string(), "--target",
                                        (dir / "target.png").string(), "--operator", name, "--seed", "77",
                                        "--max-gens", "20000", "--frame-every", "2500", "--out-dir", out.string()};
    std::ostringstream sink;
    if (cli::run_main(args, sink, sink) != cli::kExitOk) {
      failures.push_back(name + " (first run failed)");
      continue;
    }
    const fs::path first = dir / ("first_" + std::to_string(files));
    fs::rename(out, first);
    if (cli::run_main(args, sink, sink) != cli::kExitOk) {
      failures.push_back(name + " (second run failed)");
      continue;
    }
    std::vector<fs::path> entries;
    for (const auto& e : fs::directory_iterator(first)) entries.push_back(e.path().filename());
    std::size_t here = 0;
    bool same = fs::exists(first / "report.json");
    for (const auto& e : fs::directory_iterator(out)) same = same && fs::exists(first / e.path().filename());
    for (const fs::path& name_only : entries) {
      same = same && fixtures::read_bytes(first / name_only) == fixtures::read_bytes(out / name_only);
      ++here;
    }
    files += here;
    if (!same || here < 3) failures.push_back(name);
    fs::remove_all(out);
  }
  std::string detail = std::to_string(names.size()) + " operators, " + std::to_string(files) + " files compared";
  for (const auto& f : failures) detail += "; mismatch: " + f;
  return {failures.empty(), detail};
}

// 7. Engine and lab agree step by step under shared seeds.
Outcome oracle_equivalence() {
  struct Dim {
    std::size_t w, h;
  };
  const Dim dims[] = {{1, 1}, {2, 2}, {3, 2}, {3, 3}, {4, 3}, {4, 4}};
  struct Case {
    OperatorKind engine;
    onemax::LabOperator lab;
    double c_s, c_t;
    Sampling sampling;
  };
  const Case cases[] = {{OperatorKind::Standard, onemax::LabOperator::Standard, 1, 1, Sampling::PerCell},
                        {OperatorKind::Asymmetric, onemax::LabOperator::Asymmetric, 1, 1, Sampling::PerCell},
                        {OperatorKind::Asymmetric, onemax::LabOperator::Asymmetric, 3, 2, Sampling::PerCell},
                        {OperatorKind::Standard, onemax::LabOperator::Standard, 1, 1, Sampling::GeometricSkip},
                        {OperatorKind::Asymmetric, onemax::LabOperator::Asymmetric, 1, 1, Sampling::GeometricSkip}};
  std::size_t runs = 0;
  std::size_t mismatches = 0;
  for (const Dim& d : dims) {
    const auto pair = fixtures::all_differing(d.w, d.h, 7);
    for (const Case& c : cases) {
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RunConfig config;
        config.op.kind = c.engine;
        config.op.c_s = c.c_s;
        config.op.c_t = c.c_t;
        config.op.sampling = c.sampling;
        config.seed = seed;
        std::vector<bool> engine_trace;
        const RunReport report = run(pair.start, pair.target, config, nullptr,
                                     [&](std::uint64_t, bool accepted, const TransitionState&) {
                                       engine_trace.push_back(accepted);
                                     });
        const auto lab = onemax::run_to_optimum_traced(d.w * d.h, {c.lab, c.c_s, c.c_t, c.sampling}, seed);
        ++runs;
        if (report.generations_run != lab.generations || engine_trace != lab.accepted) ++mismatches;
      }
    }
  }
  return {mismatches == 0, std::to_string(runs) + " paired runs (100 seeds x 6 sizes up to 4x4 x 5 operator setups), " +
                               std::to_string(mismatches) + " mismatches"};
}

// 8. Clipped region sizes.
Outcome geometry() {
  const auto pair = fixtures::all_differing(200, 200, 8);
  auto state = TransitionState::build(pair.start, pair.target);
  const OperatorSpec defaults;
  const std::size_t strip = region_delta(state, {150, 17}, {1, defaults.strip_length}).flips.size();
  const std::size_t corner = region_delta(state, {199, 199}, {defaults.box_size, defaults.box_size}).flips.size();
  const std::size_t horizontal = region_delta(state, {0, 0}, defaults.h_strip).flips.size();
  std::size_t largest = 0;
  Rng rng(8);
  for (int i = 0; i < 20'000; ++i) {
    largest = std::max(largest, combined_strip_mutation(state, defaults.h_strip, defaults.v_strip, rng).flips.size());
  }
  const bool pass = strip == 50 && corner == 1 && horizontal <= 8000 && largest <= 8000;
  return {pass, "strip@150 " + std::to_string(strip) + " (50), box@(199,199) " + std::to_string(corner) +
                    " (1), horizontal@(0,0) " + std::to_string(horizontal) + " (<=8000), max of 20000 combined " +
                    std::to_string(largest) + " (<=8000)"};
}

// 9. Box-only and strip-only runs complete on 32x32.
Outcome completion() {
  const auto pair = fixtures::all_differing(32, 32, 9);
  std::size_t complete = 0;
  std::uint64_t worst = 0;
  const RunConfig defaults;
  for (OperatorKind kind : {OperatorKind::Box, OperatorKind::Strip}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      RunConfig config;
      config.op.kind = kind;
      config.seed = seed;
      const RunReport report = run(pair.start, pair.target, config, nullptr);
      complete += report.termination == Termination::Complete && report.final_fraction == 1.0;
      worst = std::max(worst, report.generations_run);
    }
  }
  return {complete == 200, std::to_string(complete) + "/200 runs complete, slowest " + std::to_string(worst) +
                               " generations (cap " + std::to_string(defaults.max_generations) + ")"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_seconds;  // 0: no limit
    std::function<Outcome()> check;
  };
  const Criterion criteria[] = {
      {1, "expected-flip law", 30.0, expected_flip_law},
      {2, "onemax scaling", 300.0, onemax_scaling},
      {3, "drift law", 120.0, drift_law},
      {4, "elitism invariant", 0.0, elitism},
      {5, "milestone protocol", 0.0, milestones},
      {6, "determinism", 0.0, determinism},
      {7, "oracle equivalence", 0.0, oracle_equivalence},
      {8, "geometry", 0.0, geometry},
      {9, "completion", 0.0, completion},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_seconds > 0 && secs >= c.limit_seconds) {
      o.pass = false;
      o.detail += "; over time limit " + fmt(c.limit_seconds, 0) + " s";
    }
    failed += !o.pass;
    std::printf("[%s] %d %s (%.2f s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
