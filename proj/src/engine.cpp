#include "evotransit/engine.hpp"

#include <algorithm>
#include <string>

#include "evotransit/error.hpp"

namespace evotransit {

namespace {

constexpr std::uint64_t kTrajectorySamples = 10'000;

// Fitness only changes on accepted steps and is bounded by mutable_total,
// so keeping just the change points stays small; sampling happens at the end.
std::vector<TrajectoryPoint> sample_trajectory(const std::vector<TrajectoryPoint>& changes, std::uint64_t generations) {
  const std::uint64_t stride = std::max<std::uint64_t>(1, (generations + kTrajectorySamples - 1) / kTrajectorySamples);
  std::vector<TrajectoryPoint> out;
  std::size_t idx = 0;
  auto fitness_at = [&](std::uint64_t g) {
    while (idx + 1 < changes.size() && changes[idx + 1].generation <= g) ++idx;
    return changes[idx].fitness;
  };
  for (std::uint64_t g = 0; g <= generations; g += stride) out.push_back({g, fitness_at(g)});
  if (out.back().generation != generations) out.push_back({generations, fitness_at(generations)});
  return out;
}

}  // namespace

void RunConfig::validate() const {
  op.validate();
  if (max_generations < 1) throw Error(ErrorKind::InvalidArgument, "max_generations must be >= 1");
  if (frame_every && *frame_every < 1) throw Error(ErrorKind::InvalidArgument, "frame_every must be >= 1");
  for (std::size_t i = 0; i < milestones.size(); ++i) {
    if (!(milestones[i] > 0.0 && milestones[i] < 1.0)) {
      throw Error(ErrorKind::InvalidArgument, "milestones must lie strictly between 0 and 1");
    }
    if (i > 0 && !(milestones[i] > milestones[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "milestones must be strictly increasing");
    }
  }
}

bool accept_or_rollback(TransitionState& state, const MutationDelta& delta) {
  const std::size_t parent = fitness(state);
  state.apply(delta.flips);
  const auto offspring = static_cast<std::int64_t>(parent) + delta.fitness_change();
  if (offspring >= static_cast<std::int64_t>(parent)) return true;
  state.revert(delta.flips);
  return false;
}

StepResult step(TransitionState& state, const OperatorSpec& op, std::uint64_t generation_index, Rng& rng) {
  StepResult result;
  result.delta = propose(state, op, generation_index, rng);
  result.accepted = accept_or_rollback(state, result.delta);
  return result;
}

RunReport run(const Raster& start, const Raster& target, const RunConfig& config, FrameSink* sink,
              const StepObserver& observer) {
  config.validate();
  TransitionState state = TransitionState::build(start, target);
  RunReport report;
  report.mutable_total = state.mutable_total();

  auto emit = [&](const FrameEvent& event) -> std::string {
    if (sink == nullptr) return {};
    return sink->emit(render(state, start, target), event);
  };

  if (state.empty_mutable_set()) {
    report.termination = Termination::EmptyMutableSet;
    report.final_fraction = 1.0;
    report.fitness_trajectory.push_back({0, 0});
    if (config.emit_initial_final) {
      emit({0, 0.0, FrameTag::Initial});
      emit({0, 1.0, FrameTag::Final});
    }
    return report;
  }

  if (config.emit_initial_final) emit({0, 0.0, FrameTag::Initial});

  Rng rng = rng_stream(config.seed);
  std::vector<TrajectoryPoint> changes{{0, fitness(state)}};
  std::size_t next_milestone = 0;
  std::uint64_t generation = 0;

  while (!state.complete() && generation < config.max_generations) {
    const StepResult result = step(state, config.op, generation, rng);
    ++generation;
    if (config.check_invariants && !state.recount_matches()) {
      throw Error(ErrorKind::InvalidArgument, "cached counts diverged at generation " + std::to_string(generation));
    }
    if (result.accepted) {
      ++report.accepted;
      if (fitness(state) != changes.back().fitness) changes.push_back({generation, fitness(state)});
      const double fraction = fraction_complete(state);
      while (next_milestone < config.milestones.size() && fraction >= config.milestones[next_milestone]) {
        const double threshold = config.milestones[next_milestone++];
        std::string path = emit({generation, threshold, FrameTag::Milestone});
        report.milestone_events.push_back({threshold, generation, fraction, std::move(path)});
      }
    } else {
      ++report.rejected;
    }
    if (config.frame_every && generation % *config.frame_every == 0) {
      emit({generation, fraction_complete(state), FrameTag::Stride});
    }
    if (observer) observer(generation, result.accepted, state);
  }

  report.generations_run = generation;
  report.final_fraction = fraction_complete(state);
  report.termination = state.complete() ? Termination::Complete : Termination::MaxGenerations;
  report.fitness_trajectory = sample_trajectory(changes, generation);
  if (config.emit_initial_final) emit({generation, report.final_fraction, FrameTag::Final});
  return report;
}

std::string_view to_string(Termination termination) {
  switch (termination) {
    case Termination::Complete: return "COMPLETE";
    case Termination::MaxGenerations: return "MAX_GENERATIONS";
    case Termination::EmptyMutableSet: return "EMPTY_MUTABLE_SET";
  }
  return "UNKNOWN";
}

std::string_view to_string(FrameTag tag) {
  switch (tag) {
    case FrameTag::Initial: return "INITIAL";
    case FrameTag::Milestone: return "MILESTONE";
    case FrameTag::Stride: return "STRIDE";
    case FrameTag::Final: return "FINAL";
  }
  return "UNKNOWN";
}

}  // namespace evotransit
