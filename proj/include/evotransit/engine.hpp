#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "evotransit/mutation.hpp"
#include "evotransit/raster.hpp"
#include "evotransit/rng.hpp"
#include "evotransit/transition_state.hpp"

namespace evotransit {

enum class Termination { Complete, MaxGenerations, EmptyMutableSet };
enum class FrameTag { Initial, Milestone, Stride, Final };

[[nodiscard]] std::string_view to_string(Termination termination);
[[nodiscard]] std::string_view to_string(FrameTag tag);

struct FrameEvent {
  std::uint64_t generation = 0;
  // Milestone frames carry the threshold; all others the current fraction.
  double fraction = 0.0;
  FrameTag tag = FrameTag::Initial;
};

// Receives rendered frames from a single run, on the run's thread.
class FrameSink {
 public:
  virtual ~FrameSink() = default;
  // Returns where the frame went (a path, or empty for in-memory sinks).
  virtual std::string emit(const Raster& frame, const FrameEvent& event) = 0;
};

inline const std::vector<double> kDefaultMilestones{0.125, 0.375, 0.625, 0.875};

struct RunConfig {
  OperatorSpec op;
  std::uint64_t seed = 0;
  std::vector<double> milestones = kDefaultMilestones;
  std::uint64_t max_generations = 10'000'000;
  std::optional<std::uint64_t> frame_every;
  bool emit_initial_final = true;
  // Recount the grid after every step and throw on any cache mismatch.
  bool check_invariants = false;

  void validate() const;
};

struct MilestoneEvent {
  double fraction = 0.0;
  std::uint64_t generation = 0;
  double reached_fraction = 0.0;
  std::string frame;
};

struct TrajectoryPoint {
  std::uint64_t generation = 0;
  std::size_t fitness = 0;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct RunReport {
  std::uint64_t generations_run = 0;
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::size_t mutable_total = 0;
  double final_fraction = 0.0;
  std::vector<MilestoneEvent> milestone_events;
  std::vector<TrajectoryPoint> fitness_trajectory;
  Termination termination = Termination::Complete;
};

/// Elitist acceptance of an already proposed delta: applies it, keeps it
/// when offspring fitness >= parent fitness, and otherwise rolls it back.
/// Returns whether the delta was kept.
bool accept_or_rollback(TransitionState& state, const MutationDelta& delta);

struct StepResult {
  bool accepted = false;
  MutationDelta delta;
};

/// One generation: propose with `op` for the 0-based generation index,
/// then accept_or_rollback.
StepResult step(TransitionState& state, const OperatorSpec& op, std::uint64_t generation_index, Rng& rng);

[[nodiscard]] inline Rng rng_stream(std::uint64_t seed) { return Rng(seed); }

// Called after every generation (1-based index) with the post-step state.
using StepObserver = std::function<void(std::uint64_t generation, bool accepted, const TransitionState& state)>;

/// Runs the (1+1) EA from `start` towards `target` until every mutable
/// pixel shows the target or max_generations is reached. `sink` may be
/// null, in which case nothing is rendered but milestone events are
/// still reported.
RunReport run(const Raster& start, const Raster& target, const RunConfig& config, FrameSink* sink,
              const StepObserver& observer = {});

}  // namespace evotransit
