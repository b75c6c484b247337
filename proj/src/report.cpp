#include "evotransit/report.hpp"

namespace evotransit {

namespace {

Json extent_json(const Extent& e) { return Json::array({e.width, e.height}); }

}  // namespace

Json to_json(const OperatorSpec& spec) {
  Json j;
  j["kind"] = to_string(spec.kind);
  j["c_s"] = spec.c_s;
  j["c_t"] = spec.c_t;
  j["strip_length"] = spec.strip_length;
  j["h_strip"] = extent_json(spec.h_strip);
  j["v_strip"] = extent_json(spec.v_strip);
  j["box_size"] = spec.box_size;
  j["composite_partner"] = to_string(spec.composite_partner);
  j["interleave"] = Json::array({spec.interleave.asymmetric, spec.interleave.partner});
  j["sampling"] = to_string(spec.sampling);
  j["toggle_geometric"] = spec.geometric_mode == GeometricMode::Toggle;
  j["fit_anchors"] = spec.anchor_mode == AnchorMode::Fit;
  return j;
}

Json to_json(const RunConfig& config) {
  Json j;
  j["operator"] = to_json(config.op);
  j["seed"] = config.seed;
  j["milestones"] = config.milestones;
  j["max_generations"] = config.max_generations;
  j["frame_every"] = config.frame_every ? Json(*config.frame_every) : Json(nullptr);
  j["emit_initial_final"] = config.emit_initial_final;
  return j;
}

Json to_json(const RunReport& report, Json config) {
  Json j;
  j["config"] = std::move(config);
  j["generations"] = report.generations_run;
  j["accepted"] = report.accepted;
  j["rejected"] = report.rejected;
  j["final_fraction"] = report.final_fraction;
  Json milestones = Json::array();
  for (const MilestoneEvent& m : report.milestone_events) {
    Json e;
    e["fraction"] = m.fraction;
    e["generation"] = m.generation;
    e["frame"] = m.frame.empty() ? Json(nullptr) : Json(m.frame);
    e["reached_fraction"] = m.reached_fraction;
    milestones.push_back(std::move(e));
  }
  j["milestones"] = std::move(milestones);
  j["termination"] = to_string(report.termination);
  j["mutable_total"] = report.mutable_total;
  Json trajectory = Json::array();
  for (const TrajectoryPoint& p : report.fitness_trajectory) trajectory.push_back(Json::array({p.generation, p.fitness}));
  j["fitness_trajectory"] = std::move(trajectory);
  return j;
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace evotransit
