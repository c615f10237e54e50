#include "rwgc/config_json.hpp"

#include <json.hpp>
#include <stdexcept>

namespace rwgc {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json prior_to_json(const PriorSpec& prior) {
  ordered_json j;
  if (prior.kind == PriorSpec::Kind::normal) {
    j["kind"] = "normal";
    j["std"] = prior.stddev;
  } else {
    j["kind"] = "uniform";
    j["lo"] = prior.lo;
    j["hi"] = prior.hi;
  }
  return j;
}

PriorSpec prior_from_json(const ordered_json& j) {
  PriorSpec prior;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "normal") {
    prior.kind = PriorSpec::Kind::normal;
    prior.stddev = j.value("std", 1.0);
  } else if (kind == "uniform") {
    prior.kind = PriorSpec::Kind::uniform;
    prior.lo = j.at("lo").get<double>();
    prior.hi = j.at("hi").get<double>();
  } else {
    throw std::invalid_argument("prior: unknown kind '" + kind + "'");
  }
  prior.validate();
  return prior;
}

ordered_json policy_to_json(const PolicySpec& spec) {
  ordered_json j;
  j["hidden_layers"] = spec.hidden_layers;
  j["hidden_units"] = spec.hidden_units;
  j["use_bias"] = spec.use_bias;
  j["hidden_activation"] = to_string(spec.hidden_activation);
  j["prior"] = prior_to_json(spec.prior);
  return j;
}

PolicySpec policy_from_json(const ordered_json& j) {
  PolicySpec spec;
  spec.hidden_layers = j.value("hidden_layers", 2);
  spec.hidden_units = j.value("hidden_units", 32);
  spec.use_bias = j.value("use_bias", false);
  spec.hidden_activation =
      activation_from_string(j.value("hidden_activation", std::string("tanh")));
  if (j.contains("prior")) spec.prior = prior_from_json(j.at("prior"));
  return spec;
}

ordered_json task_to_json(const ArmTask& task) {
  ordered_json j;
  j["links"] = task.link_lengths;
  j["reward"] = to_string(task.reward.kind);
  if (task.reward.kind != RewardSpec::Kind::sparse) {
    ordered_json w;
    w["distance"] = task.reward.distance_weight;
    w["control"] = task.reward.control_weight;
    if (task.reward.kind == RewardSpec::Kind::obstacle_dense) {
      w["collision"] = task.reward.collision_weight;
      w["proximity"] = task.reward.proximity_weight;
      w["smoothing"] = task.reward.proximity_falloff;
    }
    j["weights"] = w;
  }
  j["max_steps"] = task.max_steps;
  j["goal_threshold"] = task.goal_threshold;
  j["dt"] = task.dt;
  j["torque_limit"] = task.torque_limit;
  j["velocity_limit"] = task.velocity_limit;
  if (!task.link_masses.empty()) j["masses"] = task.link_masses;
  if (task.obstacle) {
    ordered_json o;
    o["center"] = {task.obstacle->center.x, task.obstacle->center.y};
    o["radius"] = task.obstacle->radius;
    o["thickness"] = task.obstacle->link_thickness;
    o["points"] = task.obstacle->discretization_points;
    j["obstacle"] = o;
  }
  return j;
}

ArmTask task_from_json(const ordered_json& j) {
  ArmTask task;
  task.link_lengths = j.at("links").get<std::vector<double>>();
  task.reward.kind = reward_kind_from_string(j.at("reward").get<std::string>());
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    task.reward.distance_weight = w.value("distance", 1.0);
    task.reward.control_weight = w.value("control", 1.0);
    task.reward.collision_weight = w.value("collision", 1e3);
    task.reward.proximity_weight = w.value("proximity", 5.0);
    task.reward.proximity_falloff = w.value("smoothing", 2.5);
  }
  task.max_steps = j.value("max_steps", 50);
  task.goal_threshold = j.value("goal_threshold", 0.05);
  task.dt = j.value("dt", 0.05);
  task.torque_limit = j.value("torque_limit", 1.0);
  task.velocity_limit = j.value("velocity_limit", 8.0);
  if (j.contains("masses")) task.link_masses = j.at("masses").get<std::vector<double>>();
  if (j.contains("obstacle")) {
    const auto& o = j.at("obstacle");
    ObstacleSpec obs;
    const auto center = o.at("center").get<std::vector<double>>();
    if (center.size() != 2) throw std::invalid_argument("obstacle: center must be [x, y]");
    obs.center = {center[0], center[1]};
    obs.radius = o.value("radius", 0.02);
    obs.link_thickness = o.value("thickness", 0.05);
    obs.discretization_points = o.value("points", 50);
    task.obstacle = obs;
  }
  task.validate();
  return task;
}

ordered_json rwg_config_to_json(const RwgConfig& config) {
  ordered_json j;
  j["policies"] = config.policies;
  j["episodes"] = config.episodes;
  j["master_seed"] = config.master_seed;
  j["policy"] = policy_to_json(config.policy);
  j["task"] = task_to_json(config.task);
  return j;
}

RwgConfig rwg_config_from_json_impl(const ordered_json& j) {
  RwgConfig config;
  config.policies = j.at("policies").get<int>();
  config.episodes = j.at("episodes").get<int>();
  config.master_seed = j.at("master_seed").get<std::uint64_t>();
  config.task = task_from_json(j.at("task"));
  config.policy = policy_from_json(j.at("policy"));
  bind_policy_to_task(config.policy, config.task);
  return config;
}

ordered_json bootstrap_to_json(const BootstrapResult& result) {
  ordered_json j;
  j["metric"] = result.metric;
  j["label"] = result.label;
  j["point"] = result.point;
  j["mean"] = result.mean;
  j["std"] = result.stddev;
  j["ci_low"] = result.ci_low;
  j["ci_high"] = result.ci_high;
  j["resample_count"] = static_cast<int>(result.resamples.size());
  j["seed"] = result.seed;
  j["degenerate"] = result.degenerate;
  j["resamples"] = result.resamples;
  return j;
}

}  // namespace

std::string to_json_string(const PolicySpec& spec, int indent) {
  return policy_to_json(spec).dump(indent) + "\n";
}

std::string to_json_string(const ArmTask& task, int indent) {
  return task_to_json(task).dump(indent) + "\n";
}

std::string to_json_string(const RwgConfig& config, int indent) {
  return rwg_config_to_json(config).dump(indent) + "\n";
}

std::string to_json_string(const MetricReport& report, int indent) {
  ordered_json j;
  j["pic"] = report.pic.pic;
  j["poic"] = report.poic.poic;
  j["h_r"] = report.pic.h_r;
  j["mean_h_r_given_theta"] = report.pic.mean_h_r_given_theta;
  j["h_o"] = report.poic.h_o;
  j["mean_h_o_given_theta"] = report.poic.mean_h_o_given_theta;
  j["p1_hat"] = report.poic.p1_hat;
  j["pic_degenerate"] = report.pic.degenerate;
  j["pic_config"] = {{"bins", report.pic_config.bins}, {"log_base", "natural"}};
  j["poic_config"] = {{"temperature", report.poic_config.temperature},
                      {"optimal_return", report.poic_config.optimal_return}};
  j["matrix_sha256"] = report.matrix_sha256;
  if (report.provenance_json.empty()) {
    j["provenance"] = nullptr;
  } else {
    j["provenance"] = ordered_json::parse(report.provenance_json);
  }
  return j.dump(indent) + "\n";
}

std::string to_json_string(const BootstrapResult& result, int indent) {
  return bootstrap_to_json(result).dump(indent) + "\n";
}

std::string to_json_string(const BoundReport& report, int indent) {
  ordered_json j;
  j["dof"] = report.dof;
  j["lengths"] = report.lengths;
  j["epsilon"] = report.epsilon;
  j["bound"] = report.bound;
  j["samples"] = report.samples;
  j["max_first_order"] = report.max_first_order;
  j["max_exact"] = report.max_exact;
  j["first_order_violations"] = report.first_order_violations;
  j["exact_violations"] = report.exact_violations;
  j["exact_slack"] = report.exact_slack;
  j["seed"] = report.seed;
  return j.dump(indent) + "\n";
}

PolicySpec policy_spec_from_json(const std::string& text) {
  return policy_from_json(ordered_json::parse(text));
}

ArmTask arm_task_from_json(const std::string& text) {
  return task_from_json(ordered_json::parse(text));
}

RwgConfig rwg_config_from_json(const std::string& text) {
  return rwg_config_from_json_impl(ordered_json::parse(text));
}

BootstrapResult bootstrap_result_from_json(const std::string& text) {
  const auto j = ordered_json::parse(text);
  BootstrapResult result;
  result.metric = j.at("metric").get<std::string>();
  result.label = j.value("label", std::string{});
  result.point = j.at("point").get<double>();
  result.mean = j.at("mean").get<double>();
  result.stddev = j.at("std").get<double>();
  result.ci_low = j.at("ci_low").get<double>();
  result.ci_high = j.at("ci_high").get<double>();
  result.seed = j.value("seed", std::uint64_t{0});
  result.degenerate = j.value("degenerate", false);
  if (j.contains("resamples"))
    result.resamples = j.at("resamples").get<std::vector<double>>();
  return result;
}

namespace {

ordered_json scale_profile_to_json(const ScaleProfile& p) {
  ordered_json j;
  j["policies"] = p.policies;
  j["episodes"] = p.episodes;
  if (p.bootstrap_resamples) j["bootstrap_resamples"] = *p.bootstrap_resamples;
  return j;
}

ScaleProfile scale_profile_from_json(const ordered_json& j) {
  ScaleProfile p;
  p.policies = j.at("policies").get<int>();
  p.episodes = j.at("episodes").get<int>();
  if (j.contains("bootstrap_resamples"))
    p.bootstrap_resamples = j.at("bootstrap_resamples").get<int>();
  return p;
}

}  // namespace

std::string to_json_string(const ExperimentConfig& config, int indent) {
  ordered_json j;
  j["default_profile"] = config.default_profile;
  ordered_json profiles;
  for (const auto& [name, p] : config.profiles) profiles[name] = scale_profile_to_json(p);
  j["profiles"] = profiles;
  j["master_seed"] = config.master_seed;
  j["pic"] = {{"bins", config.pic.bins}};
  j["poic"] = {{"temperature", config.poic.temperature},
               {"optimal_return", config.poic.optimal_return}};
  j["stats"] = {{"resamples", config.bootstrap_resamples}, {"seed", config.stats_seed}};
  j["artifact_bins"] = config.artifact_bins;
  ordered_json tasks = ordered_json::array();
  for (const auto& entry : config.tasks) {
    ordered_json t;
    t["name"] = entry.name;
    t["task"] = task_to_json(entry.task);
    t["policy"] = policy_to_json(entry.policy);
    if (!entry.scale.empty()) {
      ordered_json scale;
      for (const auto& [profile, ov] : entry.scale) {
        ordered_json o;
        if (ov.policies) o["policies"] = *ov.policies;
        if (ov.episodes) o["episodes"] = *ov.episodes;
        scale[profile] = o;
      }
      t["scale"] = scale;
    }
    tasks.push_back(t);
  }
  j["tasks"] = tasks;
  return j.dump(indent) + "\n";
}

ExperimentConfig experiment_config_from_json(const std::string& text,
                                             const std::string& profile,
                                             std::optional<std::uint64_t> seed_override) {
  const auto j = ordered_json::parse(text);
  ExperimentConfig config;
  config.default_profile = j.value("default_profile", std::string{});
  if (j.contains("profiles")) {
    for (const auto& [name, p] : j.at("profiles").items())
      config.profiles[name] = scale_profile_from_json(p);
  }
  config.master_seed = j.value("master_seed", std::uint64_t{0});
  if (j.contains("pic")) config.pic.bins = j.at("pic").value("bins", std::int64_t{100000});
  if (j.contains("poic")) {
    config.poic.temperature = j.at("poic").value("temperature", 1.0);
    config.poic.optimal_return = j.at("poic").value("optimal_return", 0.0);
  }
  if (j.contains("stats")) {
    config.bootstrap_resamples = j.at("stats").value("resamples", 1000);
    config.stats_seed = j.at("stats").value("seed", std::uint64_t{0});
  }
  config.artifact_bins = j.value("artifact_bins", 50);
  if (j.contains("tasks")) {
    for (const auto& t : j.at("tasks")) {
      TaskEntry entry;
      entry.name = t.at("name").get<std::string>();
      entry.task = task_from_json(t.at("task"));
      entry.policy = t.contains("policy") ? policy_from_json(t.at("policy")) : PolicySpec{};
      bind_policy_to_task(entry.policy, entry.task);
      if (t.contains("scale")) {
        for (const auto& [pname, ov] : t.at("scale").items()) {
          ScaleOverride o;
          if (ov.contains("policies")) o.policies = ov.at("policies").get<int>();
          if (ov.contains("episodes")) o.episodes = ov.at("episodes").get<int>();
          entry.scale[pname] = o;
        }
      }
      config.tasks.push_back(std::move(entry));
    }
  }
  if (!profile.empty()) config.default_profile = profile;
  if (seed_override) config.master_seed = *seed_override;
  config.validate();
  return config;
}

std::string manifest_to_json(const SuiteManifest& manifest, int indent) {
  ordered_json j;
  j["schema"] = "rwgc-manifest-v1";
  j["profile"] = manifest.profile;
  j["master_seed"] = manifest.master_seed;
  ordered_json tasks = ordered_json::array();
  for (const auto& t : manifest.tasks) {
    ordered_json tj;
    tj["name"] = t.name;
    tj["status"] = t.status;
    if (!t.error.empty()) tj["error"] = t.error;
    ordered_json files = ordered_json::array();
    for (const auto& f : t.files)
      files.push_back({{"name", f.name}, {"path", f.path}, {"sha256", f.sha256}});
    tj["files"] = files;
    tasks.push_back(tj);
  }
  j["tasks"] = tasks;
  ordered_json cross = ordered_json::array();
  for (const auto& f : manifest.cross_task_files)
    cross.push_back({{"name", f.name}, {"path", f.path}, {"sha256", f.sha256}});
  j["cross_task_files"] = cross;
  return j.dump(indent) + "\n";
}

}  // namespace rwgc
