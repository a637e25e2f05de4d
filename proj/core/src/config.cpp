#include "sgdlab/config.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace sgdlab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("config field '" + field + "': " + why);
}

Vec to_vec(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array of numbers");
  Vec v;
  for (const auto& x : j) {
    if (!x.is_number()) fail(field, "expected an array of numbers");
    v.push_back(x.get<double>());
  }
  require_finite(v, field.c_str());
  return v;
}

ConvexBody body_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) fail("body", "expected an object with a 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "ball") {
    return ConvexBody(Ball{to_vec(j.at("center"), "body.center"), j.at("radius").get<double>()});
  }
  if (type == "box") {
    return ConvexBody(Box{to_vec(j.at("lower"), "body.lower"), to_vec(j.at("upper"), "body.upper")});
  }
  if (type == "simplex") {
    return ConvexBody(Simplex{j.at("dim").get<int>(), j.at("scale").get<double>()});
  }
  if (type == "halfspaces") {
    HalfspaceIntersection h;
    for (const auto& c : j.at("constraints")) {
      h.constraints.push_back(
          Halfspace{to_vec(c.at("normal"), "body.constraints.normal"), c.at("offset").get<double>()});
    }
    h.bounding_box = Box{to_vec(j.at("lower"), "body.lower"), to_vec(j.at("upper"), "body.upper")};
    h.interior_point = to_vec(j.at("interior_point"), "body.interior_point");
    return ConvexBody(std::move(h));
  }
  fail("body.type", "unknown type '" + type + "'");
}

Schedule schedule_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) fail("schedule", "expected an object with a 'type'");
  const std::string type = j.at("type").get<std::string>();
  const double c = j.at("c").get<double>();
  if (!(c > 0.0)) fail("schedule.c", "must be positive");
  if (type == "constant") return Schedule::constant(c);
  if (type == "inverse_sqrt") return Schedule::inverse_sqrt(c);
  fail("schedule.type", "unknown type '" + type + "'");
}

}  // namespace

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::Rapgd: return "rapgd";
    case Algorithm::Ppgd: return "ppgd";
    case Algorithm::Raspgd: return "raspgd";
    case Algorithm::Ssgd: return "ssgd";
  }
  return "?";
}

ConvexBody body_from_json_text(const std::string& text) {
  return body_from_json(json::parse(text));
}

StochasticObjective build_problem(const ExperimentConfig& cfg) {
  const ConvexBody& body = cfg.body;
  auto degenerate = [](ConvexObjective f, const std::string& name) {
    StochasticObjective d;
    d.name = name;
    d.mean = f;
    d.grad_bound = f.grad_bound;
    d.draw = [f](Rng&) { return f; };
    return d;
  };
  if (cfg.problem_name == "quadratic") {
    if (!cfg.problem_a) fail("problem.a", "required for quadratic");
    return degenerate(make_quadratic(*cfg.problem_a, body), "quadratic");
  }
  if (cfg.problem_name == "l1") {
    if (!cfg.problem_a) fail("problem.a", "required for l1");
    return degenerate(make_l1(*cfg.problem_a, body), "l1");
  }
  if (cfg.problem_name == "stochastic_l1") {
    if (!cfg.problem_a) fail("problem.a", "required for stochastic_l1");
    return make_stochastic_l1(*cfg.problem_a, body);
  }
  if (cfg.problem_name == "dataset_regression") {
    if (cfg.problem_X.empty()) fail("problem.X", "required for dataset_regression");
    return make_finite_dataset_regression(cfg.problem_X, cfg.problem_y, body);
  }
  fail("problem.name", "unknown problem '" + cfg.problem_name + "'");
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  ExperimentConfig cfg;

  if (!j.contains("algorithm")) fail("algorithm", "missing");
  const std::string alg = j.at("algorithm").get<std::string>();
  if (alg == "rapgd") cfg.algorithm = Algorithm::Rapgd;
  else if (alg == "ppgd") cfg.algorithm = Algorithm::Ppgd;
  else if (alg == "raspgd") cfg.algorithm = Algorithm::Raspgd;
  else if (alg == "ssgd") cfg.algorithm = Algorithm::Ssgd;
  else fail("algorithm", "unknown algorithm '" + alg + "'");

  if (!j.contains("body")) fail("body", "missing");
  cfg.body = body_from_json(j.at("body"));

  if (!j.contains("problem") || !j.at("problem").is_object()) fail("problem", "missing");
  const json& pj = j.at("problem");
  if (!pj.contains("name")) fail("problem.name", "missing");
  cfg.problem_name = pj.at("name").get<std::string>();
  if (pj.contains("a")) {
    cfg.problem_a = to_vec(pj.at("a"), "problem.a");
    if (cfg.problem_a->size() != cfg.body.dim()) fail("problem.a", "dimension mismatch with body");
  }
  if (pj.contains("X")) {
    for (const auto& row : pj.at("X")) {
      cfg.problem_X.push_back(to_vec(row, "problem.X"));
      if (cfg.problem_X.back().size() != cfg.body.dim())
        fail("problem.X", "dimension mismatch with body");
    }
    for (const auto& yv : pj.at("y")) cfg.problem_y.push_back(yv.get<double>());
    if (cfg.problem_X.size() != cfg.problem_y.size()) fail("problem.y", "length mismatch with X");
  }

  if (!j.contains("schedule")) fail("schedule", "missing");
  cfg.schedule = schedule_from_json(j.at("schedule"));

  if (j.contains("eps")) {
    cfg.eps = j.at("eps").get<double>();
    if (!(*cfg.eps > 0.0)) fail("eps", "must be positive");
  }
  if (j.contains("eps_sm")) {
    cfg.eps_sm = j.at("eps_sm").get<double>();
    if (!(*cfg.eps_sm > 0.0)) fail("eps_sm", "must be positive");
  }
  cfg.smooth = j.value("smooth", true);
  if (cfg.algorithm == Algorithm::Ssgd && cfg.smooth && !cfg.eps_sm)
    fail("eps_sm", "required for ssgd unless smooth=false");

  if (!j.contains("T")) fail("T", "missing");
  if (j.at("T").is_string()) {
    if (j.at("T").get<std::string>() != "auto") fail("T", "expected a positive integer or \"auto\"");
    if (!cfg.eps) fail("eps", "required when T=\"auto\"");
    cfg.auto_T = true;
    StochasticObjective d = build_problem(cfg);
    const double diam = diameter(cfg.body);
    if (cfg.algorithm == Algorithm::Raspgd)
      cfg.T = required_steps_raspgd(d.grad_bound, diam, *cfg.eps);
    else if (cfg.algorithm == Algorithm::Ssgd)
      cfg.T = required_steps_ssgd(d.grad_bound, diam, *cfg.eps, /*lipschitz_case=*/!cfg.smooth);
    else fail("T", "\"auto\" is only supported for raspgd and ssgd");
  } else {
    cfg.T = j.at("T").get<long long>();
    if (cfg.T < 1) fail("T", "must be >= 1");
  }

  cfg.trials = j.value("trials", 1);
  if (cfg.trials < 1) fail("trials", "must be >= 1");
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  if (j.contains("outputs")) {
    const json& out = j.at("outputs");
    cfg.trace_dir = out.value("trace_dir", std::string{});
    cfg.summary_path = out.value("summary_path", std::string{});
  }
  cfg.record_half_steps = j.value("record_half_steps", false);
  cfg.n_mc = j.value("n_mc", 10000);
  if (cfg.n_mc < 1) fail("n_mc", "must be >= 1");
  if (j.contains("u1")) {
    cfg.u1 = to_vec(j.at("u1"), "u1");
    if (cfg.u1->size() != cfg.body.dim()) fail("u1", "dimension mismatch with body");
  }
  return cfg;
}

}  // namespace sgdlab
