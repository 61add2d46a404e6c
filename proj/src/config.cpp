#include "crawlfresh/config.hpp"

#include <fstream>
#include <map>
#include <set>

namespace crawlfresh {

using nlohmann::json;

json default_config(std::string_view subcommand) {
  json cfg = {
      {"master_seed", 1},
      {"record_every", 0},
      {"threads", 0},
      {"horizon", 10000.0},
      {"clip", {{"min", 1e-6}, {"max", 1e6}}},
      {"lln", {{"alpha", "1"}, {"exponent", 0.75}}},
      {"sa", {{"gamma", 0.75}, {"y0", 0.0}}},
  };
  const json all_estimators = json::array({"lln", "sa", "naive", "mle", "mm"});
  if (subcommand == "simulate") {
    cfg["page"] = {{"delta", 5.0}, {"crawl_rate", 3.0}, {"weight", 1.0}};
    cfg["horizon"] = 100.0;
  } else if (subcommand == "estimate") {
    cfg["page"] = {{"delta", 5.0}, {"crawl_rate", 3.0}, {"weight", 1.0}};
    cfg["observations"] = 10000;
    cfg["estimators"] = all_estimators;
  } else if (subcommand == "optimize") {
    cfg["recipe"] = {{"count", 100}, {"delta_low", 0.0}, {"delta_high", 1.0},
                     {"weight", 1.0}, {"crawl_rate", 0.0}};
    cfg["budget"] = 80.0;
  } else if (subcommand == "expt1") {
    cfg["page"] = {{"delta", 5.0}, {"crawl_rate", 3.0}, {"weight", 1.0}};
    cfg["observations"] = 10000;
    cfg["replications"] = 1000;
    cfg["estimators"] = all_estimators;
  } else if (subcommand == "expt2") {
    cfg["recipe"] = {{"count", 100}, {"delta_low", 0.0}, {"delta_high", 1.0},
                     {"weight", 1.0}, {"crawl_rate", 0.0}};
    cfg["budget"] = 80.0;
    cfg["observations"] = 20000;
    cfg["replications"] = 50;
    cfg["estimators"] = json::array({"lln", "sa", "naive"});
    cfg["check_empirical_freshness"] = false;
  } else if (subcommand == "expt3") {
    cfg["page"] = {{"delta", 1000.0}, {"crawl_rate", 200.0}, {"weight", 1.0}};
    cfg["observations"] = 10000;
    cfg["replications"] = 100;
  } else {
    throw ConfigError("unknown subcommand: " + std::string(subcommand));
  }
  return cfg;
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path.string());
  json cfg;
  try {
    is >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config root must be a JSON object");
  validate_config_keys(cfg);
  return cfg;
}

void merge_config(json& base, const json& overlay) {
  if (!overlay.is_object() || !base.is_object()) {
    base = overlay;
    return;
  }
  for (const auto& [key, value] : overlay.items()) {
    if (base.contains(key) && base[key].is_object() && value.is_object()) {
      merge_config(base[key], value);
    } else {
      base[key] = value;
    }
  }
}

void apply_override(json& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override must look like key.path=value: " +
                      std::string(assignment));
  const std::string path(assignment.substr(0, eq));
  const std::string raw(assignment.substr(eq + 1));

  json value;
  try {
    value = json::parse(raw);
  } catch (const json::exception&) {
    value = raw;  // unquoted strings stay strings
  }

  json* cur = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot - start);
    if (key.empty())
      throw ConfigError("bad override path: " + path);
    if (dot == std::string::npos) {
      (*cur)[key] = value;
      break;
    }
    if (!cur->contains(key)) (*cur)[key] = json::object();
    if (!(*cur)[key].is_object())
      throw ConfigError("override path crosses a non-object: " + path);
    cur = &(*cur)[key];
    start = dot + 1;
  }
}

namespace {

void check_object_keys(const json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("unknown config key: " + where + "." + key);
  }
}

}  // namespace

void validate_config_keys(const json& config) {
  static const std::map<std::string, std::set<std::string>> nested = {
      {"page", {"delta", "crawl_rate", "weight"}},
      {"recipe", {"count", "delta_low", "delta_high", "weight", "crawl_rate"}},
      {"lln", {"alpha", "exponent"}},
      {"sa", {"gamma", "y0"}},
      {"clip", {"min", "max"}},
  };
  static const std::set<std::string> plain = {
      "budget",      "observations", "replications",
      "master_seed", "record_every", "horizon",
      "threads",     "check_empirical_freshness"};

  for (const auto& [key, value] : config.items()) {
    if (auto it = nested.find(key); it != nested.end()) {
      check_object_keys(value, it->second, key);
    } else if (key == "pages") {
      if (!value.is_array()) throw ConfigError("pages must be an array");
      for (const auto& pg : value)
        check_object_keys(pg, {"id", "delta", "weight", "crawl_rate"}, "pages[]");
    } else if (key == "estimators") {
      if (!value.is_array()) throw ConfigError("estimators must be an array");
      for (const auto& e : value)
        if (!e.is_string())
          throw ConfigError("estimators entries must be strings");
    } else if (!plain.count(key)) {
      throw ConfigError("unknown config key: " + key);
    }
  }
}

namespace {

GainSchedule lln_schedule_from(const json& cfg) {
  std::string token = "1";
  double exponent = 0.75;
  if (cfg.contains("lln")) {
    const auto& l = cfg["lln"];
    if (l.contains("alpha")) token = l["alpha"].get<std::string>();
    if (l.contains("exponent")) exponent = l["exponent"].get<double>();
  }
  if (token == "1" || token == "constant") return GainSchedule::constant();
  if (token == "log") return GainSchedule::logarithmic();
  if (token == "sqrt") return GainSchedule::square_root();
  if (token == "poly") {
    if (!(exponent > 0.0) || !(exponent < 1.0))
      throw ConfigError("lln.exponent for poly must lie in (0, 1)");
    return GainSchedule::poly(exponent);
  }
  if (token == "power") {
    if (!(exponent > 0.0) || !(exponent <= 1.0))
      throw ConfigError("lln.exponent for power must lie in (0, 1]");
    return GainSchedule::power(exponent);
  }
  throw ConfigError("unknown lln.alpha token: " + token +
                    " (expected 1, constant, log, sqrt, poly, or power)");
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& config) {
  validate_config_keys(config);
  try {
    ExperimentConfig out;

    const bool has_page = config.contains("page");
    const bool has_pages = config.contains("pages");
    const bool has_recipe = config.contains("recipe");
    if (has_page + has_pages + has_recipe > 1)
      throw ConfigError("give exactly one of page, pages, recipe");

    if (has_page) {
      const auto& p = config["page"];
      PageSpec spec;
      spec.id = 0;
      spec.delta = p.at("delta").get<double>();
      spec.crawl_rate = p.at("crawl_rate").get<double>();
      spec.weight = p.value("weight", 1.0);
      out.pages.push_back(spec);
    } else if (has_pages) {
      int next_id = 0;
      for (const auto& p : config["pages"]) {
        PageSpec spec;
        spec.id = p.value("id", next_id);
        spec.delta = p.at("delta").get<double>();
        spec.weight = p.value("weight", 1.0);
        spec.crawl_rate = p.value("crawl_rate", 1.0);
        out.pages.push_back(spec);
        ++next_id;
      }
    } else if (has_recipe) {
      const auto& r = config["recipe"];
      PageRecipe recipe;
      recipe.count = r.value("count", std::size_t{100});
      recipe.delta_low = r.value("delta_low", 0.0);
      recipe.delta_high = r.value("delta_high", 1.0);
      recipe.weight = r.value("weight", 1.0);
      recipe.crawl_rate = r.value("crawl_rate", 0.0);
      out.recipe = recipe;
    }

    out.budget = config.value("budget", 0.0);
    out.observations = config.value("observations", std::int64_t{10000});
    out.replications = config.value("replications", 1);
    out.master_seed = config.value("master_seed", std::uint64_t{1});
    out.record_every = config.value("record_every", std::int64_t{0});
    out.horizon = config.value("horizon", 1e4);
    out.threads = config.value("threads", 0);
    out.check_empirical_freshness = config.value("check_empirical_freshness", false);
    if (config.contains("clip")) {
      out.clip.min = config["clip"].value("min", 1e-6);
      out.clip.max = config["clip"].value("max", 1e6);
    }

    if (config.contains("estimators")) {
      double y0 = 0.0, gamma = 0.75;
      if (config.contains("sa")) {
        y0 = config["sa"].value("y0", 0.0);
        gamma = config["sa"].value("gamma", 0.75);
      }
      if (!(gamma > 0.0) || !(gamma <= 1.0))
        throw ConfigError("sa.gamma must lie in (0, 1]");
      if (!(y0 >= 0.0)) throw ConfigError("sa.y0 must be >= 0");
      for (const auto& name : config["estimators"]) {
        EstimatorSpec spec;
        try {
          spec.kind = estimator_kind_from_string(name.get<std::string>());
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
        if (spec.kind == EstimatorKind::lln) {
          spec.schedule = lln_schedule_from(config);
        } else if (spec.kind == EstimatorKind::sa) {
          spec.schedule = GainSchedule::power(gamma);
          spec.y0 = y0;
        }
        out.estimators.push_back(spec);
      }
    }

    try {
      out.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  }
}

namespace {

std::string schedule_kind_name(GainSchedule::Kind kind) {
  switch (kind) {
    case GainSchedule::Kind::constant: return "constant";
    case GainSchedule::Kind::logarithmic: return "logarithmic";
    case GainSchedule::Kind::square_root: return "square_root";
    case GainSchedule::Kind::power: return "power";
    case GainSchedule::Kind::poly: return "poly";
  }
  return "?";
}

}  // namespace

json experiment_config_to_json(const ExperimentConfig& config) {
  json out;
  if (config.recipe) {
    out["recipe"] = {{"count", config.recipe->count},
                     {"delta_low", config.recipe->delta_low},
                     {"delta_high", config.recipe->delta_high},
                     {"weight", config.recipe->weight},
                     {"crawl_rate", config.recipe->crawl_rate}};
  } else {
    json pages = json::array();
    for (const auto& p : config.pages)
      pages.push_back({{"id", p.id},
                       {"delta", p.delta},
                       {"weight", p.weight},
                       {"crawl_rate", p.crawl_rate}});
    out["pages"] = pages;
  }
  out["budget"] = config.budget;
  out["observations"] = config.observations;
  out["replications"] = config.replications;
  out["master_seed"] = config.master_seed;
  out["record_every"] = config.record_every;
  out["horizon"] = config.horizon;
  out["threads"] = config.threads;
  out["check_empirical_freshness"] = config.check_empirical_freshness;
  out["clip"] = {{"min", config.clip.min}, {"max", config.clip.max}};
  json ests = json::array();
  for (const auto& spec : config.estimators) {
    json e = {{"kind", std::string(to_string(spec.kind))}};
    if (spec.schedule)
      e["schedule"] = {{"kind", schedule_kind_name(spec.schedule->kind)},
                       {"exponent", spec.schedule->exponent}};
    if (spec.kind == EstimatorKind::sa) e["y0"] = spec.y0;
    ests.push_back(e);
  }
  out["estimators"] = ests;
  return out;
}

}  // namespace crawlfresh
