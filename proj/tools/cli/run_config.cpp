#include "run_config.hpp"

#include <charconv>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "sfreject/error.hpp"

namespace sfreject::cli {

namespace pt = boost::property_tree;

namespace {

template <typename T>
T convert(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("config key '" + key + "': cannot parse '" + text + "'");
  }
  return value;
}

bool convert_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + text + "'");
}

std::string strip_comment(std::string value) {
  for (const char c : {'#', ';'}) {
    if (const auto pos = value.find(c); pos != std::string::npos) value.erase(pos);
  }
  while (!value.empty() && (value.back() == ' ' || value.back() == '\t')) value.pop_back();
  return value;
}

}  // namespace

std::optional<double> parse_theta(const std::string& text) {
  if (text == "knee") return std::nullopt;
  const double theta = convert<double>("theta", text);
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw ConfigError("theta must be 'knee' or a number in (0, 1], got '" + text + "'");
  }
  return theta;
}

void load_config_file(const std::filesystem::path& path, RunConfig& config) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }

  auto& e = config.experiment;
  auto& w = e.semifactual.weights;
  auto& o = e.semifactual.optimizer;
  for (const auto& [section, entries] : tree) {
    if (entries.empty() && !entries.data().empty()) {
      throw ConfigError("config file: key '" + section + "' outside of a [section]");
    }
    for (const auto& [name, node] : entries) {
      const std::string key = section + "." + name;
      const std::string v = strip_comment(node.data());
      if (key == "data.path") {
        config.dataset = path.parent_path() / v;
        if (std::filesystem::path(v).is_absolute()) config.dataset = v;
      } else if (key == "data.label") {
        config.label_column = v;
      } else if (key == "data.impute_missing") {
        config.impute_missing = convert_bool(key, v);
      } else if (key == "data.name") {
        config.dataset_name = v;
      } else if (key == "model.name") {
        e.classifier.kind = parse_classifier_kind(v);
      } else if (key == "model.k_neighbors") {
        e.classifier.k_neighbors = convert<std::size_t>(key, v);
      } else if (key == "model.knn_smoothing") {
        e.classifier.knn_smoothing = convert<double>(key, v);
      } else if (key == "model.gnb_var_floor") {
        e.classifier.gnb_var_floor = convert<double>(key, v);
      } else if (key == "loss.c_feasibility") {
        w.c_feasibility = convert<double>(key, v);
      } else if (key == "loss.c_sf") {
        w.c_sf = convert<double>(key, v);
      } else if (key == "loss.c_simple") {
        w.c_simple = convert<double>(key, v);
      } else if (key == "loss.c_similarity") {
        w.c_similarity = convert<double>(key, v);
      } else if (key == "loss.c_diverse") {
        w.c_diverse = convert<double>(key, v);
      } else if (key == "loss.mu") {
        w.mu = convert<std::size_t>(key, v);
      } else if (key == "loss.change_epsilon") {
        e.semifactual.change_epsilon = convert<double>(key, v);
      } else if (key == "optimizer.reflection") {
        o.reflection = convert<double>(key, v);
      } else if (key == "optimizer.expansion") {
        o.expansion = convert<double>(key, v);
      } else if (key == "optimizer.contraction") {
        o.contraction = convert<double>(key, v);
      } else if (key == "optimizer.shrink") {
        o.shrink = convert<double>(key, v);
      } else if (key == "optimizer.max_iter") {
        o.max_iter = convert<std::size_t>(key, v);
      } else if (key == "optimizer.x_tol") {
        o.x_tol = convert<double>(key, v);
      } else if (key == "optimizer.f_tol") {
        o.f_tol = convert<double>(key, v);
      } else if (key == "optimizer.initial_step") {
        o.initial_step = convert<double>(key, v);
      } else if (key == "optimizer.n_restarts") {
        o.n_restarts = convert<std::size_t>(key, v);
      } else if (key == "search.support") {
        e.semifactual.support_search = parse_support_search(v);
      } else if (key == "search.box_margin") {
        e.box_margin = convert<double>(key, v);
      } else if (key == "search.box_radius") {
        e.box_radius = convert<double>(key, v);
      } else if (key == "experiment.theta") {
        e.theta = parse_theta(v);
      } else if (key == "experiment.knee_source") {
        e.knee_source = parse_knee_source(v);
      } else if (key == "experiment.k") {
        e.k = convert<std::size_t>(key, v);
      } else if (key == "experiment.n_folds") {
        e.n_folds = convert<std::size_t>(key, v);
      } else if (key == "experiment.calib_fraction") {
        e.calib_fraction = convert<double>(key, v);
      } else if (key == "experiment.seed") {
        e.seed = convert<std::uint64_t>(key, v);
      } else if (key == "experiment.jobs") {
        e.jobs = convert<std::size_t>(key, v);
      } else if (key == "perturbation.fraction") {
        e.perturb_fraction = convert<double>(key, v);
      } else if (key == "perturbation.noise_std") {
        e.noise_std = convert<double>(key, v);
      } else if (key == "output.dir") {
        config.out_dir = v;
      } else if (key == "output.verbose") {
        config.verbose = convert_bool(key, v);
      } else {
        throw ConfigError("config file: unknown key '" + key + "'");
      }
    }
  }
}

void RunConfig::validate() const {
  if (dataset.empty()) throw ConfigError("no dataset given (--dataset or [data] path)");
  if (label_column.empty()) throw ConfigError("label column must not be empty");
  experiment.validate();
}

}  // namespace sfreject::cli
