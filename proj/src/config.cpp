#include "reach/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "reach/refine.hpp"

namespace reach {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("config: cannot parse '" + std::string(text) + "' for key '" +
                      std::string(key) + "'");
  }
  return value;
}

double parse_real(std::string_view key, std::string_view text) {
  const double v = parse_number<double>(key, text);
  if (!std::isfinite(v)) throw ConfigError("config: '" + std::string(key) + "' must be finite");
  return v;
}

std::uint64_t parse_count(std::string_view key, std::string_view text) {
  text = trim(text);
  // Accept integral values written in exponent form, e.g. 5e7.
  if (text.find_first_of(".eE") != std::string_view::npos) {
    const double v = parse_real(key, text);
    if (v < 0.0 || v != std::floor(v) || v > 1.8e19) {
      throw ConfigError("config: '" + std::string(key) + "' must be a nonnegative integer");
    }
    return static_cast<std::uint64_t>(v);
  }
  return parse_number<std::uint64_t>(key, text);
}

std::string format_real(double v) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, ptr);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::uniform: return "uniform";
    case Algorithm::adaptive: return "adaptive";
    case Algorithm::compare: return "compare";
  }
  return "?";
}

void set_config_value(ExperimentConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "system") {
    if (value != "exponential" && value != "michaelis-menten") {
      throw ConfigError("config: unknown system '" + std::string(value) + "'");
    }
    config.system = value;
  } else if (key == "d") {
    config.d = parse_count(key, value);
  } else if (key == "L") {
    config.L = parse_real(key, value);
  } else if (key == "algorithm") {
    if (value == "uniform") config.algorithm = Algorithm::uniform;
    else if (value == "adaptive") config.algorithm = Algorithm::adaptive;
    else if (value == "compare") config.algorithm = Algorithm::compare;
    else throw ConfigError("config: unknown algorithm '" + std::string(value) + "'");
  } else if (key == "eps") {
    config.eps = parse_real(key, value);
  } else if (key == "ladder") {
    if (value.empty()) {
      config.ladder.clear();
      return;
    }
    std::vector<double> ladder;
    std::size_t start = 0;
    while (start <= value.size()) {
      const auto comma = value.find(',', start);
      const auto end = comma == std::string_view::npos ? value.size() : comma;
      ladder.push_back(parse_real(key, value.substr(start, end - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    config.ladder = std::move(ladder);
    config.eps = config.ladder.back();
  } else if (key == "d_R") {
    config.d_R = static_cast<int>(parse_number<int>(key, value));
  } else if (key == "d_F") {
    config.d_F = static_cast<int>(parse_number<int>(key, value));
  } else if (key == "cap") {
    config.cap = parse_count(key, value);
  } else if (key == "workers") {
    const auto w = parse_count(key, value);
    if (w > 1024) throw ConfigError("config: workers must be at most 1024");
    config.workers = static_cast<unsigned>(w);
  } else if (key == "out") {
    if (value.empty()) throw ConfigError("config: out must not be empty");
    config.out = value;
  } else if (key == "seed") {
    config.seed = parse_count(key, value);
  } else if (key == "stride") {
    config.stride = parse_count(key, value);
  } else {
    throw ConfigError("config: unknown key '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config_text(std::string_view text, ExperimentConfig base) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    set_config_value(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig parse_config_json(std::string_view text, ExperimentConfig base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: JSON input must be an object");
  for (const auto& [key, value] : doc.items()) {
    std::string rendered;
    if (value.is_string()) {
      rendered = value.get<std::string>();
    } else if (value.is_number()) {
      rendered = value.is_number_float() ? format_real(value.get<double>()) : value.dump();
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number()) throw ConfigError("config: '" + key + "' must hold numbers");
        if (i > 0) rendered += ',';
        rendered += format_real(value[i].get<double>());
      }
      if (rendered.empty()) throw ConfigError("config: '" + key + "' must not be empty");
    } else {
      throw ConfigError("config: unsupported JSON value for '" + key + "'");
    }
    set_config_value(base, key, rendered);
  }
  return base;
}

void validate(const ExperimentConfig& config) {
  if (!(config.eps > 0.0)) throw ConfigError("config: eps must be positive");
  for (std::size_t i = 0; i < config.ladder.size(); ++i) {
    if (!(config.ladder[i] > 0.0)) throw ConfigError("config: ladder entries must be positive");
    if (i > 0 && !(config.ladder[i] < config.ladder[i - 1])) {
      throw ConfigError("config: ladder must be strictly decreasing");
    }
  }
  if (!config.ladder.empty() && config.ladder.back() != config.eps) {
    throw ConfigError("config: the last ladder entry must equal eps");
  }
  if (config.cap < 1000) throw ConfigError("config: cap must be at least 1000");
  if (config.workers < 1) throw ConfigError("config: workers must be at least 1");
  if (config.stride < 1) throw ConfigError("config: stride must be at least 1");
  if (config.system == "exponential") {
    if (config.d < 1 || config.d > 8) throw ConfigError("config: d must lie in [1, 8]");
    if (!(config.L >= 0.0)) throw ConfigError("config: L must be nonnegative");
  }
  const int d = config.system == "exponential" ? static_cast<int>(config.d) : 2;
  if (config.d_R && (*config.d_R < 1 || *config.d_R > d)) {
    throw ConfigError("config: d_R must lie in [1, d]");
  }
  if (config.d_F && (*config.d_F < 0 || *config.d_F > d)) {
    throw ConfigError("config: d_F must lie in [0, d]");
  }
}

std::string canonical_form(const ExperimentConfig& config) {
  std::ostringstream os;
  os << "system=" << config.system << '\n';
  if (config.system == "exponential") {
    os << "d=" << config.d << '\n' << "L=" << format_real(config.L) << '\n';
  }
  os << "algorithm=" << to_string(config.algorithm) << '\n';
  os << "eps=" << format_real(config.eps) << '\n';
  os << "ladder=";
  for (std::size_t i = 0; i < config.ladder.size(); ++i) {
    os << (i ? "," : "") << format_real(config.ladder[i]);
  }
  os << '\n';
  if (config.d_R) os << "d_R=" << *config.d_R << '\n';
  if (config.d_F) os << "d_F=" << *config.d_F << '\n';
  os << "cap=" << config.cap << '\n';
  os << "seed=" << config.seed << '\n';
  os << "stride=" << config.stride << '\n';
  return os.str();
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : canonical_form(config)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

SystemSpec build_system(const ExperimentConfig& config) {
  SystemSpec system = config.system == "exponential" ? make_exponential_system(config.d, config.L)
                                                     : make_michaelis_menten();
  if (config.d_R || config.d_F) {
    system = system.with_effective_dimensions(config.d_R.value_or(system.d_R()),
                                              config.d_F.value_or(system.d_F()));
  }
  return system;
}

std::vector<double> resolve_ladder(const ExperimentConfig& config, const SystemSpec& system) {
  if (!config.ladder.empty()) return config.ladder;
  return default_ladder(system, config.eps);
}

}  // namespace reach
