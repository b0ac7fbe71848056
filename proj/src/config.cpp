#include "usot/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

extern char** environ;

namespace usot {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  const std::string v = trim(text);
  T out{};
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || ptr != end || v.empty())
    throw ConfigError("config: cannot parse value '" + text + "' for key " + key);
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Field table shared by set() and to_map().
struct Field {
  std::function<void(Config&, const std::string&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

template <typename T>
Field field(T Config::*member) {
  return {[member](Config& c, const std::string& k, const std::string& v) { c.*member = parse_number<T>(k, v); },
          [member](const Config& c) {
            if constexpr (std::is_floating_point_v<T>)
              return format_double(c.*member);
            else
              return std::to_string(c.*member);
          }};
}

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"alpha", field(&Config::alpha)},
      {"beta", field(&Config::beta)},
      {"flow_interval", field(&Config::flow_interval)},
      {"min_area_fraction", field(&Config::min_area_fraction)},
      {"max_span_fraction", field(&Config::max_span_fraction)},
      {"max_density", field(&Config::max_density)},
      {"block_levels", field(&Config::block_levels)},
      {"block_size", field(&Config::block_size)},
      {"block_radius", field(&Config::block_radius)},
      {"gamma_mine", field(&Config::gamma_mine)},
      {"max_gap", field(&Config::max_gap)},
      {"frame_window", field(&Config::frame_window)},
      {"gamma_mem", field(&Config::gamma_mem)},
      {"theta1", field(&Config::theta1)},
      {"theta2", field(&Config::theta2)},
      {"theta3", field(&Config::theta3)},
      {"n_mem", field(&Config::n_mem)},
      {"draw_scale", field(&Config::draw_scale)},
      {"draw_max", field(&Config::draw_max)},
      {"instances_per_video", field(&Config::instances_per_video)},
      {"queue_size", field(&Config::queue_size)},
      {"fusion_weight", field(&Config::fusion_weight)},
      {"lambda1_naive", field(&Config::lambda1_naive)},
      {"lambda1_start", field(&Config::lambda1_start)},
      {"lambda1_end", field(&Config::lambda1_end)},
      {"seed", field(&Config::seed)},
  };
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
  const auto it = fields().find(trim(key));
  if (it == fields().end()) throw ConfigError("config: unknown key '" + key + "'");
  it->second.set(*this, it->first, value);
}

void Config::validate() const {
  require(alpha > 0 && alpha < 1, "alpha must lie in (0, 1)");
  require(beta >= 0, "beta must be non-negative");
  require(flow_interval >= 1, "flow_interval must be at least 1");
  require(min_area_fraction >= 0 && min_area_fraction < 1, "min_area_fraction must lie in [0, 1)");
  require(max_span_fraction > 0 && max_span_fraction <= 1, "max_span_fraction must lie in (0, 1]");
  require(max_density > 0 && max_density <= 1, "max_density must lie in (0, 1]");
  require(block_levels >= 1 && block_size >= 1 && block_radius >= 0, "invalid block-matching parameters");
  require(gamma_mine > 1, "gamma_mine must exceed 1");
  require(gamma_mem > 0, "gamma_mem must be positive");
  require(max_gap >= 1, "max_gap must be at least 1");
  require(frame_window >= 1, "frame_window must be at least 1");
  require(theta3 >= 0 && theta3 <= 1, "theta3 must lie in [0, 1]");
  require(n_mem >= 1, "n_mem must be at least 1");
  require(draw_scale > 0 && draw_max >= 1, "invalid frame-draw constants");
  require(instances_per_video >= 0, "instances_per_video must be non-negative");
  require(queue_size >= 3, "queue_size must be at least 3");
  require(fusion_weight >= 0 && fusion_weight <= 1, "fusion_weight must lie in [0, 1]");
  require(lambda1_start >= 0 && lambda1_start <= kMemoryLambdaSum && lambda1_end >= 0 &&
              lambda1_end <= kMemoryLambdaSum,
          "lambda1 schedule endpoints must lie in [0, 0.9]");
}

CandidateFilter Config::candidate_filter() const { return {min_area_fraction, max_span_fraction, max_density}; }

BlockMatchParams Config::block_params() const { return {block_levels, block_size, block_radius}; }

FragmentParams Config::fragment_params() const { return {gamma_mem, theta2, theta3, frame_window}; }

SamplerParams Config::sampler_params() const {
  SamplerParams p;
  p.min_video_quality = theta1;
  p.draw_scale = draw_scale;
  p.max_draws = draw_max;
  p.memory_frames = n_mem;
  p.instances_per_video = instances_per_video;
  p.fragment = fragment_params();
  return p;
}

LambdaSchedule Config::lambda_schedule() const { return {lambda1_start, lambda1_end, kMemoryLambdaSum}; }

std::map<std::string, std::string> Config::to_map() const {
  std::map<std::string, std::string> out;
  for (const auto& [key, f] : fields()) out[key] = f.get(*this);
  return out;
}

void apply_config_file(Config& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::string line;
  long number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + path.string() + ":" + std::to_string(number) + ": expected key = value");
    config.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void apply_environment(Config& config, const char* const* envp) {
  static const std::string prefix = "USOTPIPE_";
  if (!envp) envp = environ;
  for (; *envp; ++envp) {
    const std::string entry = *envp;
    if (entry.rfind(prefix, 0) != 0) continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) continue;
    std::string key = entry.substr(prefix.size(), eq - prefix.size());
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (!fields().contains(key)) continue;  // other USOTPIPE_ variables are not config keys
    config.set(key, entry.substr(eq + 1));
  }
}

}  // namespace usot
