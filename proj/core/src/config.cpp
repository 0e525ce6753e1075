// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace beamsep {

PipelineConfig::PipelineConfig() {
  geometry = default_array();
  pairs = default_pairs();
}

void PipelineConfig::validate() const {
  stft_config();  // throws on bad stft parameters
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  geometry.validate();
  validate_pairs(pairs, geometry.num_channels());
  ranges.validate();
  if (speed_of_sound <= 0.0) throw ConfigError("speed_of_sound must be positive");
  if (af_threshold < -1.0 || af_threshold > 1.0)
    throw ConfigError("af_threshold must be in [-1, 1]");
  if (diagonal_loading < 0.0) throw ConfigError("diagonal_loading must be >= 0");
  if (source_duration_s <= 0.0)
    throw ConfigError("source_duration_s must be positive");
}

namespace {

nlohmann::json to_json(const PipelineConfig &c) {
  nlohmann::json j;
  j["af_threshold"] = c.af_threshold;
  j["diagonal_loading"] = c.diagonal_loading;
  j["fft_size"] = c.fft_size;
  j["hop_length"] = c.hop_length;
  j["mask_bound"] = c.mask_bound;
  j["sample_rate"] = c.sample_rate;
  j["seed"] = c.seed;
  j["source_duration_s"] = c.source_duration_s;
  j["speed_of_sound"] = c.speed_of_sound;
  j["window_length"] = c.window_length;

  nlohmann::json mics = nlohmann::json::array();
  for (const Vec3 &p : c.geometry.mic_positions_relative)
    mics.push_back({p[0], p[1], p[2]});
  j["geometry"] = {{"mic_positions_relative", mics},
                   {"reference_index", c.geometry.reference_index}};

  nlohmann::json pairs = nlohmann::json::array();
  for (const auto &[a, b] : c.pairs) pairs.push_back({a, b});
  j["pairs"] = pairs;

  j["ranges"] = {{"room_min", {c.ranges.room_min[0], c.ranges.room_min[1], c.ranges.room_min[2]}},
                 {"room_max", {c.ranges.room_max[0], c.ranges.room_max[1], c.ranges.room_max[2]}},
                 {"t60_min", c.ranges.t60_min},
                 {"t60_max", c.ranges.t60_max},
                 {"sir_choices_db", c.ranges.sir_choices_db},
                 {"overlap_min", c.ranges.overlap_min},
                 {"overlap_max", c.ranges.overlap_max},
                 {"distance_min", c.ranges.distance_min},
                 {"distance_max", c.ranges.distance_max},
                 {"wall_margin", c.ranges.wall_margin}};
  return j;
}

Vec3 vec3_from(const nlohmann::json &j, const std::string &what) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError(what + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void reject_unknown(const nlohmann::json &j, const std::set<std::string> &known,
                    const std::string &scope) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (known.find(it.key()) == known.end())
      throw ConfigError("unknown config key: " + scope + it.key());
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  reject_unknown(j,
                 {"af_threshold", "diagonal_loading", "fft_size", "geometry",
                  "hop_length", "mask_bound", "pairs", "ranges", "sample_rate",
                  "seed", "source_duration_s", "speed_of_sound",
                  "window_length"},
                 "");

  PipelineConfig c;
  if (j.contains("af_threshold")) c.af_threshold = j["af_threshold"].get<double>();
  if (j.contains("diagonal_loading"))
    c.diagonal_loading = j["diagonal_loading"].get<double>();
  if (j.contains("fft_size")) c.fft_size = j["fft_size"].get<size_t>();
  if (j.contains("hop_length")) c.hop_length = j["hop_length"].get<size_t>();
  if (j.contains("mask_bound")) c.mask_bound = j["mask_bound"].get<double>();
  if (j.contains("sample_rate")) c.sample_rate = j["sample_rate"].get<int>();
  if (j.contains("seed")) c.seed = j["seed"].get<uint64_t>();
  if (j.contains("source_duration_s"))
    c.source_duration_s = j["source_duration_s"].get<double>();
  if (j.contains("speed_of_sound"))
    c.speed_of_sound = j["speed_of_sound"].get<double>();
  if (j.contains("window_length"))
    c.window_length = j["window_length"].get<size_t>();

  if (j.contains("geometry")) {
    const nlohmann::json &g = j["geometry"];
    reject_unknown(g, {"mic_positions_relative", "reference_index"}, "geometry.");
    if (g.contains("mic_positions_relative")) {
      c.geometry.mic_positions_relative.clear();
      for (const auto &p : g["mic_positions_relative"])
        c.geometry.mic_positions_relative.push_back(
            vec3_from(p, "mic position"));
    }
    if (g.contains("reference_index"))
      c.geometry.reference_index = g["reference_index"].get<size_t>();
  }

  if (j.contains("pairs")) {
    c.pairs.clear();
    for (const auto &p : j["pairs"]) {
      if (!p.is_array() || p.size() != 2)
        throw ConfigError("each pair must be a 2-element array");
      c.pairs.emplace_back(p[0].get<size_t>(), p[1].get<size_t>());
    }
  }

  if (j.contains("ranges")) {
    const nlohmann::json &r = j["ranges"];
    reject_unknown(r,
                   {"room_min", "room_max", "t60_min", "t60_max",
                    "sir_choices_db", "overlap_min", "overlap_max",
                    "distance_min", "distance_max", "wall_margin"},
                   "ranges.");
    if (r.contains("room_min")) c.ranges.room_min = vec3_from(r["room_min"], "room_min");
    if (r.contains("room_max")) c.ranges.room_max = vec3_from(r["room_max"], "room_max");
    if (r.contains("t60_min")) c.ranges.t60_min = r["t60_min"].get<double>();
    if (r.contains("t60_max")) c.ranges.t60_max = r["t60_max"].get<double>();
    if (r.contains("sir_choices_db"))
      c.ranges.sir_choices_db = r["sir_choices_db"].get<std::vector<double>>();
    if (r.contains("overlap_min")) c.ranges.overlap_min = r["overlap_min"].get<double>();
    if (r.contains("overlap_max")) c.ranges.overlap_max = r["overlap_max"].get<double>();
    if (r.contains("distance_min"))
      c.ranges.distance_min = r["distance_min"].get<double>();
    if (r.contains("distance_max"))
      c.ranges.distance_max = r["distance_max"].get<double>();
    if (r.contains("wall_margin")) c.ranges.wall_margin = r["wall_margin"].get<double>();
  }

  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void PipelineConfig::save(const std::string &path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << to_canonical_json();
}

std::string PipelineConfig::to_canonical_json() const {
  return to_json(*this).dump(2) + "\n";
}

std::string PipelineConfig::fingerprint() const {
  const std::string text = to_canonical_json();
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace beamsep
