// Copyright 2026 beamsep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "beamsep/manifest.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace beamsep {

namespace {

nlohmann::json vec3_json(const Vec3 &v) {
  return nlohmann::json{v[0], v[1], v[2]};
}

Vec3 vec3_from(const nlohmann::json &j, const std::string &what) {
  if (!j.is_array() || j.size() != 3)
    throw FormatError("manifest: " + what + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

void reject_unknown(const nlohmann::json &j, const std::set<std::string> &known,
                    const std::string &scope) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (known.find(it.key()) == known.end())
      throw FormatError("manifest: unknown key " + scope + it.key());
}

const nlohmann::json &require(const nlohmann::json &j, const std::string &key,
                              const std::string &scope) {
  auto it = j.find(key);
  if (it == j.end())
    throw FormatError("manifest: missing key " + scope + key);
  return *it;
}

nlohmann::json scene_json(const SceneSpec &s) {
  nlohmann::json j;
  j["room"] = {{"dimensions", vec3_json(s.room.dimensions)},
               {"t60", s.room.t60},
               {"speed_of_sound", s.room.speed_of_sound}};
  j["array_center"] = vec3_json(s.array_center);
  j["array_orientation_rad"] = s.array_orientation_rad;
  j["target_position"] = vec3_json(s.target_position);
  j["interferer_position"] = vec3_json(s.interferer_position);
  j["target_doa_deg"] = s.target_doa_deg;
  j["sir_db"] = s.sir_db;
  j["overlap_ratio"] = s.overlap_ratio;
  j["seed"] = s.seed;
  return j;
}

SceneSpec scene_from(const nlohmann::json &j, const std::string &scope) {
  reject_unknown(j,
                 {"room", "array_center", "array_orientation_rad",
                  "target_position", "interferer_position", "target_doa_deg",
                  "sir_db", "overlap_ratio", "seed"},
                 scope);
  SceneSpec s;
  const nlohmann::json &room = require(j, "room", scope);
  reject_unknown(room, {"dimensions", "t60", "speed_of_sound"}, scope + "room.");
  s.room.dimensions = vec3_from(require(room, "dimensions", scope + "room."),
                                "room.dimensions");
  s.room.t60 = require(room, "t60", scope + "room.").get<double>();
  s.room.speed_of_sound =
      require(room, "speed_of_sound", scope + "room.").get<double>();
  s.array_center = vec3_from(require(j, "array_center", scope), "array_center");
  s.array_orientation_rad =
      require(j, "array_orientation_rad", scope).get<double>();
  s.target_position =
      vec3_from(require(j, "target_position", scope), "target_position");
  s.interferer_position =
      vec3_from(require(j, "interferer_position", scope), "interferer_position");
  s.target_doa_deg = require(j, "target_doa_deg", scope).get<double>();
  s.sir_db = require(j, "sir_db", scope).get<double>();
  s.overlap_ratio = require(j, "overlap_ratio", scope).get<double>();
  s.seed = require(j, "seed", scope).get<uint64_t>();
  return s;
}

}  // namespace

std::string Manifest::resolve(const std::string &relative) const {
  if (relative.empty()) return relative;
  std::filesystem::path p(relative);
  if (p.is_absolute() || root.empty()) return relative;
  return (std::filesystem::path(root) / p).string();
}

void write_manifest(const Manifest &manifest, const std::string &path) {
  nlohmann::json j;
  j["schema_version"] = manifest.schema_version;
  j["master_seed"] = manifest.master_seed;
  j["config_fingerprint"] = manifest.config_fingerprint;
  nlohmann::json utts = nlohmann::json::array();
  for (const UtteranceEntry &u : manifest.utterances) {
    nlohmann::json e;
    e["id"] = u.id;
    e["scene"] = scene_json(u.scene);
    e["doa_deg"] = u.doa_deg;
    e["paths"] = {{"mixture", u.mixture_path},
                  {"target_stem", u.target_stem_path},
                  {"interferer_stem", u.interferer_stem_path}};
    utts.push_back(e);
  }
  j["utterances"] = utts;

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed writing manifest " + path);
}

Manifest read_manifest(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path);
  std::stringstream ss;
  ss << in.rdbuf();

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("manifest root must be a JSON object");
  reject_unknown(
      j, {"schema_version", "master_seed", "config_fingerprint", "utterances"},
      "");

  Manifest m;
  m.schema_version = require(j, "schema_version", "").get<int>();
  if (m.schema_version != 1)
    throw FormatError("unsupported manifest schema_version " +
                      std::to_string(m.schema_version));
  m.master_seed = require(j, "master_seed", "").get<uint64_t>();
  m.config_fingerprint = require(j, "config_fingerprint", "").get<std::string>();

  const nlohmann::json &utts = require(j, "utterances", "");
  if (!utts.is_array())
    throw FormatError("manifest: utterances must be an array");
  for (const auto &e : utts) {
    reject_unknown(e, {"id", "scene", "doa_deg", "paths"}, "utterances[].");
    UtteranceEntry u;
    u.id = require(e, "id", "utterances[].").get<std::string>();
    u.scene = scene_from(require(e, "scene", "utterances[]."),
                         "utterances[].scene.");
    u.doa_deg = require(e, "doa_deg", "utterances[].").get<double>();
    const nlohmann::json &paths = require(e, "paths", "utterances[].");
    reject_unknown(paths, {"mixture", "target_stem", "interferer_stem"},
                   "utterances[].paths.");
    u.mixture_path =
        require(paths, "mixture", "utterances[].paths.").get<std::string>();
    u.target_stem_path =
        require(paths, "target_stem", "utterances[].paths.").get<std::string>();
    u.interferer_stem_path = require(paths, "interferer_stem",
                                     "utterances[].paths.").get<std::string>();
    m.utterances.push_back(std::move(u));
  }

  m.root = std::filesystem::path(path).parent_path().string();
  return m;
}

}  // namespace beamsep
