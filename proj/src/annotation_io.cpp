#include "usot/annotation_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "usot/flow.hpp"

namespace usot {

namespace {

Json box_json(const BoxD& b) { return Json::array({b.x0, b.y0, b.x1, b.y1}); }

BoxD box_from(const Json& j) {
  if (!j.is_array() || j.size() != 4) throw FormatError("box must be a 4-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

template <typename T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, BoxD>)
    return box_json(*v);
  else
    return *v;
}

Json crop_json(const CropSpec& c) {
  Json j;
  j["frame"] = c.frame;
  j["center"] = Json::array({c.center.x(), c.center.y()});
  j["source_side"] = c.source_side;
  j["output_side"] = c.output_side;
  j["scale"] = c.scale();
  j["padding"] = {{"left", c.pad_left}, {"top", c.pad_top}, {"right", c.pad_right}, {"bottom", c.pad_bottom}};
  return j;
}

CropSpec crop_from(const Json& j) {
  CropSpec c;
  c.frame = j.at("frame").get<long>();
  c.center = {j.at("center").at(0).get<double>(), j.at("center").at(1).get<double>()};
  c.source_side = j.at("source_side").get<double>();
  c.output_side = j.at("output_side").get<int>();
  const Json& p = j.at("padding");
  c.pad_left = p.at("left").get<bool>();
  c.pad_top = p.at("top").get<bool>();
  c.pad_right = p.at("right").get<bool>();
  c.pad_bottom = p.at("bottom").get<bool>();
  return c;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string serialize_annotation(const VideoAnnotation& video) {
  std::string out;
  Json header;
  header["type"] = "video";
  header["id"] = video.id;
  header["length"] = video.length();
  header["width"] = video.width;
  header["height"] = video.height;
  header["flow_interval"] = video.flow_interval;
  header["quality"] = video.quality;
  header["flagged"] = video.flagged;
  out += dump_json(header) + "\n";
  for (const FrameRecord& f : video.frames) {
    Json j;
    j["type"] = "frame";
    j["frame"] = f.frame;
    j["candidate"] = optional_json(f.candidate);
    j["score"] = optional_json(f.score);
    j["selected"] = f.selected;
    j["pseudo"] = optional_json(f.pseudo);
    j["quality"] = f.quality;
    out += dump_json(j) + "\n";
  }
  return out;
}

VideoAnnotation parse_annotation(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  VideoAnnotation v;
  try {
    if (!std::getline(in, line)) throw FormatError("annotation: empty document");
    const Json header = Json::parse(line);
    if (header.at("type") != "video") throw FormatError("annotation: first line is not a video header");
    v.id = header.at("id").get<std::string>();
    const long length = header.at("length").get<long>();
    v.width = header.at("width").get<long>();
    v.height = header.at("height").get<long>();
    v.flow_interval = header.at("flow_interval").get<long>();
    v.quality = header.at("quality").get<double>();
    v.flagged = header.at("flagged").get<bool>();
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const Json j = Json::parse(line);
      if (j.at("type") != "frame") throw FormatError("annotation: expected a frame record");
      FrameRecord f;
      f.frame = j.at("frame").get<long>();
      if (!j.at("candidate").is_null()) f.candidate = box_from(j["candidate"]);
      if (!j.at("score").is_null()) f.score = j["score"].get<double>();
      f.selected = j.at("selected").get<bool>();
      if (!j.at("pseudo").is_null()) f.pseudo = box_from(j["pseudo"]);
      f.quality = j.at("quality").get<double>();
      if (f.frame != v.length()) throw FormatError("annotation: frame records out of order");
      v.frames.push_back(f);
    }
    if (v.length() != length) throw FormatError("annotation: frame count differs from header length");
  } catch (const Json::exception& e) {
    throw FormatError(std::string("annotation: ") + e.what());
  }
  return v;
}

void save_annotation(const std::filesystem::path& path, const VideoAnnotation& video) {
  write_file_atomic(path, serialize_annotation(video));
}

VideoAnnotation load_annotation(const std::filesystem::path& path) {
  try {
    return parse_annotation(read_text(path));
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + " (" + path.string() + ")");
  }
}

std::vector<VideoAnnotation> load_annotations(const std::filesystem::path& dir) {
  std::vector<VideoAnnotation> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string first;
    std::getline(in, first);
    if (first.find("\"type\":\"video\"") == std::string::npos) continue;
    out.push_back(load_annotation(entry.path()));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return out;
}

Json instance_to_json(const TrainingInstance& inst) {
  Json j;
  j["video"] = inst.video;
  j["template"] = {{"frame", inst.template_frame}, {"box", box_json(inst.template_box)}, {"crop", crop_json(inst.template_crop)}};
  j["search"] = {{"crop", crop_json(inst.search_crop)}};
  j["fragment"] = Json::array({inst.fragment.lower, inst.fragment.upper});
  Json memory = Json::array();
  for (const MemoryEntry& m : inst.memory)
    memory.push_back({{"frame", m.frame}, {"box", box_json(m.box)}, {"crop", crop_json(m.crop)}});
  j["memory"] = memory;
  j["flip"] = {{"horizontal", inst.flip_h}, {"vertical", inst.flip_v}};
  return j;
}

TrainingInstance instance_from_json(const Json& j) {
  TrainingInstance inst;
  try {
    inst.video = j.at("video").get<std::string>();
    inst.template_frame = j.at("template").at("frame").get<long>();
    inst.template_box = box_from(j["template"].at("box"));
    inst.template_crop = crop_from(j["template"].at("crop"));
    inst.search_crop = crop_from(j.at("search").at("crop"));
    inst.fragment = {j.at("fragment").at(0).get<long>(), j["fragment"].at(1).get<long>()};
    for (const Json& m : j.at("memory")) inst.memory.push_back({m.at("frame").get<long>(), box_from(m.at("box")), crop_from(m.at("crop"))});
    inst.flip_h = j.at("flip").at("horizontal").get<bool>();
    inst.flip_v = j["flip"].at("vertical").get<bool>();
  } catch (const Json::exception& e) {
    throw FormatError(std::string("instance: ") + e.what());
  }
  return inst;
}

std::vector<TrainingInstance> load_instances(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<TrainingInstance> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      out.push_back(instance_from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw FormatError(std::string("instance: ") + e.what() + " (" + path.string() + ")");
    }
  }
  return out;
}

std::vector<BoxD> load_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<BoxD> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    BoxD b;
    if (!(ls >> b.x0 >> b.y0 >> b.x1 >> b.y1))
      throw FormatError("ground truth: malformed line " + std::to_string(out.size() + 1) + " (" + path.string() + ")");
    out.push_back(b);
  }
  return out;
}

std::string serialize_ground_truth(const std::vector<BoxD>& boxes) {
  std::string out;
  char buf[128];
  for (const BoxD& b : boxes) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", b.x0, b.y0, b.x1, b.y1);
    out += buf;
  }
  return out;
}

}  // namespace usot
