#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "usot/annotation.hpp"
#include "usot/json_out.hpp"
#include "usot/sampler.hpp"

namespace usot {

/// Video header line followed by one line per frame.
std::string serialize_annotation(const VideoAnnotation& video);
VideoAnnotation parse_annotation(const std::string& text);

void save_annotation(const std::filesystem::path& path, const VideoAnnotation& video);
VideoAnnotation load_annotation(const std::filesystem::path& path);

/// Every *.jsonl annotation in `dir` whose first line is a video header, ordered by id.
std::vector<VideoAnnotation> load_annotations(const std::filesystem::path& dir);

Json instance_to_json(const TrainingInstance& instance);
TrainingInstance instance_from_json(const Json& json);
std::vector<TrainingInstance> load_instances(const std::filesystem::path& path);

/// One box per line, "x0 y0 x1 y1".
std::vector<BoxD> load_ground_truth(const std::filesystem::path& path);
std::string serialize_ground_truth(const std::vector<BoxD>& boxes);

}  // namespace usot
