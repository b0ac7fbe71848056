#include "usot/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "usot/annotation_io.hpp"
#include "usot/boxes.hpp"
#include "usot/flow.hpp"
#include "usot/image_io.hpp"
#include "usot/json_out.hpp"

namespace usot {

namespace {

std::vector<fs::path> list_frames(const fs::path& dir) {
  std::vector<fs::path> frames;
  if (!fs::is_directory(dir)) return frames;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_image_file(entry.path())) frames.push_back(entry.path());
  std::sort(frames.begin(), frames.end());
  return frames;
}

std::string frame_name(long t, const char* ext) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06ld%s", t, ext);
  return buf;
}

std::vector<std::string> list_video_dirs(const fs::path& root) {
  if (!fs::is_directory(root)) throw std::runtime_error("input is not a directory: " + root.string());
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory() && fs::is_directory(entry.path() / "frames")) ids.push_back(entry.path().filename().string());
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::string errors_jsonl(const std::vector<VideoError>& errors) {
  std::string out;
  for (const VideoError& e : errors) out += dump_json(Json{{"video", e.video}, {"error", e.message}}) + "\n";
  return out;
}

template <typename Fn>
void parallel_for(long count, int jobs, Fn&& fn) {
  const long workers = std::clamp<long>(jobs, 1, std::max(1L, count));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::jthread> pool;
  for (long w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (long i = next++; i < count; i = next++) fn(i);
    });
}

}  // namespace

std::optional<Candidate> frame_candidate(const FlowFieldF& flow, const Config& config) {
  const BinaryMask mask = binarize(distance_map(flow), config.alpha);
  return candidate_box(mask, config.beta, config.candidate_filter());
}

VideoAnnotation mine_sequence(const std::string& id, long width, long height, long length,
                              const std::function<std::optional<FlowFieldF>(long)>& flow_at, const Config& config) {
  if (length < 1) throw std::runtime_error("empty video");
  std::vector<CandidateFrame> candidates(length);
  std::vector<std::optional<BoxD>> boxes(length);
  for (long t = 0; t < length; ++t) {
    candidates[t].frame_index = t;
    if (t + config.flow_interval >= length) continue;
    const std::optional<FlowFieldF> flow = flow_at(t);
    if (!flow) continue;
    if (flow->width() != width || flow->height() != height)
      throw FormatError("flow " + std::to_string(t) + ": dimensions differ from the video");
    if (const auto c = frame_candidate(*flow, config)) {
      candidates[t].candidate = c->box;
      candidates[t].score = c->score;
      boxes[t] = c->box;
    }
  }
  const Trajectory traj = build_trajectory(std::move(boxes), config.gamma_mine, config.max_gap);
  return make_annotation(id, width, height, config.flow_interval, candidates, traj, config.frame_window);
}

VideoAnnotation mine_video_dir(const fs::path& dir, const std::string& id, const Config& config, FlowSource source) {
  const std::vector<fs::path> frames = list_frames(dir / "frames");
  const long length = static_cast<long>(frames.size());
  if (length == 0) throw std::runtime_error("empty video: no frames in " + (dir / "frames").string());

  if (source == FlowSource::Files) {
    const fs::path flow_dir = dir / "flow";
    long width = 0, height = 0;
    std::optional<FlowFieldF> first;
    for (long t = 0; t + config.flow_interval < length && !first; ++t)
      if (fs::exists(flow_dir / frame_name(t, ".flo"))) first = load_flow(flow_dir / frame_name(t, ".flo"));
    if (first) {
      width = first->width();
      height = first->height();
    } else {
      const GrayImage f0 = load_gray(frames.front());
      width = f0.cols();
      height = f0.rows();
    }
    return mine_sequence(id, width, height, length,
                         [&](long t) -> std::optional<FlowFieldF> {
                           const fs::path p = flow_dir / frame_name(t, ".flo");
                           if (!fs::exists(p)) return std::nullopt;
                           return load_flow(p);
                         },
                         config);
  }

  // Sliding window of decoded frames.
  std::deque<std::pair<long, GrayImage>> cache;
  const auto frame = [&](long t) -> const GrayImage& {
    for (const auto& [k, img] : cache)
      if (k == t) return img;
    cache.emplace_back(t, load_gray(frames[t]));
    while (static_cast<long>(cache.size()) > 2 * (config.flow_interval + 1)) cache.pop_front();
    return cache.back().second;
  };
  const GrayImage& f0 = frame(0);
  const long width = f0.cols(), height = f0.rows();
  const BlockMatchParams params = config.block_params();
  return mine_sequence(id, width, height, length,
                       [&](long t) -> std::optional<FlowFieldF> {
                         const GrayImage a = frame(t);
                         const GrayImage& b = frame(t + config.flow_interval);
                         if (a.rows() != b.rows() || a.cols() != b.cols())
                           throw DimensionError("frames " + std::to_string(t) + " and " +
                                                std::to_string(t + config.flow_interval) + " differ in size");
                         return estimate_flow(a, b, params);
                       },
                       config);
}

RunReport run_mine(const Config& config, const MineOptions& options) {
  config.validate();
  const std::vector<std::string> ids = list_video_dirs(options.input);
  fs::create_directories(options.out);
  RunReport report;
  report.videos = static_cast<long>(ids.size());
  if (ids.empty()) report.warnings.push_back("no video directories found under " + options.input.string());

  std::vector<std::optional<std::string>> failures(ids.size());
  parallel_for(static_cast<long>(ids.size()), options.jobs, [&](long i) {
    try {
      const VideoAnnotation a = mine_video_dir(options.input / ids[i], ids[i], config, options.source);
      save_annotation(options.out / (ids[i] + ".jsonl"), a);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (failures[i])
      report.errors.push_back({ids[i], *failures[i]});
    else
      ++report.outputs;
  }
  const fs::path errors_path = options.out / "errors.jsonl";
  if (!report.errors.empty())
    write_file_atomic(errors_path, errors_jsonl(report.errors));
  else
    fs::remove(errors_path);
  return report;
}

RunReport run_sample(const Config& config, const SampleOptions& options) {
  config.validate();
  const std::vector<VideoAnnotation> videos = load_annotations(options.annotations);
  fs::create_directories(options.out);
  const SamplerParams params = config.sampler_params();
  RunReport report;
  report.videos = static_cast<long>(videos.size());

  std::string lines;
  std::vector<TrainingInstance> all;
  for (const VideoAnnotation& v : videos) {
    for (TrainingInstance& inst : sample_video(v, config.seed, params)) {
      lines += dump_json(instance_to_json(inst)) + "\n";
      all.push_back(std::move(inst));
    }
  }
  if (all.empty())
    report.warnings.push_back("no video passes the video quality threshold; instance stream is empty");
  report.outputs = static_cast<long>(all.size());
  write_file_atomic(options.out / "instances.jsonl", lines);

  if (options.emit_crops) {
    const fs::path crops = options.out / "crops";
    fs::create_directories(crops);
    std::map<std::string, std::vector<fs::path>> frame_lists;
    for (const TrainingInstance& inst : all) {
      try {
        auto& frames = frame_lists[inst.video];
        if (frames.empty()) frames = list_frames(options.frames / inst.video / "frames");
        const auto emit = [&](const CropSpec& spec, const char* role) {
          if (spec.frame >= static_cast<long>(frames.size())) throw std::runtime_error("frame missing for crop");
          const fs::path out = crops / (inst.video + "_" + frame_name(spec.frame, "") + "_" + role + ".png");
          if (fs::exists(out)) return;
          save_gray(out, render_crop(load_gray(frames[spec.frame]), spec));
        };
        emit(inst.template_crop, "template");
        emit(inst.search_crop, "search");
        for (const MemoryEntry& m : inst.memory) emit(m.crop, "memory");
      } catch (const std::exception& e) {
        report.errors.push_back({inst.video, std::string("crop emission: ") + e.what()});
      }
    }
  }
  return report;
}

namespace {

std::optional<fs::path> find_ground_truth(const fs::path& root, const std::string& id) {
  if (fs::exists(root / id / "gt.txt")) return root / id / "gt.txt";
  if (fs::exists(root / (id + ".txt"))) return root / (id + ".txt");
  return std::nullopt;
}

}  // namespace

RunReport run_eval(const Config& config, const EvalOptions& options) {
  config.validate();
  const std::vector<VideoAnnotation> videos = load_annotations(options.annotations);
  if (videos.empty()) throw std::runtime_error("no annotations found in " + options.annotations.string());
  std::vector<TrainingInstance> instances;
  if (options.instances) instances = load_instances(*options.instances);

  RunReport report;
  report.videos = static_cast<long>(videos.size());
  std::map<std::string, std::vector<BoxD>> truth;
  std::vector<std::string> skipped;
  for (const VideoAnnotation& v : videos) {
    const auto path = find_ground_truth(options.ground_truth, v.id);
    if (!path) {
      skipped.push_back(v.id);
      report.warnings.push_back("no ground truth for video " + v.id + "; skipped");
      continue;
    }
    try {
      std::vector<BoxD> gt = load_ground_truth(*path);
      if (static_cast<long>(gt.size()) < v.length())
        throw FormatError("ground truth has " + std::to_string(gt.size()) + " boxes for " +
                          std::to_string(v.length()) + " frames");
      truth[v.id] = std::move(gt);
    } catch (const std::exception& e) {
      report.errors.push_back({v.id, e.what()});
    }
  }
  if (truth.empty() && report.errors.empty())
    throw std::runtime_error("ground truth ids match none of the annotated videos");

  std::vector<LabeledPair> pairs;
  for (const VideoAnnotation& v : videos) {
    const auto it = truth.find(v.id);
    if (it == truth.end()) continue;
    for (const FrameRecord& f : v.frames)
      if (f.selected && f.pseudo) pairs.push_back({*f.pseudo, it->second[f.frame], "selected"});
  }
  for (const TrainingInstance& inst : instances) {
    const auto it = truth.find(inst.video);
    if (it == truth.end()) continue;
    const auto in_range = [&](long t) { return t >= 0 && t < static_cast<long>(it->second.size()); };
    if (!in_range(inst.template_frame)) continue;
    pairs.push_back({inst.template_box, it->second[inst.template_frame], "template"});
    for (const MemoryEntry& m : inst.memory)
      if (in_range(m.frame)) pairs.push_back({m.box, it->second[m.frame], "memory"});
  }

  fs::create_directories(options.out);
  Json doc;
  const std::vector<double> thresholds = default_thresholds();
  doc["thresholds"] = thresholds;
  Json roles = Json::object();
  if (!pairs.empty()) {
    const SuccessReport success = success_rates(pairs, thresholds);
    for (const auto& [name, role] : success.roles) roles[name] = {{"count", role.count}, {"rates", role.rates}};
    if (options.plot) write_file_atomic(options.out / "success_curve.svg", success_curve_svg(success));
  } else {
    report.warnings.push_back("no pseudo boxes to evaluate");
  }
  doc["roles"] = roles;
  const TrajectoryStats stats = trajectory_stats(videos, instances, config.theta1);
  doc["stats"] = {{"videos", stats.videos},
                  {"accepted", stats.accepted},
                  {"utilization", stats.utilization},
                  {"instances", stats.instances},
                  {"mean_interval", stats.mean_interval},
                  {"mean_fragment_length", stats.mean_fragment_length}};
  doc["skipped"] = skipped;
  Json errors = Json::array();
  for (const VideoError& e : report.errors) errors.push_back({{"video", e.video}, {"error", e.message}});
  doc["errors"] = errors;

  write_file_atomic(options.out / "report.json", dump_json(doc) + "\n");
  report.outputs = static_cast<long>(pairs.size());
  return report;
}

std::string synth_video_id(long index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "synth_%04ld", index);
  return buf;
}

SynthDataset parse_synth_dataset(const std::string& json_text) {
  SynthDataset d;
  try {
    const Json j = Json::parse(json_text);
    d.videos = j.value("videos", 1L);
    d.base.width = j.value("width", d.base.width);
    d.base.height = j.value("height", d.base.height);
    d.base.length = j.value("length", d.base.length);
    d.base.flow_interval = j.value("flow_interval", d.base.flow_interval);
    d.base.noise = j.value("noise", d.base.noise);
    d.base.texture_seed = j.value("texture_seed", d.base.texture_seed);
    d.max_objects = j.value("max_objects", d.max_objects);
    if (j.contains("objects")) {
      d.explicit_objects = true;
      for (const Json& o : j.at("objects")) {
        SynthObject obj;
        const Json& b = o.at("box");
        obj.box = {b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(), b.at(3).get<double>()};
        if (o.contains("velocity")) obj.velocity = {o["velocity"].at(0).get<double>(), o["velocity"].at(1).get<double>()};
        if (o.contains("amplitude"))
          obj.amplitude = {o["amplitude"].at(0).get<double>(), o["amplitude"].at(1).get<double>()};
        obj.period = o.value("period", 0.0);
        obj.bounce = o.value("bounce", false);
        d.base.objects.push_back(obj);
      }
    }
  } catch (const Json::exception& e) {
    throw SpecError(std::string("synth spec: ") + e.what());
  }
  if (d.videos < 1) throw SpecError("synth spec: videos must be at least 1");
  return d;
}

void write_synth_video(const fs::path& dir, const SynthVideo& video) {
  fs::create_directories(dir / "frames");
  fs::create_directories(dir / "flow");
  for (long t = 0; t < video.length(); ++t) save_gray(dir / "frames" / frame_name(t, ".png"), video.frames[t]);
  for (std::size_t t = 0; t < video.flows.size(); ++t)
    save_flow(dir / "flow" / frame_name(static_cast<long>(t), ".flo"), video.flows[t]);
  write_file_atomic(dir / "gt.txt", serialize_ground_truth(video.ground_truth));
}

RunReport run_synth(const SynthOptions& options) {
  std::ifstream in(options.spec);
  if (!in) throw std::runtime_error("cannot open synth spec " + options.spec.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const SynthDataset dataset = parse_synth_dataset(ss.str());

  RunReport report;
  report.videos = dataset.videos;
  for (long i = 0; i < dataset.videos; ++i) {
    const std::string id = synth_video_id(i);
    const std::uint64_t seed = derive_seed(options.seed, id);
    SynthSpec spec = dataset.base;
    if (!dataset.explicit_objects) {
      spec = random_synth_spec(seed, dataset.base.width, dataset.base.height, dataset.base.length,
                               dataset.max_objects, dataset.base.flow_interval);
      spec.noise = dataset.base.noise;
    }
    try {
      write_synth_video(options.out / id, synth_video(spec, seed));
      ++report.outputs;
    } catch (const SpecError& e) {
      report.errors.push_back({id, e.what()});
    }
  }
  return report;
}

std::string success_curve_svg(const SuccessReport& report) {
  constexpr double kW = 480, kH = 320, kLeft = 50, kBottom = 40, kTop = 20, kRight = 110;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double v = k / 5.0;
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + ph * (1 - v) + 4
        << "\" font-size=\"10\" text-anchor=\"end\">" << v << "</text>\n";
    svg << "<text x=\"" << kLeft + pw * v << "\" y=\"" << kTop + ph + 14
        << "\" font-size=\"10\" text-anchor=\"middle\">" << v << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 8
      << "\" font-size=\"11\" text-anchor=\"middle\">IoU threshold</text>\n";
  svg << "<text x=\"14\" y=\"" << kTop + ph / 2 << "\" font-size=\"11\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << kTop + ph / 2 << ")\">success rate</text>\n";
  int index = 0;
  for (const auto& [name, role] : report.roles) {
    const char* color = colors[index % 5];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < report.thresholds.size(); ++i)
      svg << kLeft + pw * report.thresholds[i] << "," << kTop + ph * (1 - role.rates[i]) << " ";
    svg << "\"/>\n";
    svg << "<text x=\"" << kLeft + pw + 8 << "\" y=\"" << kTop + 14 + 16 * index << "\" font-size=\"11\" fill=\""
        << color << "\">" << name << " (" << role.count << ")</text>\n";
    ++index;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace usot
