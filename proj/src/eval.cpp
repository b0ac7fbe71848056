#include "usot/eval.hpp"

#include <cstdlib>
#include <stdexcept>

namespace usot {

double SuccessReport::rate(const std::string& role, double threshold) const {
  const auto it = roles.find(role);
  if (it == roles.end()) throw std::out_of_range("SuccessReport: no role " + role);
  for (std::size_t i = 0; i < thresholds.size(); ++i)
    if (thresholds[i] == threshold) return it->second.rates[i];
  throw std::out_of_range("SuccessReport: threshold not evaluated");
}

std::vector<double> default_thresholds() {
  std::vector<double> out;
  for (int k = 0; k < 20; ++k) out.push_back(k / 20.0);
  return out;
}

SuccessReport success_rates(std::span<const LabeledPair> pairs, std::span<const double> thresholds) {
  if (pairs.empty()) throw std::invalid_argument("success_rates: no instances");
  SuccessReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  report.count = static_cast<long>(pairs.size());
  std::map<std::string, std::vector<long>> hits;
  for (const LabeledPair& p : pairs) {
    RoleSuccess& role = report.roles[p.role];
    std::vector<long>& h = hits[p.role];
    h.resize(thresholds.size(), 0);
    ++role.count;
    const double overlap = iou(p.pseudo, p.truth);
    for (std::size_t i = 0; i < thresholds.size(); ++i)
      if (overlap > thresholds[i]) ++h[i];
  }
  for (auto& [name, role] : report.roles)
    for (long h : hits[name]) role.rates.push_back(static_cast<double>(h) / static_cast<double>(role.count));
  return report;
}

TrajectoryStats trajectory_stats(std::span<const VideoAnnotation> videos, std::span<const TrainingInstance> instances,
                                 double min_video_quality) {
  if (videos.empty()) throw std::invalid_argument("trajectory_stats: no annotations");
  TrajectoryStats s;
  s.videos = static_cast<long>(videos.size());
  for (const VideoAnnotation& v : videos)
    if (!v.flagged && accept_video(v.quality, min_video_quality)) ++s.accepted;
  s.utilization = static_cast<double>(s.accepted) / static_cast<double>(s.videos);
  s.instances = static_cast<long>(instances.size());
  long memory_count = 0;
  double interval_sum = 0.0, fragment_sum = 0.0;
  for (const TrainingInstance& inst : instances) {
    fragment_sum += static_cast<double>(inst.fragment.size());
    for (const MemoryEntry& m : inst.memory) {
      interval_sum += static_cast<double>(std::labs(m.frame - inst.template_frame));
      ++memory_count;
    }
  }
  if (memory_count) s.mean_interval = interval_sum / static_cast<double>(memory_count);
  if (!instances.empty()) s.mean_fragment_length = fragment_sum / static_cast<double>(instances.size());
  return s;
}

}  // namespace usot
