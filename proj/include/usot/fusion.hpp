#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "usot/flow.hpp"
#include "usot/geometry.hpp"

namespace usot {

inline constexpr int kResponseSide = 25;
inline constexpr int kResponseStride = 8;

/// Single-channel response (classification score or integrated memory map).
using ResponseMap = Plane<double>;
using LabelMap = Plane<bool>;

/// Four-channel side-distance map: left, top, right, bottom.
struct RegressionMap {
  std::array<Plane<double>, 4> sides;

  Eigen::Index rows() const { return sides[0].rows(); }
  Eigen::Index cols() const { return sides[0].cols(); }
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Per-location softmax over the confidence maps.
std::vector<ResponseMap> softmax_weights(std::span<const ResponseMap> confidence);

/// Confidence-weighted sum of value maps: softmax over the stack of
/// confidences at each location, applied to the matching value entries.
ResponseMap integrate_maps(std::span<const ResponseMap> confidence, std::span<const ResponseMap> value);

inline constexpr double kProbabilityEpsilon = 1e-7;

/// Mean binary cross-entropy with predictions clamped to [eps, 1 - eps].
double bce_loss(const ResponseMap& prediction, const LabelMap& label);

/// Mean of -ln IoU over positive locations between the boxes the two
/// distance maps describe around each location. 0 when nothing is positive.
double iou_loss(const RegressionMap& prediction, const RegressionMap& target, const LabelMap& positives);

enum class TrainingStage { Naive, Memory };

inline constexpr double kMemoryLambdaSum = 0.9;

/// Naive: l_reg + lambda1 * l_cls. Memory: l_reg + lambda1 * l_cls + lambda2 * l_mem
/// with lambda1 + lambda2 pinned to 0.9.
double total_loss(double l_reg, double l_cls, double l_mem, TrainingStage stage, double lambda1, double lambda2);

struct LambdaSchedule {
  double start = 0.3;
  double end = 0.1;
  double sum = kMemoryLambdaSum;
};

/// lambda1 falls linearly from start (first memory epoch) to end (last);
/// lambda2 = sum - lambda1. Epochs are 0-based within the memory stage.
std::pair<double, double> lambda_schedule(long epoch, long memory_epochs, const LambdaSchedule& schedule = {});

/// (1 - w) * classification + w * memory.
ResponseMap fuse_response(const ResponseMap& classification, const ResponseMap& memory, double w);

/// Target box in search-crop coordinates to a classification label: a grid
/// cell is positive when its stride-8 centered position lies in the box
/// shrunk to half size about its center. When the target center is inside
/// the grid span the nearest cell is forced positive.
LabelMap make_label_map(const BoxD& target, int side = kResponseSide, int stride = kResponseStride,
                        int search_side = 255);

/// Distances from each grid position to the target's four sides.
RegressionMap make_regression_target(const BoxD& target, int side = kResponseSide, int stride = kResponseStride,
                                     int search_side = 255);

enum class MemoryKind { GroundTruth, GroundTruthFlip, Latest, Historical };

template <typename Descriptor>
struct QueueEntry {
  Descriptor descriptor;
  long frame = 0;
  double score = 0.0;
  MemoryKind kind = MemoryKind::Historical;
};

/// Online template queue: both first-frame templates, the latest prediction,
/// and the best-scoring earlier predictions up to capacity.
template <typename Descriptor>
class MemoryQueue {
 public:
  using Entry = QueueEntry<Descriptor>;

  explicit MemoryQueue(long capacity) : capacity_(capacity) {
    if (capacity < 3) throw ConfigError("MemoryQueue: capacity must be at least 3");
  }

  void initialize(Descriptor ground_truth, Descriptor ground_truth_flip, long frame = 0) {
    ground_truth_ = {{std::move(ground_truth), frame, 1.0, MemoryKind::GroundTruth},
                     {std::move(ground_truth_flip), frame, 1.0, MemoryKind::GroundTruthFlip}};
    latest_.reset();
    historical_.clear();
  }

  bool initialized() const { return ground_truth_.size() == 2; }

  /// Adds the prediction for `frame`. The previous latest entry competes for
  /// a historical slot; ties on score keep the more recent frame. A repeated
  /// frame index replaces the stored entry.
  void update(Descriptor descriptor, long frame, double score) {
    if (!initialized()) throw std::logic_error("MemoryQueue: update before initialize");
    if (frame == ground_truth_.front().frame) throw std::invalid_argument("MemoryQueue: frame holds ground truth");
    Entry incoming{std::move(descriptor), frame, score, MemoryKind::Latest};
    if (latest_ && latest_->frame == frame) {
      latest_ = std::move(incoming);
      return;
    }
    std::erase_if(historical_, [frame](const Entry& e) { return e.frame == frame; });
    if (latest_) {
      latest_->kind = MemoryKind::Historical;
      historical_.push_back(std::move(*latest_));
      std::stable_sort(historical_.begin(), historical_.end(), ranks_before);
      if (static_cast<long>(historical_.size()) > history_capacity()) historical_.resize(history_capacity());
    }
    latest_ = std::move(incoming);
  }

  long capacity() const { return capacity_; }
  long history_capacity() const { return capacity_ - 3; }
  long size() const { return static_cast<long>(ground_truth_.size() + (latest_ ? 1 : 0) + historical_.size()); }

  const std::vector<Entry>& ground_truth() const { return ground_truth_; }
  const std::optional<Entry>& latest() const { return latest_; }
  /// Sorted by score, descending.
  const std::vector<Entry>& historical() const { return historical_; }

  std::vector<Entry> entries() const {
    std::vector<Entry> out = ground_truth_;
    if (latest_) out.push_back(*latest_);
    out.insert(out.end(), historical_.begin(), historical_.end());
    return out;
  }

  static bool ranks_before(const Entry& a, const Entry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.frame > b.frame;
  }

 private:
  long capacity_;
  std::vector<Entry> ground_truth_;
  std::optional<Entry> latest_;
  std::vector<Entry> historical_;
};

}  // namespace usot
