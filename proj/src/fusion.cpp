#include "usot/fusion.hpp"

#include <cmath>

namespace usot {

namespace {

void require_same_shape(std::span<const ResponseMap> maps, const char* what) {
  for (const ResponseMap& m : maps)
    if (m.rows() != maps.front().rows() || m.cols() != maps.front().cols())
      throw DimensionError(std::string(what) + ": map dimensions differ");
}

}  // namespace

std::vector<ResponseMap> softmax_weights(std::span<const ResponseMap> confidence) {
  if (confidence.empty()) throw std::invalid_argument("softmax_weights: no maps");
  require_same_shape(confidence, "softmax_weights");
  ResponseMap peak = confidence[0];
  for (const ResponseMap& c : confidence.subspan(1)) peak = peak.max(c);
  std::vector<ResponseMap> weights;
  ResponseMap total = ResponseMap::Zero(peak.rows(), peak.cols());
  for (const ResponseMap& c : confidence) {
    weights.push_back((c - peak).exp());
    total += weights.back();
  }
  for (ResponseMap& w : weights) w /= total;
  return weights;
}

ResponseMap integrate_maps(std::span<const ResponseMap> confidence, std::span<const ResponseMap> value) {
  if (confidence.size() != value.size())
    throw DimensionError("integrate_maps: confidence and value counts differ");
  if (confidence.empty()) throw std::invalid_argument("integrate_maps: no maps");
  require_same_shape(value, "integrate_maps");
  if (value[0].rows() != confidence[0].rows() || value[0].cols() != confidence[0].cols())
    throw DimensionError("integrate_maps: confidence and value shapes differ");
  if (confidence.size() == 1) return value[0];
  const std::vector<ResponseMap> weights = softmax_weights(confidence);
  ResponseMap out = ResponseMap::Zero(value[0].rows(), value[0].cols());
  for (std::size_t u = 0; u < value.size(); ++u) out += weights[u] * value[u];
  return out;
}

double bce_loss(const ResponseMap& prediction, const LabelMap& label) {
  if (prediction.rows() != label.rows() || prediction.cols() != label.cols())
    throw DimensionError("bce_loss: prediction and label shapes differ");
  if (prediction.size() == 0) return 0.0;
  const ResponseMap p = prediction.max(kProbabilityEpsilon).min(1.0 - kProbabilityEpsilon);
  const ResponseMap y = label.cast<double>();
  return -(y * p.log() + (1.0 - y) * (1.0 - p).log()).mean();
}

double iou_loss(const RegressionMap& prediction, const RegressionMap& target, const LabelMap& positives) {
  if (prediction.rows() != target.rows() || prediction.cols() != target.cols() ||
      positives.rows() != target.rows() || positives.cols() != target.cols())
    throw DimensionError("iou_loss: map shapes differ");
  double sum = 0.0;
  long count = 0;
  for (Eigen::Index y = 0; y < positives.rows(); ++y) {
    for (Eigen::Index x = 0; x < positives.cols(); ++x) {
      if (!positives(y, x)) continue;
      double p[4], g[4];
      for (int k = 0; k < 4; ++k) {
        p[k] = prediction.sides[k](y, x);
        g[k] = target.sides[k](y, x);
      }
      const double area_p = (p[0] + p[2]) * (p[1] + p[3]);
      const double area_g = (g[0] + g[2]) * (g[1] + g[3]);
      const double inter = (std::min(p[0], g[0]) + std::min(p[2], g[2])) * (std::min(p[1], g[1]) + std::min(p[3], g[3]));
      const double uni = area_p + area_g - inter;
      const double overlap = uni > 0.0 ? inter / uni : 0.0;
      sum += -std::log(std::max(overlap, kProbabilityEpsilon));
      ++count;
    }
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double total_loss(double l_reg, double l_cls, double l_mem, TrainingStage stage, double lambda1, double lambda2) {
  if (stage == TrainingStage::Naive) return l_reg + lambda1 * l_cls;
  if (std::abs(lambda1 + lambda2 - kMemoryLambdaSum) > 1e-9)
    throw ConfigError("total_loss: memory stage requires lambda1 + lambda2 = 0.9");
  return l_reg + lambda1 * l_cls + lambda2 * l_mem;
}

std::pair<double, double> lambda_schedule(long epoch, long memory_epochs, const LambdaSchedule& schedule) {
  if (memory_epochs < 1) throw std::invalid_argument("lambda_schedule: memory stage has no epochs");
  if (epoch < 0 || epoch >= memory_epochs) throw std::out_of_range("lambda_schedule: epoch outside memory stage");
  const double progress = memory_epochs == 1 ? 0.0 : static_cast<double>(epoch) / static_cast<double>(memory_epochs - 1);
  const double lambda1 = (1.0 - progress) * schedule.start + progress * schedule.end;
  return {lambda1, schedule.sum - lambda1};
}

ResponseMap fuse_response(const ResponseMap& classification, const ResponseMap& memory, double w) {
  if (classification.rows() != memory.rows() || classification.cols() != memory.cols())
    throw DimensionError("fuse_response: map shapes differ");
  if (!(w >= 0.0 && w <= 1.0)) throw std::invalid_argument("fuse_response: weight outside [0, 1]");
  if (w == 0.0) return classification;
  if (w == 1.0) return memory;
  return (1.0 - w) * classification + w * memory;
}

namespace {

double grid_position(int index, int side, int stride, int search_side) {
  return (search_side - 1) / 2.0 - stride * (side - 1) / 2.0 + stride * index;
}

}  // namespace

LabelMap make_label_map(const BoxD& target, int side, int stride, int search_side) {
  LabelMap label = LabelMap::Constant(side, side, false);
  const auto c = target.center();
  const double hw = target.width() / 4.0, hh = target.height() / 4.0;
  for (int i = 0; i < side; ++i) {
    const double y = grid_position(i, side, stride, search_side);
    for (int j = 0; j < side; ++j) {
      const double x = grid_position(j, side, stride, search_side);
      label(i, j) = std::abs(x - c.x()) <= hw && std::abs(y - c.y()) <= hh;
    }
  }
  const double first = grid_position(0, side, stride, search_side);
  const double last = grid_position(side - 1, side, stride, search_side);
  if (!label.any() && c.x() >= first && c.x() <= last && c.y() >= first && c.y() <= last) {
    const int j = static_cast<int>(std::lround((c.x() - first) / stride));
    const int i = static_cast<int>(std::lround((c.y() - first) / stride));
    label(i, j) = true;
  }
  return label;
}

RegressionMap make_regression_target(const BoxD& target, int side, int stride, int search_side) {
  RegressionMap out;
  for (auto& s : out.sides) s = Plane<double>::Zero(side, side);
  for (int i = 0; i < side; ++i) {
    const double y = grid_position(i, side, stride, search_side);
    for (int j = 0; j < side; ++j) {
      const double x = grid_position(j, side, stride, search_side);
      out.sides[0](i, j) = std::max(0.0, x - target.x0);
      out.sides[1](i, j) = std::max(0.0, y - target.y0);
      out.sides[2](i, j) = std::max(0.0, target.x1 - x);
      out.sides[3](i, j) = std::max(0.0, target.y1 - y);
    }
  }
  return out;
}

}  // namespace usot
