#include <algorithm>
#include <cmath>

#include "latentlens/curation/filters.hpp"
#include "latentlens/error.hpp"

namespace latentlens::curation {

bool BBox::valid() const noexcept {
  return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) && std::isfinite(y1) && x1 > x0 && y1 > y0;
}

double iou(const BBox& a, const BBox& b) {
  if (!a.valid() || !b.valid()) {
    throw InvalidArgument("bounding box needs x1 > x0 and y1 > y0");
  }
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0.0 || h <= 0.0) {
    return 0.0;
  }
  const double inter = w * h;
  return inter / (a.area() + b.area() - inter);
}

std::vector<TrackSegment> bbox_track_filter(const std::vector<TrackedFrame>& frames, double iou_threshold) {
  std::vector<TrackSegment> segments;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& frame = frames[i];
    if (!frame.box.valid()) {
      throw InvalidArgument("invalid bounding box at frame " + std::to_string(frame.frame_index));
    }
    bool split = segments.empty();
    if (!split) {
      const auto& prev = frames[i - 1];
      if (frame.frame_index <= prev.frame_index) {
        throw InvalidArgument("frames must be sorted by strictly increasing index");
      }
      split = frame.frame_index != prev.frame_index + 1 || iou(prev.box, frame.box) < iou_threshold;
    }
    if (split) {
      segments.emplace_back();
    }
    segments.back().frames.push_back(frame);
  }
  return segments;
}

std::vector<std::string> head_pose_filter(const std::vector<ClipPose>& clips, double max_abs_yaw) {
  std::vector<std::string> kept;
  for (const auto& clip : clips) {
    if (!std::isfinite(clip.first_frame_yaw_deg)) {
      throw InvalidArgument("clip '" + clip.clip_id + "' has a non-finite yaw");
    }
    if (std::abs(clip.first_frame_yaw_deg) <= max_abs_yaw) {
      kept.push_back(clip.clip_id);
    }
  }
  return kept;
}

}  // namespace latentlens::curation
