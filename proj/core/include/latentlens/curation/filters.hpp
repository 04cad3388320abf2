#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace latentlens::curation {

/// Face bounding box in pixels; valid when x1 > x0 and y1 > y0.
struct BBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  bool valid() const noexcept;
  double area() const noexcept { return (x1 - x0) * (y1 - y0); }
};

/// Intersection over union; throws InvalidArgument on an invalid box.
double iou(const BBox& a, const BBox& b);

struct TrackedFrame {
  std::int64_t frame_index = 0;
  BBox box;
};

struct TrackSegment {
  std::vector<TrackedFrame> frames;
};

inline constexpr double kDefaultTrackIou = 0.2;

/// Cuts a detection sequence into maximal contiguous face tracks. A new
/// segment starts wherever consecutive frame indices are not adjacent or the
/// IoU of consecutive boxes is below `iou_threshold`. Input must be sorted by
/// strictly increasing frame index.
std::vector<TrackSegment> bbox_track_filter(const std::vector<TrackedFrame>& frames,
                                            double iou_threshold = kDefaultTrackIou);

struct ClipPose {
  std::string clip_id;
  double first_frame_yaw_deg = 0.0;
};

inline constexpr double kDefaultMaxAbsYaw = 15.0;

/// Ids of clips whose first-frame |yaw| <= max_abs_yaw, in input order.
std::vector<std::string> head_pose_filter(const std::vector<ClipPose>& clips,
                                          double max_abs_yaw = kDefaultMaxAbsYaw);

}  // namespace latentlens::curation
