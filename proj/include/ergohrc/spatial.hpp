#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ergohrc/geometry.hpp"

namespace ergohrc {

// One tracked wrist sample in the camera frame. Velocity may be absent and
// derived later by differencing.
struct SkeletonFrame {
    double timestamp = 0.0;        // seconds
    Vec3 wrist_position;           // centimeters
    std::optional<Vec3> wrist_velocity;  // cm/s
};

// Rigid map from camera coordinates to robot-base coordinates.
struct FrameCalibration {
    Mat3 rotation = Mat3::identity();
    Vec3 translation;  // centimeters

    // Throws ValidationError unless rotation is orthonormal with det +1.
    void validate() const;
};

Vec3 to_robot_frame(const Vec3& p, const FrameCalibration& cal);

// Handover geometry in the robot frame, centimeters.
struct HandoverGeometry {
    Vec3 waiting_point;           // WP: where the arm parks between handovers
    Vec3 default_handover;        // PHP: the fixed fallback handover position
    Vec3 workspace_center;
    double workspace_radius = 50.0;
    Vec3 approach_offset;         // added to the wrist to clear the hand

    void validate() const;  // radius > 0; PHP inside the workspace sphere
};

HandoverGeometry default_handover_geometry();

struct StillnessConfig {
    double speed_threshold = 2.0;  // cm/s
    std::size_t hold_frames = 30;
};

// Closed interval of frame indices; start_frame is the frame that completed
// the hold run, end_frame the last frame before a violation (or stream end).
struct StillnessInterval {
    std::size_t start_frame = 0;
    std::size_t end_frame = 0;
};

// Fills missing velocities by central differences (one-sided at the ends).
std::vector<SkeletonFrame> derive_velocities(std::vector<SkeletonFrame> stream);

// Requires velocities on every frame; see derive_velocities.
std::vector<StillnessInterval> detect_stillness(
    const std::vector<SkeletonFrame>& stream, const StillnessConfig& config = {});

// Returns the adapted handover position and whether adaptation applied.
// Falls back to the default handover whenever adaptation is disabled or the
// wrist (or the offset target) leaves the workspace sphere.
std::pair<Vec3, bool> adapted_handover(const Vec3& wrist,
                                       const HandoverGeometry& geometry,
                                       bool adaptation_enabled);

// CSV: timestamp,wx,wy,wz with optional vx,vy,vz columns.
std::vector<SkeletonFrame> load_skeleton_csv(std::istream& in);
std::vector<SkeletonFrame> load_skeleton_csv_file(const std::string& path);
void save_skeleton_csv(const std::vector<SkeletonFrame>& stream, std::ostream& out);

// Calibration file: 12 numbers, row-major rotation then translation.
FrameCalibration load_calibration(std::istream& in);
FrameCalibration load_calibration_file(const std::string& path);
void save_calibration(const FrameCalibration& cal, std::ostream& out);

}  // namespace ergohrc
