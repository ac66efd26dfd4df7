#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ergohrc {

inline constexpr double kDefaultFrameRate = 90.0;  // Hz
inline constexpr double kAngleLimitDeg = 360.0;

// Placement label of one inertial sensor. Identified by name so the same type
// covers the reduced five-sensor set and the full-suit channel list.
struct SensorChannel {
    std::string id;

    friend bool operator==(const SensorChannel&, const SensorChannel&) = default;
};

// The five placements that suffice for primitive recognition:
// lumbar spine, left upper arm, right shoulder, right upper leg, left forearm.
std::vector<SensorChannel> reduced_sensor_set();

// One sample of Euler joint angles, three per sensor channel, degrees.
// Channel order is fixed by the clip header.
struct JointAngleFrame {
    double timestamp = 0.0;  // seconds
    std::vector<double> angles;
};

// A timestamped joint-angle sequence from a named sensor subset.
struct MotionClip {
    std::vector<SensorChannel> channels;
    std::vector<JointAngleFrame> frames;
    double frame_rate = kDefaultFrameRate;
    std::optional<std::string> label;  // primitive or task id for supervised use

    std::size_t angle_arity() const { return channels.size() * 3; }
    double duration_seconds() const {
        return static_cast<double>(frames.size()) / frame_rate;
    }

    // Throws ValidationError on arity mismatch, non-finite or out-of-range
    // angles, non-monotonic timestamps, duplicate channels, or frame_rate <= 0.
    void validate() const;
};

// Clip CSV: optional "# key=value" metadata lines (label, frame_rate), then a
// header "time,<channel>_x,<channel>_y,<channel>_z,...", then one row per
// frame. UTF-8, LF line endings, angles in degrees at 6 decimal places.
MotionClip ingest_clip(std::istream& in);
MotionClip ingest_clip_file(const std::string& path);
void emit_clip(const MotionClip& clip, std::ostream& out);
void emit_clip_file(const MotionClip& clip, const std::string& path);

// New clip containing only the wanted channels, frame order and timestamps
// unchanged. Throws ValidationError naming the first missing channel.
MotionClip select_channels(const MotionClip& clip,
                           const std::vector<SensorChannel>& wanted);

}  // namespace ergohrc
