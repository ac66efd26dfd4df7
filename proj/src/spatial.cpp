#include "ergohrc/spatial.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "ergohrc/errors.hpp"
#include "text_util.hpp"

namespace ergohrc {

void FrameCalibration::validate() const {
    if (!is_rotation(rotation))
        throw ValidationError("calibration rotation is not orthonormal with det +1");
    for (const double v : {translation.x, translation.y, translation.z})
        if (!std::isfinite(v))
            throw ValidationError("calibration translation must be finite");
}

Vec3 to_robot_frame(const Vec3& p, const FrameCalibration& cal) {
    cal.validate();
    return cal.rotation * p + cal.translation;
}

void HandoverGeometry::validate() const {
    if (!(workspace_radius > 0.0))
        throw ValidationError("workspace radius must be positive");
    if (distance(default_handover, workspace_center) > workspace_radius)
        throw ValidationError("default handover lies outside the workspace sphere");
}

HandoverGeometry default_handover_geometry() {
    HandoverGeometry g;
    g.waiting_point = {10.0, 0.0, 10.0};
    g.default_handover = {40.0, 0.0, 20.0};
    g.workspace_center = {0.0, 0.0, 0.0};
    g.workspace_radius = 50.0;
    g.approach_offset = {0.0, 0.0, 5.0};
    return g;
}

std::vector<SkeletonFrame> derive_velocities(std::vector<SkeletonFrame> stream) {
    const std::size_t n = stream.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (stream[i + 1].timestamp <= stream[i].timestamp)
            throw ValidationError("skeleton timestamps must be strictly increasing");

    for (std::size_t i = 0; i < n; ++i) {
        if (stream[i].wrist_velocity) continue;
        if (n == 1) {
            stream[i].wrist_velocity = Vec3{};
            continue;
        }
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 == n ? i : i + 1;
        const double dt = stream[hi].timestamp - stream[lo].timestamp;
        stream[i].wrist_velocity =
            (stream[hi].wrist_position - stream[lo].wrist_position) * (1.0 / dt);
    }
    return stream;
}

std::vector<StillnessInterval> detect_stillness(
    const std::vector<SkeletonFrame>& stream, const StillnessConfig& config) {
    if (!(config.speed_threshold > 0.0) || config.hold_frames == 0)
        throw ValidationError("stillness thresholds must be positive");

    std::vector<StillnessInterval> intervals;
    std::size_t run = 0;
    bool open = false;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (!stream[i].wrist_velocity)
            throw ValidationError("skeleton frame lacks a velocity");
        const bool still = stream[i].wrist_velocity->norm() < config.speed_threshold;
        if (!still) {
            if (open) {
                intervals.back().end_frame = i - 1;
                open = false;
            }
            run = 0;
            continue;
        }
        ++run;
        if (!open && run == config.hold_frames) {
            intervals.push_back({i, i});
            open = true;
        }
    }
    if (open) intervals.back().end_frame = stream.size() - 1;
    return intervals;
}

std::pair<Vec3, bool> adapted_handover(const Vec3& wrist,
                                       const HandoverGeometry& geometry,
                                       bool adaptation_enabled) {
    geometry.validate();
    if (!adaptation_enabled) return {geometry.default_handover, false};

    const Vec3 candidate = wrist + geometry.approach_offset;
    // Both the wrist and the offset target must be reachable, otherwise the
    // output could leave the sphere the fallback promises to stay inside.
    const bool reachable =
        distance(wrist, geometry.workspace_center) <= geometry.workspace_radius &&
        distance(candidate, geometry.workspace_center) <= geometry.workspace_radius;
    if (!reachable) return {geometry.default_handover, false};
    return {candidate, true};
}

namespace {

Vec3 parse_vec3(const std::vector<std::string_view>& fields, std::size_t offset,
                std::size_t line_no) {
    Vec3 v;
    double* out[3] = {&v.x, &v.y, &v.z};
    for (std::size_t k = 0; k < 3; ++k) {
        const auto value = detail::parse_double(fields[offset + k]);
        if (!value) throw ParseError("bad coordinate value", line_no);
        *out[k] = *value;
    }
    return v;
}

}  // namespace

std::vector<SkeletonFrame> load_skeleton_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError("empty skeleton CSV");
    ++line_no;

    const auto header = detail::trim(line);
    bool with_velocity = false;
    if (header == "timestamp,wx,wy,wz,vx,vy,vz")
        with_velocity = true;
    else if (header != "timestamp,wx,wy,wz")
        throw ParseError("unexpected skeleton CSV header", line_no);

    std::vector<SkeletonFrame> stream;
    const std::size_t expect = with_velocity ? 7 : 4;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        const auto fields = detail::split(detail::trim(line), ',');
        if (fields.size() != expect)
            throw ParseError("expected " + std::to_string(expect) + " fields",
                             line_no);
        SkeletonFrame frame;
        const auto ts = detail::parse_double(fields[0]);
        if (!ts) throw ParseError("bad timestamp", line_no);
        frame.timestamp = *ts;
        frame.wrist_position = parse_vec3(fields, 1, line_no);
        if (with_velocity) frame.wrist_velocity = parse_vec3(fields, 4, line_no);
        if (!stream.empty() && frame.timestamp <= stream.back().timestamp)
            throw ParseError("timestamps must be strictly increasing", line_no);
        stream.push_back(frame);
    }
    if (stream.empty()) throw ParseError("skeleton CSV has no frames", line_no);
    return stream;
}

std::vector<SkeletonFrame> load_skeleton_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open skeleton file '" + path + "'");
    return load_skeleton_csv(in);
}

void save_skeleton_csv(const std::vector<SkeletonFrame>& stream, std::ostream& out) {
    const bool with_velocity =
        !stream.empty() && stream.front().wrist_velocity.has_value();
    out << (with_velocity ? "timestamp,wx,wy,wz,vx,vy,vz" : "timestamp,wx,wy,wz")
        << '\n';
    for (const auto& f : stream) {
        out << detail::format_exact(f.timestamp) << ','
            << detail::format_exact(f.wrist_position.x) << ','
            << detail::format_exact(f.wrist_position.y) << ','
            << detail::format_exact(f.wrist_position.z);
        if (with_velocity) {
            if (!f.wrist_velocity)
                throw ValidationError("mixed velocity presence in skeleton stream");
            out << ',' << detail::format_exact(f.wrist_velocity->x) << ','
                << detail::format_exact(f.wrist_velocity->y) << ','
                << detail::format_exact(f.wrist_velocity->z);
        }
        out << '\n';
    }
}

FrameCalibration load_calibration(std::istream& in) {
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto view = detail::trim(line);
        if (view.empty() || view.front() == '#') continue;
        for (const auto tok : detail::split(view, ' ')) {
            if (tok.empty()) continue;
            const auto v = detail::parse_double(tok);
            if (!v) throw ParseError("bad calibration number", line_no);
            values.push_back(*v);
        }
    }
    if (values.size() != 12)
        throw ParseError("calibration needs 12 numbers, got " +
                         std::to_string(values.size()));

    FrameCalibration cal;
    cal.rotation = Mat3::from_rows({values[0], values[1], values[2]},
                                   {values[3], values[4], values[5]},
                                   {values[6], values[7], values[8]});
    cal.translation = {values[9], values[10], values[11]};
    cal.validate();
    return cal;
}

FrameCalibration load_calibration_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open calibration file '" + path + "'");
    return load_calibration(in);
}

void save_calibration(const FrameCalibration& cal, std::ostream& out) {
    out << "# row-major rotation (9) then translation (3), centimeters\n";
    for (int r = 0; r < 3; ++r) {
        const Vec3 row = cal.rotation.row(r);
        out << detail::format_exact(row.x) << ' ' << detail::format_exact(row.y)
            << ' ' << detail::format_exact(row.z) << '\n';
    }
    out << detail::format_exact(cal.translation.x) << ' '
        << detail::format_exact(cal.translation.y) << ' '
        << detail::format_exact(cal.translation.z) << '\n';
}

}  // namespace ergohrc
