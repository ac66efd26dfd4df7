#include "ergohrc/mocap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "ergohrc/errors.hpp"
#include "text_util.hpp"

namespace ergohrc {

using detail::parse_double;
using detail::split;
using detail::trim;

std::vector<SensorChannel> reduced_sensor_set() {
    return {{"LumbarSpine"},
            {"LeftUpperArm"},
            {"RightShoulder"},
            {"RightUpperLeg"},
            {"LeftForearm"}};
}

void MotionClip::validate() const {
    if (frame_rate <= 0.0 || !std::isfinite(frame_rate))
        throw ValidationError("frame_rate must be positive");
    if (channels.empty()) throw ValidationError("clip has no sensor channels");

    std::set<std::string> seen;
    for (const auto& ch : channels)
        if (!seen.insert(ch.id).second)
            throw ValidationError("duplicate sensor channel '" + ch.id + "'");

    const std::size_t arity = angle_arity();
    double prev_time = -1.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const auto& f = frames[i];
        if (f.angles.size() != arity)
            throw ValidationError("frame " + std::to_string(i) + " has " +
                                  std::to_string(f.angles.size()) +
                                  " angles, expected " + std::to_string(arity));
        if (!std::isfinite(f.timestamp) || f.timestamp < 0.0)
            throw ValidationError("frame " + std::to_string(i) +
                                  " has a negative or non-finite timestamp");
        if (i > 0 && f.timestamp <= prev_time)
            throw ValidationError("timestamps not strictly increasing at frame " +
                                  std::to_string(i));
        prev_time = f.timestamp;
        for (double a : f.angles) {
            if (std::isnan(a)) throw ValidationError("NaN angle in frame " +
                                                     std::to_string(i));
            if (!std::isfinite(a) || a < -kAngleLimitDeg || a > kAngleLimitDeg)
                throw ValidationError("angle out of [-360, 360] in frame " +
                                      std::to_string(i));
        }
    }
}

namespace {

// Header tokens come as <name>_x,<name>_y,<name>_z per channel.
std::vector<SensorChannel> parse_header(std::string_view line, std::size_t line_no) {
    const auto tokens = split(line, ',');
    if (tokens.empty() || trim(tokens[0]) != "time")
        throw ParseError("clip header must start with 'time'", line_no);
    if (tokens.size() < 4 || (tokens.size() - 1) % 3 != 0)
        throw ParseError("clip header needs three axis columns per channel", line_no);

    static constexpr const char* axes[3] = {"_x", "_y", "_z"};
    std::vector<SensorChannel> channels;
    for (std::size_t c = 1; c < tokens.size(); c += 3) {
        std::string name;
        for (int a = 0; a < 3; ++a) {
            const std::string tok(trim(tokens[c + a]));
            const std::string suffix = axes[a];
            if (tok.size() <= suffix.size() ||
                tok.compare(tok.size() - suffix.size(), suffix.size(), suffix) != 0)
                throw ParseError("expected column '<channel>" + suffix + "', got '" +
                                     tok + "'",
                                 line_no);
            const std::string base = tok.substr(0, tok.size() - suffix.size());
            if (a == 0)
                name = base;
            else if (base != name)
                throw ParseError("axis columns of one channel must share a name ('" +
                                     name + "' vs '" + base + "')",
                                 line_no);
        }
        channels.push_back({name});
    }
    return channels;
}

}  // namespace

MotionClip ingest_clip(std::istream& in) {
    MotionClip clip;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;

        if (view.front() == '#') {
            if (have_header) continue;  // comments after the header are ignored
            view.remove_prefix(1);
            view = trim(view);
            if (view.rfind("label=", 0) == 0) {
                clip.label = std::string(view.substr(6));
            } else if (view.rfind("frame_rate=", 0) == 0) {
                const auto rate = parse_double(view.substr(11));
                if (!rate) throw ParseError("bad frame_rate value", line_no);
                clip.frame_rate = *rate;
            }
            continue;
        }

        if (!have_header) {
            clip.channels = parse_header(view, line_no);
            have_header = true;
            continue;
        }

        const auto tokens = split(view, ',');
        if (tokens.size() != 1 + clip.angle_arity())
            throw ParseError("row has " + std::to_string(tokens.size()) +
                                 " values, expected " +
                                 std::to_string(1 + clip.angle_arity()),
                             line_no);

        JointAngleFrame frame;
        const auto t = parse_double(tokens[0]);
        if (!t) throw ParseError("bad timestamp '" + std::string(tokens[0]) + "'",
                                 line_no);
        frame.timestamp = *t;
        frame.angles.reserve(clip.angle_arity());
        for (std::size_t i = 1; i < tokens.size(); ++i) {
            const auto v = parse_double(tokens[i]);
            if (!v) throw ParseError("bad angle '" + std::string(tokens[i]) + "'",
                                     line_no);
            frame.angles.push_back(*v);
        }
        clip.frames.push_back(std::move(frame));
    }

    if (!have_header) throw ParseError("missing clip header");
    if (clip.frames.empty()) throw ParseError("clip has no data rows");
    clip.validate();
    return clip;
}

MotionClip ingest_clip_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open clip file '" + path + "'");
    return ingest_clip(in);
}

void emit_clip(const MotionClip& clip, std::ostream& out) {
    clip.validate();
    if (clip.label) out << "# label=" << *clip.label << "\n";
    out << "# frame_rate=" << detail::format_exact(clip.frame_rate) << "\n";
    out << "time";
    for (const auto& ch : clip.channels)
        out << ',' << ch.id << "_x," << ch.id << "_y," << ch.id << "_z";
    out << '\n';
    for (const auto& f : clip.frames) {
        out << detail::format_exact(f.timestamp);
        for (double a : f.angles) out << ',' << detail::format_exact(a);
        out << '\n';
    }
}

void emit_clip_file(const MotionClip& clip, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write clip file '" + path + "'");
    emit_clip(clip, out);
}

MotionClip select_channels(const MotionClip& clip,
                           const std::vector<SensorChannel>& wanted) {
    std::vector<std::size_t> indices;
    indices.reserve(wanted.size());
    for (const auto& ch : wanted) {
        const auto it = std::find(clip.channels.begin(), clip.channels.end(), ch);
        if (it == clip.channels.end())
            throw ValidationError("channel '" + ch.id + "' not present in clip");
        indices.push_back(static_cast<std::size_t>(it - clip.channels.begin()));
    }

    MotionClip out;
    out.channels = wanted;
    out.frame_rate = clip.frame_rate;
    out.label = clip.label;
    out.frames.reserve(clip.frames.size());
    for (const auto& f : clip.frames) {
        JointAngleFrame nf;
        nf.timestamp = f.timestamp;
        nf.angles.reserve(indices.size() * 3);
        for (std::size_t idx : indices)
            for (int a = 0; a < 3; ++a) nf.angles.push_back(f.angles[idx * 3 + a]);
        out.frames.push_back(std::move(nf));
    }
    out.validate();
    return out;
}

}  // namespace ergohrc
