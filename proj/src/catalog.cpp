#include "ergohrc/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "ergohrc/errors.hpp"
#include "text_util.hpp"

namespace ergohrc {

using detail::parse_double;
using detail::parse_int;
using detail::split;
using detail::trim;

PrimitiveCatalog::PrimitiveCatalog(std::vector<PrimitiveEntry> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty()) throw ValidationError("catalog has no entries");
    std::sort(entries_.begin(), entries_.end(),
              [](const PrimitiveEntry& a, const PrimitiveEntry& b) { return a.id < b.id; });

    std::size_t pose_arity = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (e.id != static_cast<int>(i))
            throw ValidationError("primitive ids must be dense integers 0..N-1");
        if (e.name.empty())
            throw ValidationError("primitive " + std::to_string(e.id) + " has no name");
        if (e.eaws_score < kEawsMin || e.eaws_score > kEawsMax)
            throw ValidationError("EAWS score of primitive " + std::to_string(e.id) +
                                  " outside [0.5, 26.5]");
        for (const auto& kf : e.keyframes) {
            if (pose_arity == 0) pose_arity = kf.size();
            if (kf.size() != pose_arity || kf.empty())
                throw ValidationError("keyframe arity mismatch in primitive " +
                                      std::to_string(e.id));
        }
    }
}

bool PrimitiveCatalog::contains(int id) const {
    return id >= 0 && id < static_cast<int>(entries_.size());
}

const PrimitiveEntry& PrimitiveCatalog::entry(int id) const {
    if (!contains(id))
        throw ValidationError("unknown primitive id " + std::to_string(id));
    return entries_[static_cast<std::size_t>(id)];
}

namespace {

using Pose = std::vector<double>;

// Channel order: LumbarSpine, LeftUpperArm, RightShoulder, RightUpperLeg,
// LeftForearm; three Euler axes each, degrees.
const Pose kNeutral = {2, 0, 0, 5, 0, 0, 5, 0, 0, 0, 0, 0, 10, 0, 0};

Pose midway(const Pose& a, const Pose& b) {
    Pose out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
    return out;
}

PrimitiveEntry make_entry(int id, std::string name, double score, Pose peak,
                          bool with_midpoints = true) {
    PrimitiveEntry e;
    e.id = id;
    e.name = std::move(name);
    e.eaws_score = score;
    if (with_midpoints)
        e.keyframes = {kNeutral, midway(kNeutral, peak), peak, kNeutral};
    else
        e.keyframes = {kNeutral, peak, kNeutral};
    return e;
}

}  // namespace

PrimitiveCatalog default_catalog() {
    std::vector<PrimitiveEntry> entries;

    // Upright stance with a small sway; the low-risk reference motion.
    {
        PrimitiveEntry e;
        e.id = 0;
        e.name = "stand_neutral";
        e.eaws_score = 0.5;
        e.keyframes = {kNeutral,
                       {3, 1, 0, 7, 0, 0, 7, 0, 0, 1, 0, 0, 12, 0, 0}};
        entries.push_back(std::move(e));
    }
    entries.push_back(make_entry(
        1, "arms_front_low", 2.5,
        {4, 0, 0, 30, 5, 0, 30, -5, 0, 0, 0, 0, 20, 0, 0}, false));
    entries.push_back(make_entry(
        2, "torso_rotate_small", 4.0,
        {5, 0, 30, 8, 0, 0, 10, 0, 5, 0, 0, 0, 10, 0, 0}, false));
    entries.push_back(make_entry(
        3, "work_arms_bent_90", 6.0,
        {5, 0, 0, 40, 0, 0, 40, 0, 0, 0, 0, 0, 90, 0, 0}));
    entries.push_back(make_entry(
        4, "torso_rotation_full", 8.5,
        {8, 10, 50, 15, 0, 0, 20, 0, 10, 2, 0, 3, 12, 0, 0}));
    entries.push_back(make_entry(
        5, "reach_forward_stretch", 10.5,
        {22, 0, 0, 65, 0, 0, 65, 0, 0, 3, 0, 0, 30, 0, 0}));
    entries.push_back(make_entry(
        6, "torso_bend_slight", 12.5,
        {35, 0, 0, 20, 0, 0, 20, 0, 0, 12, 0, 0, 15, 0, 0}, false));
    entries.push_back(make_entry(
        7, "arms_above_shoulder", 14.0,
        {3, 0, 0, 100, 10, 0, 100, -10, 0, 0, 0, 0, 45, 0, 0}));
    entries.push_back(make_entry(
        8, "bend_rotate_stretch", 16.0,
        {45, 12, 25, 70, 0, 0, 72, 0, 0, 8, 0, 0, 25, 0, 0}));
    entries.push_back(make_entry(
        9, "elbows_up_lateral_bend", 17.5,
        {12, 32, 5, 115, 20, 0, 112, -18, 0, 4, 0, 0, 95, 0, 0}));
    entries.push_back(make_entry(
        10, "deep_bend_rotate", 19.5,
        {52, 8, 42, 25, 0, 0, 25, 0, 0, 16, 0, 10, 18, 0, 0}));
    entries.push_back(make_entry(
        11, "arms_overhead_stretch", 21.5,
        {6, 0, 0, 155, 5, 0, 152, -5, 0, 0, 0, 0, 15, 0, 0}));
    entries.push_back(make_entry(
        12, "deep_forward_bend", 24.0,
        {72, 0, 5, 45, 0, 0, 45, 0, 0, 32, 0, 0, 20, 0, 0}));
    entries.push_back(make_entry(
        13, "bend_rotate_arms_up", 26.5,
        {62, 25, 38, 125, 10, 0, 122, -10, 0, 22, 0, 12, 60, 0, 0}));

    return PrimitiveCatalog(std::move(entries));
}

PrimitiveCatalog load_catalog(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_version = false;
    bool have_arity = false;
    std::size_t arity = 0;
    std::vector<PrimitiveEntry> entries;

    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;

        if (!have_version) {
            if (view != "version 1")
                throw ParseError("expected 'version 1'", line_no);
            have_version = true;
            continue;
        }
        if (!have_arity) {
            const auto tokens = split(view, ' ');
            if (tokens.size() != 2 || tokens[0] != "arity")
                throw ParseError("expected 'arity <N>'", line_no);
            const auto n = parse_int(tokens[1]);
            if (!n || *n <= 0) throw ParseError("bad arity value", line_no);
            arity = static_cast<std::size_t>(*n);
            have_arity = true;
            continue;
        }

        const auto fields = split(view, '|');
        if (fields.size() < 5)
            throw ParseError("entry needs id|name|score|kf|kf...", line_no);

        PrimitiveEntry e;
        const auto id = parse_int(fields[0]);
        if (!id) throw ParseError("bad primitive id", line_no);
        e.id = static_cast<int>(*id);
        e.name = std::string(trim(fields[1]));
        const auto score = parse_double(fields[2]);
        if (!score) throw ParseError("bad EAWS score", line_no);
        e.eaws_score = *score;

        for (std::size_t f = 3; f < fields.size(); ++f) {
            std::vector<double> pose;
            for (const auto tok : split(fields[f], ',')) {
                const auto v = parse_double(tok);
                if (!v) throw ParseError("bad keyframe angle '" + std::string(tok) + "'",
                                         line_no);
                pose.push_back(*v);
            }
            if (pose.size() != arity)
                throw ParseError("keyframe has " + std::to_string(pose.size()) +
                                     " angles, expected " + std::to_string(arity),
                                 line_no);
            e.keyframes.push_back(std::move(pose));
        }
        entries.push_back(std::move(e));
    }

    if (!have_version) throw ParseError("missing 'version 1' line");
    return PrimitiveCatalog(std::move(entries));
}

PrimitiveCatalog load_catalog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open catalog file '" + path + "'");
    return load_catalog(in);
}

void save_catalog(const PrimitiveCatalog& catalog, std::ostream& out) {
    out << "# motion-primitive catalog; synthetic scores and keyframes\n";
    out << "version 1\n";
    const std::size_t arity =
        catalog.entries().front().keyframes.empty()
            ? 0
            : catalog.entries().front().keyframes.front().size();
    out << "arity " << arity << "\n";
    for (const auto& e : catalog.entries()) {
        out << e.id << '|' << e.name << '|' << detail::format_exact(e.eaws_score);
        for (const auto& kf : e.keyframes) {
            out << '|';
            for (std::size_t i = 0; i < kf.size(); ++i) {
                if (i) out << ',';
                out << detail::format_exact(kf[i]);
            }
        }
        out << '\n';
    }
}

void save_catalog_file(const PrimitiveCatalog& catalog, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write catalog file '" + path + "'");
    save_catalog(catalog, out);
}

}  // namespace ergohrc
