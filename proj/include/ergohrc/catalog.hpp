#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ergohrc {

inline constexpr double kEawsMin = 0.5;
inline constexpr double kEawsMax = 26.5;
inline constexpr std::size_t kDefaultPrimitiveCount = 14;

// One standing motion primitive: a catalog id, its EAWS risk score, and the
// keyframe postures the synthesis harness interpolates through.
struct PrimitiveEntry {
    int id = 0;
    std::string name;
    double eaws_score = kEawsMin;  // points in [0.5, 26.5]
    std::vector<std::vector<double>> keyframes;  // degrees, one pose per keyframe
};

// Motion-primitive ids with EAWS scores and generator keyframes. Ids are
// dense integers 0..N-1; entries are kept sorted by id.
class PrimitiveCatalog {
public:
    explicit PrimitiveCatalog(std::vector<PrimitiveEntry> entries);

    const std::vector<PrimitiveEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool contains(int id) const;
    const PrimitiveEntry& entry(int id) const;  // throws ValidationError

private:
    std::vector<PrimitiveEntry> entries_;
};

// The 14 shipped standing primitives. Scores and keyframes are synthetic,
// designed to span the 0.5-26.5 EAWS range with separable postures.
PrimitiveCatalog default_catalog();

// Catalog file: "version 1", "arity N", then one entry per line
// "id|name|eaws_score|kf1|kf2|..." with comma-separated keyframe angles.
// '#' starts a comment.
PrimitiveCatalog load_catalog(std::istream& in);
PrimitiveCatalog load_catalog_file(const std::string& path);
void save_catalog(const PrimitiveCatalog& catalog, std::ostream& out);
void save_catalog_file(const PrimitiveCatalog& catalog, const std::string& path);

}  // namespace ergohrc
