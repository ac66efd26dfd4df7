#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "ergohrc/catalog.hpp"
#include "ergohrc/errors.hpp"

using namespace ergohrc;

TEST_CASE("default catalog has 14 primitives spanning the score scale") {
    const auto catalog = default_catalog();
    REQUIRE(catalog.size() == 14);

    std::set<double> scores;
    for (int id = 0; id < 14; ++id) {
        const auto& e = catalog.entry(id);
        CHECK(e.id == id);
        CHECK(!e.name.empty());
        CHECK(e.eaws_score >= kEawsMin);
        CHECK(e.eaws_score <= kEawsMax);
        CHECK(e.keyframes.size() >= 2);
        for (const auto& kf : e.keyframes) REQUIRE(kf.size() == 15);
        scores.insert(e.eaws_score);
    }
    CHECK(scores.count(0.5) == 1);
    CHECK(scores.count(26.5) == 1);
    // The four mode scores the task summaries revolve around.
    CHECK(scores.count(8.5) == 1);
    CHECK(scores.count(12.5) == 1);
    CHECK(scores.count(16.0) == 1);
    CHECK(scores.count(17.5) == 1);
}

TEST_CASE("catalog save/load round trip is lossless") {
    const auto catalog = default_catalog();
    std::stringstream buffer;
    save_catalog(catalog, buffer);
    const auto back = load_catalog(buffer);

    REQUIRE(back.size() == catalog.size());
    for (int id = 0; id < static_cast<int>(catalog.size()); ++id) {
        const auto& a = catalog.entry(id);
        const auto& b = back.entry(id);
        CHECK(a.name == b.name);
        CHECK(a.eaws_score == b.eaws_score);
        CHECK(a.keyframes == b.keyframes);
    }
}

TEST_CASE("shipped catalog file matches the builtin catalog") {
    const auto catalog = default_catalog();
    const auto shipped = load_catalog_file(std::string(TEST_DATA_DIR) + "/catalog.txt");
    REQUIRE(shipped.size() == catalog.size());
    for (int id = 0; id < static_cast<int>(catalog.size()); ++id) {
        CHECK(shipped.entry(id).name == catalog.entry(id).name);
        CHECK(shipped.entry(id).eaws_score == catalog.entry(id).eaws_score);
        CHECK(shipped.entry(id).keyframes == catalog.entry(id).keyframes);
    }
}

TEST_CASE("catalog validation rejects bad inputs") {
    auto make = [](int id, double score) {
        PrimitiveEntry e;
        e.id = id;
        e.name = "p" + std::to_string(id);
        e.eaws_score = score;
        e.keyframes = {{0.0, 0.0}, {1.0, 1.0}};
        return e;
    };
    SUBCASE("ids must be dense from zero") {
        CHECK_THROWS_AS(PrimitiveCatalog({make(0, 1.0), make(2, 2.0)}),
                        ValidationError);
    }
    SUBCASE("score range enforced") {
        CHECK_THROWS_AS(PrimitiveCatalog({make(0, 27.0)}), ValidationError);
        CHECK_THROWS_AS(PrimitiveCatalog({make(0, 0.0)}), ValidationError);
    }
    SUBCASE("keyframe arity must be uniform") {
        auto bad = make(1, 2.0);
        bad.keyframes = {{0.0}, {1.0}};
        CHECK_THROWS_AS(PrimitiveCatalog({make(0, 1.0), bad}), ValidationError);
    }
    SUBCASE("empty catalog rejected") {
        CHECK_THROWS_AS(PrimitiveCatalog({}), ValidationError);
    }
}

TEST_CASE("catalog parse errors carry line numbers") {
    std::stringstream in("version 2\n");
    CHECK_THROWS_AS(load_catalog(in), ParseError);

    std::stringstream in2("version 1\narity 2\n0|name|1.0|1,2|3\n");
    try {
        load_catalog(in2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}
