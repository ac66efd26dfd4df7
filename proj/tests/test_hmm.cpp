#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ergohrc/errors.hpp"
#include "ergohrc/hmm.hpp"

using namespace ergohrc;

namespace {

// Independent oracle: enumerate every state path in linear space.
double brute_force_log_likelihood(const GaussianHmm& hmm, const FeatureSequence& seq) {
    const std::size_t n = hmm.num_states();
    const std::size_t frames = seq.size();
    std::vector<std::size_t> path(frames, 0);
    double total = 0.0;
    while (true) {
        double p = hmm.initial[path[0]] * std::exp(log_emission(hmm, path[0], seq[0]));
        for (std::size_t t = 1; t < frames; ++t)
            p *= hmm.transitions[path[t - 1]][path[t]] *
                 std::exp(log_emission(hmm, path[t], seq[t]));
        total += p;

        std::size_t k = frames;
        while (k > 0) {
            --k;
            if (++path[k] < n) break;
            path[k] = 0;
            if (k == 0) return std::log(total);
        }
    }
}

GaussianHmm random_left_right(std::mt19937_64& rng, std::size_t states,
                              std::size_t dim) {
    std::uniform_real_distribution<double> self(0.2, 0.8);
    std::uniform_real_distribution<double> mean(-5.0, 5.0);
    std::uniform_real_distribution<double> var(0.5, 4.0);

    GaussianHmm hmm;
    hmm.initial.assign(states, 0.0);
    hmm.initial[0] = 1.0;
    hmm.transitions.assign(states, std::vector<double>(states, 0.0));
    for (std::size_t i = 0; i + 1 < states; ++i) {
        const double p = self(rng);
        hmm.transitions[i][i] = p;
        hmm.transitions[i][i + 1] = 1.0 - p;
    }
    hmm.transitions[states - 1][states - 1] = 1.0;
    for (std::size_t i = 0; i < states; ++i) {
        hmm.means.emplace_back();
        hmm.variances.emplace_back();
        for (std::size_t d = 0; d < dim; ++d) {
            hmm.means.back().push_back(mean(rng));
            hmm.variances.back().push_back(var(rng));
        }
    }
    hmm.validate();
    return hmm;
}

FeatureSequence random_sequence(std::mt19937_64& rng, const GaussianHmm& hmm,
                                std::size_t frames) {
    std::normal_distribution<double> noise(0.0, 1.5);
    FeatureSequence seq;
    for (std::size_t t = 0; t < frames; ++t) {
        const auto& mu = hmm.means[std::min(t * hmm.num_states() / frames,
                                            hmm.num_states() - 1)];
        std::vector<double> frame;
        for (std::size_t d = 0; d < hmm.dim(); ++d)
            frame.push_back(mu[d] + noise(rng));
        seq.push_back(std::move(frame));
    }
    return seq;
}

GaussianHmm unit_model() {
    GaussianHmm hmm;
    hmm.initial = {1.0};
    hmm.transitions = {{1.0}};
    hmm.means = {{0.0}};
    hmm.variances = {{1.0}};
    return hmm;
}

}  // namespace

TEST_CASE("standard normal log density at the mean is -0.5*ln(2*pi)") {
    const auto hmm = unit_model();
    CHECK(forward_log_likelihood(hmm, {{0.0}}) ==
          doctest::Approx(-0.9189385332046727).epsilon(1e-14));
    // One step away adds the quadratic term.
    CHECK(forward_log_likelihood(hmm, {{2.0}}) ==
          doctest::Approx(-0.9189385332046727 - 2.0).epsilon(1e-13));
    // Two frames under an absorbing single state just add densities.
    CHECK(forward_log_likelihood(hmm, {{0.0}, {0.0}}) ==
          doctest::Approx(2.0 * -0.9189385332046727).epsilon(1e-13));
}

TEST_CASE("forward matches brute-force path enumeration") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<std::size_t> states_d(1, 3);
    std::uniform_int_distribution<std::size_t> dim_d(1, 4);
    std::uniform_int_distribution<std::size_t> frames_d(1, 8);
    for (int round = 0; round < 40; ++round) {
        const auto hmm = random_left_right(rng, states_d(rng), dim_d(rng));
        const auto seq = random_sequence(rng, hmm, frames_d(rng));
        const double fast = forward_log_likelihood(hmm, seq);
        const double slow = brute_force_log_likelihood(hmm, seq);
        CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
    }
}

TEST_CASE("viterbi picks the obvious path and breaks ties low") {
    SUBCASE("separated two-state model") {
        GaussianHmm hmm;
        hmm.initial = {1.0, 0.0};
        hmm.transitions = {{0.5, 0.5}, {0.0, 1.0}};
        hmm.means = {{0.0}, {10.0}};
        hmm.variances = {{1.0}, {1.0}};
        const auto path = viterbi_path(hmm, {{0.1}, {0.2}, {9.9}, {10.1}});
        CHECK(path == std::vector<std::size_t>{0, 0, 1, 1});
    }
    SUBCASE("identical states tie toward the lower index") {
        GaussianHmm hmm;
        hmm.initial = {0.5, 0.5};
        hmm.transitions = {{0.5, 0.5}, {0.5, 0.5}};
        hmm.means = {{0.0}, {0.0}};
        hmm.variances = {{1.0}, {1.0}};
        const auto path = viterbi_path(hmm, {{0.0}, {0.0}, {0.0}});
        CHECK(path == std::vector<std::size_t>{0, 0, 0});
    }
}

TEST_CASE("left-right init slices sequences into chunks") {
    // 8 frames over 3 states: boundaries floor(i*8/3) = 0, 2, 5 give chunk
    // sizes 2, 3, 3.
    FeatureSequence seq;
    for (int t = 0; t < 8; ++t) seq.push_back({static_cast<double>(t)});
    const auto hmm = init_left_right(3, {seq});

    CHECK(hmm.initial == std::vector<double>{1.0, 0.0, 0.0});
    CHECK(hmm.transitions[0] == std::vector<double>{0.5, 0.5, 0.0});
    CHECK(hmm.transitions[1] == std::vector<double>{0.0, 0.5, 0.5});
    CHECK(hmm.transitions[2] == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(hmm.means[0][0] == doctest::Approx(0.5).epsilon(1e-12));   // {0,1}
    CHECK(hmm.means[1][0] == doctest::Approx(3.0).epsilon(1e-12));   // {2,3,4}
    CHECK(hmm.means[2][0] == doctest::Approx(6.0).epsilon(1e-12));   // {5,6,7}
    for (const auto& row : hmm.variances)
        for (const double v : row) CHECK(v >= kVarianceFloor);
}

TEST_CASE("constant chunks hit the variance floor") {
    FeatureSequence seq(10, {3.0});
    const auto hmm = init_left_right(2, {seq});
    CHECK(hmm.variances[0][0] == kVarianceFloor);
    CHECK(hmm.variances[1][0] == kVarianceFloor);
}

TEST_CASE("baum-welch improves likelihood monotonically and keeps structure") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 5; ++round) {
        const auto truth = random_left_right(rng, 3, 2);
        std::vector<FeatureSequence> train;
        for (int s = 0; s < 4; ++s) train.push_back(random_sequence(rng, truth, 20));

        const auto init = init_left_right(3, train);
        TrainStats stats;
        const auto trained = baum_welch_train(init, train, {}, &stats);

        REQUIRE(stats.iterations >= 1);
        for (std::size_t i = 1; i < stats.log_likelihoods.size(); ++i)
            CHECK(stats.log_likelihoods[i] >= stats.log_likelihoods[i - 1] - 1e-8);

        trained.validate();
        // Structural zeros survive re-estimation.
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                if (init.transitions[i][j] == 0.0)
                    CHECK(trained.transitions[i][j] == 0.0);
    }
}

TEST_CASE("training converges before the iteration cap on easy data") {
    std::mt19937_64 rng(7);
    const auto truth = random_left_right(rng, 2, 1);
    std::vector<FeatureSequence> train;
    for (int s = 0; s < 3; ++s) train.push_back(random_sequence(rng, truth, 15));
    TrainStats stats;
    baum_welch_train(init_left_right(2, train), train, {}, &stats);
    CHECK(stats.converged);
    CHECK(stats.iterations < 100);
}

TEST_CASE("model serialization round-trips bitwise") {
    std::mt19937_64 rng(23);
    const auto hmm = random_left_right(rng, 3, 2);
    std::stringstream buffer;
    save_hmm(hmm, buffer);
    const auto back = load_hmm(buffer);
    CHECK(back.initial == hmm.initial);
    CHECK(back.transitions == hmm.transitions);
    CHECK(back.means == hmm.means);
    CHECK(back.variances == hmm.variances);
}

TEST_CASE("validation catches broken models") {
    auto hmm = unit_model();
    SUBCASE("row sum off") {
        hmm.transitions = {{0.9}};
        CHECK_THROWS_AS(hmm.validate(), ValidationError);
    }
    SUBCASE("variance below floor") {
        hmm.variances = {{1e-6}};
        CHECK_THROWS_AS(hmm.validate(), ValidationError);
    }
    SUBCASE("initial mass wrong") {
        hmm.initial = {0.5};
        CHECK_THROWS_AS(hmm.validate(), ValidationError);
    }
    SUBCASE("empty sequence rejected") {
        CHECK_THROWS_AS(forward_log_likelihood(hmm, {}), ValidationError);
    }
    SUBCASE("dimension mismatch rejected") {
        CHECK_THROWS_AS(forward_log_likelihood(hmm, {{1.0, 2.0}}), ValidationError);
    }
}

TEST_CASE("truncated model files fail cleanly") {
    std::stringstream in("ergohrc-hmm 1\nstates 2\ndim 1\ninitial\n1 0\n");
    CHECK_THROWS_AS(load_hmm(in), ParseError);
}
