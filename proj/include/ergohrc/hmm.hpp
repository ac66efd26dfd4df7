#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace ergohrc {

// One observation sequence: frames x feature dimension, joint angles in degrees.
using FeatureSequence = std::vector<std::vector<double>>;

inline constexpr std::size_t kDefaultHmmStates = 7;
inline constexpr double kVarianceFloor = 1e-4;
inline constexpr double kStochasticTol = 1e-9;

// Hidden Markov model with diagonal-covariance Gaussian emissions.
// All probability parameters live in linear space; the algorithms work in
// log space internally.
struct GaussianHmm {
    std::vector<double> initial;                   // N
    std::vector<std::vector<double>> transitions;  // N x N
    std::vector<std::vector<double>> means;        // N x D
    std::vector<std::vector<double>> variances;    // N x D diagonal entries

    std::size_t num_states() const { return initial.size(); }
    std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }

    // Throws ValidationError on shape mismatch, non-stochastic rows, negative
    // entries, or variances below the floor.
    void validate() const;
};

struct TrainConfig {
    std::size_t max_iters = 100;
    double tol = 1e-4;
};

struct TrainStats {
    std::size_t iterations = 0;
    bool converged = false;
    // Total log-likelihood over all training sequences, one entry per
    // iteration, evaluated on the model entering that iteration.
    std::vector<double> log_likelihoods;
};

double log_emission(const GaussianHmm& hmm, std::size_t state,
                    const std::vector<double>& obs);

// Total data log-likelihood via the forward recursion. Returns -inf when the
// sequence is impossible under the model.
double forward_log_likelihood(const GaussianHmm& hmm, const FeatureSequence& seq);

// Most likely state path; ties resolve to the lower state index.
std::vector<std::size_t> viterbi_path(const GaussianHmm& hmm,
                                      const FeatureSequence& seq);

// Left-to-right topology: 0.5 self-loop / 0.5 advance per state, final state
// absorbing, all initial mass on state 0. Means and variances come from
// slicing each sequence into num_states equal chunks.
GaussianHmm init_left_right(std::size_t num_states,
                            const std::vector<FeatureSequence>& sequences);

// Multi-sequence Baum-Welch. Structural zeros in the transition matrix stay
// zero; variances never drop below kVarianceFloor. Stops when the total
// log-likelihood improves by less than config.tol or after max_iters.
GaussianHmm baum_welch_train(GaussianHmm model,
                             const std::vector<FeatureSequence>& sequences,
                             const TrainConfig& config = {},
                             TrainStats* stats = nullptr);

void save_hmm(const GaussianHmm& hmm, std::ostream& out);
void save_hmm_file(const GaussianHmm& hmm, const std::string& path);
GaussianHmm load_hmm(std::istream& in);
GaussianHmm load_hmm_file(const std::string& path);

}  // namespace ergohrc
