#include "ergohrc/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "ergohrc/errors.hpp"
#include "text_util.hpp"

namespace ergohrc {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kHalfLogTwoPi = 0.9189385332046727;  // 0.5 * ln(2*pi)

double logsumexp(const std::vector<double>& xs) {
    double m = kNegInf;
    for (double x : xs) m = std::max(m, x);
    if (m == kNegInf) return kNegInf;
    double acc = 0.0;
    for (double x : xs) acc += std::exp(x - m);
    return m + std::log(acc);
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

void check_shape(const GaussianHmm& hmm) {
    const std::size_t n = hmm.num_states();
    if (n == 0) throw ValidationError("model has no states");
    const std::size_t d = hmm.dim();
    if (d == 0) throw ValidationError("model has zero feature dimension");
    if (hmm.transitions.size() != n || hmm.means.size() != n ||
        hmm.variances.size() != n)
        throw ValidationError("model parameter row counts disagree");
    for (std::size_t i = 0; i < n; ++i) {
        if (hmm.transitions[i].size() != n)
            throw ValidationError("transition matrix is not square");
        if (hmm.means[i].size() != d || hmm.variances[i].size() != d)
            throw ValidationError("mean/variance dimension mismatch");
    }
}

// Per-frame log emission densities for every state, computed once per pass.
std::vector<std::vector<double>> emission_table(const GaussianHmm& hmm,
                                                const FeatureSequence& seq) {
    const std::size_t n = hmm.num_states();
    std::vector<std::vector<double>> table(seq.size(), std::vector<double>(n));
    for (std::size_t t = 0; t < seq.size(); ++t)
        for (std::size_t i = 0; i < n; ++i)
            table[t][i] = log_emission(hmm, i, seq[t]);
    return table;
}

std::vector<std::vector<double>> forward_pass(
    const GaussianHmm& hmm, const std::vector<std::vector<double>>& emis) {
    const std::size_t n = hmm.num_states();
    const std::size_t frames = emis.size();
    std::vector<std::vector<double>> alpha(frames, std::vector<double>(n, kNegInf));
    for (std::size_t i = 0; i < n; ++i)
        alpha[0][i] = safe_log(hmm.initial[i]) + emis[0][i];
    std::vector<double> terms(n);
    for (std::size_t t = 1; t < frames; ++t) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i)
                terms[i] = alpha[t - 1][i] + safe_log(hmm.transitions[i][j]);
            alpha[t][j] = logsumexp(terms) + emis[t][j];
        }
    }
    return alpha;
}

std::vector<std::vector<double>> backward_pass(
    const GaussianHmm& hmm, const std::vector<std::vector<double>>& emis) {
    const std::size_t n = hmm.num_states();
    const std::size_t frames = emis.size();
    std::vector<std::vector<double>> beta(frames, std::vector<double>(n, 0.0));
    std::vector<double> terms(n);
    for (std::size_t t = frames - 1; t-- > 0;) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j)
                terms[j] = safe_log(hmm.transitions[i][j]) + emis[t + 1][j] +
                           beta[t + 1][j];
            beta[t][i] = logsumexp(terms);
        }
    }
    return beta;
}

void check_sequences(const GaussianHmm& hmm,
                     const std::vector<FeatureSequence>& sequences) {
    if (sequences.empty()) throw ValidationError("no training sequences");
    for (const auto& seq : sequences) {
        if (seq.empty()) throw ValidationError("empty training sequence");
        for (const auto& frame : seq)
            if (frame.size() != hmm.dim())
                throw ValidationError("sequence dimension does not match model");
    }
}

}  // namespace

void GaussianHmm::validate() const {
    check_shape(*this);
    const std::size_t n = num_states();
    double pi_sum = 0.0;
    for (double p : initial) {
        if (p < 0.0) throw ValidationError("negative initial probability");
        pi_sum += p;
    }
    if (std::abs(pi_sum - 1.0) > kStochasticTol)
        throw ValidationError("initial distribution does not sum to 1");
    for (std::size_t i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (double p : transitions[i]) {
            if (p < 0.0) throw ValidationError("negative transition probability");
            row_sum += p;
        }
        if (std::abs(row_sum - 1.0) > kStochasticTol)
            throw ValidationError("transition row " + std::to_string(i) +
                                  " does not sum to 1");
        for (double v : variances[i])
            if (v < kVarianceFloor - 1e-12)
                throw ValidationError("variance below floor in state " +
                                      std::to_string(i));
    }
}

double log_emission(const GaussianHmm& hmm, std::size_t state,
                    const std::vector<double>& obs) {
    const auto& mu = hmm.means[state];
    const auto& var = hmm.variances[state];
    double ll = 0.0;
    for (std::size_t d = 0; d < mu.size(); ++d) {
        const double diff = obs[d] - mu[d];
        ll += -kHalfLogTwoPi - 0.5 * std::log(var[d]) - 0.5 * diff * diff / var[d];
    }
    return ll;
}

double forward_log_likelihood(const GaussianHmm& hmm, const FeatureSequence& seq) {
    check_shape(hmm);
    if (seq.empty()) throw ValidationError("empty observation sequence");
    for (const auto& frame : seq)
        if (frame.size() != hmm.dim())
            throw ValidationError("observation dimension does not match model");
    const auto alpha = forward_pass(hmm, emission_table(hmm, seq));
    return logsumexp(alpha.back());
}

std::vector<std::size_t> viterbi_path(const GaussianHmm& hmm,
                                      const FeatureSequence& seq) {
    check_shape(hmm);
    if (seq.empty()) throw ValidationError("empty observation sequence");
    const std::size_t n = hmm.num_states();
    const std::size_t frames = seq.size();
    const auto emis = emission_table(hmm, seq);

    std::vector<std::vector<double>> delta(frames, std::vector<double>(n, kNegInf));
    std::vector<std::vector<std::size_t>> back(frames, std::vector<std::size_t>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        delta[0][i] = safe_log(hmm.initial[i]) + emis[0][i];

    for (std::size_t t = 1; t < frames; ++t) {
        for (std::size_t j = 0; j < n; ++j) {
            double best = kNegInf;
            std::size_t best_i = 0;
            // Strict > with ascending i keeps the lowest index on ties.
            for (std::size_t i = 0; i < n; ++i) {
                const double cand = delta[t - 1][i] + safe_log(hmm.transitions[i][j]);
                if (cand > best) {
                    best = cand;
                    best_i = i;
                }
            }
            delta[t][j] = best + emis[t][j];
            back[t][j] = best_i;
        }
    }

    std::size_t state = 0;
    double best = kNegInf;
    for (std::size_t i = 0; i < n; ++i) {
        if (delta[frames - 1][i] > best) {
            best = delta[frames - 1][i];
            state = i;
        }
    }
    std::vector<std::size_t> path(frames);
    path[frames - 1] = state;
    for (std::size_t t = frames - 1; t > 0; --t) {
        state = back[t][state];
        path[t - 1] = state;
    }
    return path;
}

GaussianHmm init_left_right(std::size_t num_states,
                            const std::vector<FeatureSequence>& sequences) {
    if (num_states == 0) throw ValidationError("need at least one state");
    if (sequences.empty()) throw ValidationError("no training sequences");
    const std::size_t dim = sequences.front().front().size();

    GaussianHmm hmm;
    hmm.initial.assign(num_states, 0.0);
    hmm.initial[0] = 1.0;
    hmm.transitions.assign(num_states, std::vector<double>(num_states, 0.0));
    for (std::size_t i = 0; i + 1 < num_states; ++i) {
        hmm.transitions[i][i] = 0.5;
        hmm.transitions[i][i + 1] = 0.5;
    }
    hmm.transitions[num_states - 1][num_states - 1] = 1.0;

    // Slice every sequence into num_states chunks with boundaries
    // floor(i*T/N) and pool the per-chunk statistics across sequences.
    std::vector<std::vector<double>> sum(num_states, std::vector<double>(dim, 0.0));
    std::vector<std::vector<double>> sq(num_states, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> count(num_states, 0);
    for (const auto& seq : sequences) {
        const std::size_t frames = seq.size();
        if (frames == 0) throw ValidationError("empty training sequence");
        for (const auto& frame : seq)
            if (frame.size() != dim)
                throw ValidationError("inconsistent feature dimension");
        for (std::size_t i = 0; i < num_states; ++i) {
            const std::size_t lo = i * frames / num_states;
            const std::size_t hi = (i + 1) * frames / num_states;
            for (std::size_t t = lo; t < hi; ++t) {
                ++count[i];
                for (std::size_t d = 0; d < dim; ++d) {
                    sum[i][d] += seq[t][d];
                    sq[i][d] += seq[t][d] * seq[t][d];
                }
            }
        }
    }

    hmm.means.assign(num_states, std::vector<double>(dim, 0.0));
    hmm.variances.assign(num_states, std::vector<double>(dim, kVarianceFloor));
    for (std::size_t i = 0; i < num_states; ++i) {
        if (count[i] == 0) continue;  // short sequences can starve a chunk
        const double n = static_cast<double>(count[i]);
        for (std::size_t d = 0; d < dim; ++d) {
            const double mean = sum[i][d] / n;
            hmm.means[i][d] = mean;
            hmm.variances[i][d] = std::max(kVarianceFloor, sq[i][d] / n - mean * mean);
        }
    }
    hmm.validate();
    return hmm;
}

GaussianHmm baum_welch_train(GaussianHmm model,
                             const std::vector<FeatureSequence>& sequences,
                             const TrainConfig& config, TrainStats* stats) {
    model.validate();
    check_sequences(model, sequences);
    const std::size_t n = model.num_states();
    const std::size_t dim = model.dim();

    TrainStats local;
    TrainStats& st = stats ? *stats : local;
    st = TrainStats{};

    double prev_ll = kNegInf;
    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        std::vector<double> pi_acc(n, 0.0);
        std::vector<std::vector<double>> xi_acc(n, std::vector<double>(n, 0.0));
        std::vector<double> gamma_trans_acc(n, 0.0);  // denominators for rows
        std::vector<double> gamma_acc(n, 0.0);
        std::vector<std::vector<double>> obs_acc(n, std::vector<double>(dim, 0.0));
        std::vector<std::vector<double>> obs_sq_acc(n, std::vector<double>(dim, 0.0));
        double total_ll = 0.0;

        for (const auto& seq : sequences) {
            const std::size_t frames = seq.size();
            const auto emis = emission_table(model, seq);
            const auto alpha = forward_pass(model, emis);
            const auto beta = backward_pass(model, emis);
            const double ll = logsumexp(alpha.back());
            if (!std::isfinite(ll))
                throw ValidationError("training sequence impossible under model");
            total_ll += ll;

            for (std::size_t t = 0; t < frames; ++t) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double g = std::exp(alpha[t][i] + beta[t][i] - ll);
                    if (t == 0) pi_acc[i] += g;
                    gamma_acc[i] += g;
                    if (t + 1 < frames) gamma_trans_acc[i] += g;
                    for (std::size_t d = 0; d < dim; ++d) {
                        obs_acc[i][d] += g * seq[t][d];
                        obs_sq_acc[i][d] += g * seq[t][d] * seq[t][d];
                    }
                }
            }
            for (std::size_t t = 0; t + 1 < frames; ++t) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double base = alpha[t][i];
                    if (base == kNegInf) continue;
                    for (std::size_t j = 0; j < n; ++j) {
                        if (model.transitions[i][j] == 0.0) continue;
                        xi_acc[i][j] += std::exp(base +
                                                 safe_log(model.transitions[i][j]) +
                                                 emis[t + 1][j] + beta[t + 1][j] - ll);
                    }
                }
            }
        }

        st.log_likelihoods.push_back(total_ll);
        st.iterations = iter + 1;
        if (iter > 0 && total_ll - prev_ll < config.tol) {
            st.converged = true;
            break;
        }
        prev_ll = total_ll;

        // M step. Rows or states with no occupancy keep their old parameters.
        double pi_sum = 0.0;
        for (double p : pi_acc) pi_sum += p;
        if (pi_sum > 0.0)
            for (std::size_t i = 0; i < n; ++i) model.initial[i] = pi_acc[i] / pi_sum;

        for (std::size_t i = 0; i < n; ++i) {
            if (gamma_trans_acc[i] > 0.0) {
                double row_sum = 0.0;
                for (std::size_t j = 0; j < n; ++j) row_sum += xi_acc[i][j];
                if (row_sum > 0.0)
                    for (std::size_t j = 0; j < n; ++j)
                        model.transitions[i][j] = xi_acc[i][j] / row_sum;
            }
            if (gamma_acc[i] > 0.0) {
                for (std::size_t d = 0; d < dim; ++d) {
                    const double mean = obs_acc[i][d] / gamma_acc[i];
                    model.means[i][d] = mean;
                    model.variances[i][d] = std::max(
                        kVarianceFloor, obs_sq_acc[i][d] / gamma_acc[i] - mean * mean);
                }
            }
        }
    }
    return model;
}

namespace {

void write_matrix(std::ostream& out, const std::string& name,
                  const std::vector<std::vector<double>>& rows) {
    out << name << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ' ';
            out << detail::format_exact(row[i]);
        }
        out << "\n";
    }
}

std::vector<double> parse_row(const std::string& line, std::size_t expect,
                              std::size_t line_no) {
    std::vector<double> row;
    for (const auto tok : detail::split(detail::trim(line), ' ')) {
        if (tok.empty()) continue;
        const auto v = detail::parse_double(tok);
        if (!v) throw ParseError("bad number '" + std::string(tok) + "'", line_no);
        row.push_back(*v);
    }
    if (row.size() != expect)
        throw ParseError("expected " + std::to_string(expect) + " values", line_no);
    return row;
}

}  // namespace

void save_hmm(const GaussianHmm& hmm, std::ostream& out) {
    hmm.validate();
    out << "ergohrc-hmm 1\n";
    out << "states " << hmm.num_states() << "\n";
    out << "dim " << hmm.dim() << "\n";
    out << "initial\n";
    for (std::size_t i = 0; i < hmm.initial.size(); ++i) {
        if (i) out << ' ';
        out << detail::format_exact(hmm.initial[i]);
    }
    out << "\n";
    write_matrix(out, "transitions", hmm.transitions);
    write_matrix(out, "means", hmm.means);
    write_matrix(out, "variances", hmm.variances);
}

void save_hmm_file(const GaussianHmm& hmm, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write model file '" + path + "'");
    save_hmm(hmm, out);
}

GaussianHmm load_hmm(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() {
        if (!std::getline(in, line)) throw ParseError("truncated model file", line_no);
        ++line_no;
        return std::string(detail::trim(line));
    };

    if (next_line() != "ergohrc-hmm 1")
        throw ParseError("expected 'ergohrc-hmm 1' header", line_no);
    auto read_sized = [&](const std::string& key) {
        const auto tokens = detail::split(next_line(), ' ');
        if (tokens.size() != 2 || tokens[0] != key)
            throw ParseError("expected '" + key + " <N>'", line_no);
        const auto v = detail::parse_int(tokens[1]);
        if (!v || *v <= 0) throw ParseError("bad " + key + " value", line_no);
        return static_cast<std::size_t>(*v);
    };
    const std::size_t states = read_sized("states");
    const std::size_t dim = read_sized("dim");

    auto expect_section = [&](const std::string& name) {
        if (next_line() != name)
            throw ParseError("expected '" + name + "' section", line_no);
    };

    GaussianHmm hmm;
    expect_section("initial");
    hmm.initial = parse_row(next_line(), states, line_no);
    auto read_matrix = [&](const std::string& name, std::size_t cols) {
        expect_section(name);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < states; ++i)
            rows.push_back(parse_row(next_line(), cols, line_no));
        return rows;
    };
    hmm.transitions = read_matrix("transitions", states);
    hmm.means = read_matrix("means", dim);
    hmm.variances = read_matrix("variances", dim);
    hmm.validate();
    return hmm;
}

GaussianHmm load_hmm_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open model file '" + path + "'");
    return load_hmm(in);
}

}  // namespace ergohrc
