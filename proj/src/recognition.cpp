#include "ergohrc/recognition.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>

#include "ergohrc/errors.hpp"
#include "text_util.hpp"

namespace ergohrc {

std::size_t window_length_frames(double window_seconds, double frame_rate) {
    if (window_seconds <= 0.0 || frame_rate <= 0.0)
        throw ValidationError("window seconds and frame rate must be positive");
    const double frames = std::round(window_seconds * frame_rate);
    if (frames < 1.0) throw ValidationError("window shorter than one frame");
    return static_cast<std::size_t>(frames);
}

FeatureSequence clip_features(const MotionClip& clip) {
    FeatureSequence features;
    features.reserve(clip.frames.size());
    for (const auto& frame : clip.frames) features.push_back(frame.angles);
    return features;
}

std::vector<Window> segment(const MotionClip& clip, const SegmentationConfig& config) {
    clip.validate();
    const std::size_t window = window_length_frames(config.window_seconds,
                                                    clip.frame_rate);
    const std::size_t stride = config.stride_frames ? config.stride_frames : window;
    std::vector<Window> windows;
    if (clip.frames.size() < window) return windows;

    const std::size_t count = (clip.frames.size() - window) / stride + 1;
    windows.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        Window win;
        win.window_index = w;
        win.start_frame = w * stride;
        win.features.reserve(window);
        for (std::size_t t = 0; t < window; ++t)
            win.features.push_back(clip.frames[win.start_frame + t].angles);
        windows.push_back(std::move(win));
    }
    return windows;
}

PrimitiveClassifier::PrimitiveClassifier(std::vector<GaussianHmm> models)
    : models_(std::move(models)) {
    if (models_.empty()) throw ValidationError("classifier needs at least one model");
    const std::size_t dim = models_.front().dim();
    for (const auto& m : models_) {
        m.validate();
        if (m.dim() != dim)
            throw ValidationError("classifier models disagree on feature dimension");
    }
}

const GaussianHmm& PrimitiveClassifier::model(int id) const {
    if (id < 0 || id >= static_cast<int>(models_.size()))
        throw ValidationError("unknown primitive id " + std::to_string(id));
    return models_[static_cast<std::size_t>(id)];
}

std::pair<int, double> PrimitiveClassifier::classify(
    const FeatureSequence& features) const {
    int best_id = 0;
    double best_ll = forward_log_likelihood(models_[0], features);
    for (std::size_t id = 1; id < models_.size(); ++id) {
        const double ll = forward_log_likelihood(models_[id], features);
        // Strict > keeps the lowest id when likelihoods tie.
        if (ll > best_ll) {
            best_ll = ll;
            best_id = static_cast<int>(id);
        }
    }
    return {best_id, best_ll};
}

std::vector<Detection> PrimitiveClassifier::detect(
    const MotionClip& clip, const SegmentationConfig& config) const {
    std::vector<Detection> detections;
    for (const auto& win : segment(clip, config)) {
        const auto [id, ll] = classify(win.features);
        detections.push_back({win.window_index, win.start_frame, id, ll});
    }
    return detections;
}

GaussianHmm train_primitive_model(const std::vector<FeatureSequence>& sequences,
                                  std::size_t num_states, const TrainConfig& config,
                                  TrainStats* stats) {
    return baum_welch_train(init_left_right(num_states, sequences), sequences,
                            config, stats);
}

void save_classifier(const PrimitiveClassifier& classifier, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (std::size_t id = 0; id < classifier.size(); ++id) {
        const auto path = std::filesystem::path(dir) /
                          ("primitive_" + std::to_string(id) + ".hmm");
        save_hmm_file(classifier.model(static_cast<int>(id)), path.string());
    }
}

PrimitiveClassifier load_classifier(const std::string& dir) {
    std::vector<GaussianHmm> models;
    for (std::size_t id = 0;; ++id) {
        const auto path = std::filesystem::path(dir) /
                          ("primitive_" + std::to_string(id) + ".hmm");
        if (!std::filesystem::exists(path)) break;
        models.push_back(load_hmm_file(path.string()));
    }
    if (models.empty())
        throw ValidationError("no primitive_<id>.hmm files under '" + dir + "'");
    return PrimitiveClassifier(std::move(models));
}

EvaluationResult evaluate_classifier(const PrimitiveClassifier& classifier,
                                     const std::vector<LabeledSequence>& samples) {
    if (samples.empty()) throw ValidationError("no evaluation samples");
    const std::size_t classes = classifier.size();
    EvaluationResult result;
    result.confusion.assign(classes, std::vector<std::size_t>(classes, 0));

    for (const auto& sample : samples) {
        if (sample.primitive_id < 0 ||
            sample.primitive_id >= static_cast<int>(classes))
            throw ValidationError("evaluation label outside model range");
        const auto [predicted, ll] = classifier.classify(sample.features);
        (void)ll;
        ++result.confusion[static_cast<std::size_t>(sample.primitive_id)]
                          [static_cast<std::size_t>(predicted)];
        ++result.total;
        if (predicted == sample.primitive_id) ++result.correct;
    }
    result.accuracy = static_cast<double>(result.correct) /
                      static_cast<double>(result.total);

    result.per_class_f.assign(classes, 0.0);
    double f_sum = 0.0;
    std::size_t classes_with_support = 0;
    for (std::size_t c = 0; c < classes; ++c) {
        std::size_t tp = result.confusion[c][c];
        std::size_t support = 0;
        std::size_t predicted_as = 0;
        for (std::size_t k = 0; k < classes; ++k) {
            support += result.confusion[c][k];
            predicted_as += result.confusion[k][c];
        }
        if (support == 0) continue;
        ++classes_with_support;
        const double precision =
            predicted_as ? static_cast<double>(tp) / predicted_as : 0.0;
        const double recall = static_cast<double>(tp) / support;
        const double f = (precision + recall) > 0.0
                             ? 2.0 * precision * recall / (precision + recall)
                             : 0.0;
        result.per_class_f[c] = f;
        f_sum += f;
    }
    result.f_score = classes_with_support ? f_sum / classes_with_support : 0.0;
    return result;
}

void write_detections_csv(const std::vector<Detection>& detections,
                          std::ostream& out) {
    out << "window_index,start_frame,primitive_id,log_likelihood\n";
    for (const auto& d : detections) {
        out << d.window_index << ',' << d.start_frame << ',' << d.primitive_id << ','
            << detail::format_exact(d.log_likelihood) << '\n';
    }
}

}  // namespace ergohrc
