#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ergohrc/hmm.hpp"
#include "ergohrc/mocap.hpp"

namespace ergohrc {

inline constexpr double kDefaultWindowSeconds = 5.0;

// One fixed-length slice of a recording, ready for classification.
struct Window {
    std::size_t window_index = 0;
    std::size_t start_frame = 0;
    FeatureSequence features;
};

struct SegmentationConfig {
    double window_seconds = kDefaultWindowSeconds;
    // 0 means the stride equals the window length (non-overlapping windows).
    std::size_t stride_frames = 0;
};

// Frames per window: round(window_seconds * frame_rate).
std::size_t window_length_frames(double window_seconds, double frame_rate);

// Flatten a clip into its per-frame angle vectors.
FeatureSequence clip_features(const MotionClip& clip);

// Cuts the clip into windows; a trailing partial window is dropped.
std::vector<Window> segment(const MotionClip& clip,
                            const SegmentationConfig& config = {});

struct Detection {
    std::size_t window_index = 0;
    std::size_t start_frame = 0;
    int primitive_id = 0;
    double log_likelihood = 0.0;
};

// One trained model per primitive, indexed by primitive id.
class PrimitiveClassifier {
  public:
    explicit PrimitiveClassifier(std::vector<GaussianHmm> models);

    std::size_t size() const { return models_.size(); }
    const GaussianHmm& model(int id) const;

    // Argmax of per-model log-likelihood; ties resolve to the lower id.
    std::pair<int, double> classify(const FeatureSequence& features) const;

    std::vector<Detection> detect(const MotionClip& clip,
                                  const SegmentationConfig& config = {}) const;

  private:
    std::vector<GaussianHmm> models_;
};

GaussianHmm train_primitive_model(const std::vector<FeatureSequence>& sequences,
                                  std::size_t num_states = kDefaultHmmStates,
                                  const TrainConfig& config = {},
                                  TrainStats* stats = nullptr);

// Models live as one file per primitive: primitive_<id>.hmm under dir.
void save_classifier(const PrimitiveClassifier& classifier, const std::string& dir);
PrimitiveClassifier load_classifier(const std::string& dir);

struct LabeledSequence {
    int primitive_id = 0;
    FeatureSequence features;
};

struct EvaluationResult {
    // confusion[actual][predicted], indexed by primitive id.
    std::vector<std::vector<std::size_t>> confusion;
    std::size_t total = 0;
    std::size_t correct = 0;
    double accuracy = 0.0;
    // Macro-averaged F-score over classes with nonzero support.
    double f_score = 0.0;
    std::vector<double> per_class_f;
};

EvaluationResult evaluate_classifier(const PrimitiveClassifier& classifier,
                                     const std::vector<LabeledSequence>& samples);

void write_detections_csv(const std::vector<Detection>& detections,
                          std::ostream& out);

}  // namespace ergohrc
