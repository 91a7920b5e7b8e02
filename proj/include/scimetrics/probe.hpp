#pragma once

#include "scimetrics/embed_store.hpp"
#include "scimetrics/labeling.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scimetrics {

struct ProbeHyper {
    double learning_rate = 2.0;
    int epochs = 500;
    double l2 = 1e-4;
    std::uint64_t seed = 7;
    /// Standardize features with training-set moments before the affine map.
    bool standardize = true;
};

/// Logistic probe: p = sigmoid(w . z + b) where z is the (optionally
/// standardized) embedding.
struct ProbeModel {
    std::vector<double> weights;
    double bias = 0.0;
    /// Empty when the model works on raw features.
    std::vector<double> feature_mean;
    std::vector<double> feature_scale;

    ProbeHyper hyper;
    int epochs_run = 0;
    double final_loss = 0.0;
    double validation_loss = 0.0;
    double validation_accuracy = 0.0;

    std::size_t dim() const noexcept { return weights.size(); }
    double score(std::span<const float> v) const;
    double score(std::span<const double> v) const;
};

double sigmoid(double z) noexcept;

/// Full-batch gradient descent on mean cross-entropy + (l2/2)|w|^2 from a zero
/// start. A step that raises the loss is retried at half the learning rate,
/// so the training loss never increases across epochs.
ProbeModel train_probe(const LabeledSet& train, const LabeledSet& validation, const EmbeddingMatrix& emb,
                       const ProbeHyper& hyper);

/// Same optimizer on an explicit design; rows of `x` are observations.
ProbeModel train_probe(const std::vector<std::vector<double>>& x, std::span<const int> y, const ProbeHyper& hyper,
                       std::vector<double>* loss_trace = nullptr);

double predict_proba(const ProbeModel& model, std::span<const float> v);
double predict_proba(const ProbeModel& model, std::span<const double> v);

void save_model(const ProbeModel& model, const std::filesystem::path& path);
ProbeModel load_model(const std::filesystem::path& path);

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
    std::optional<double> sensitivity;  // TP / (TP + FN)
    std::optional<double> specificity;  // TN / (TN + FP)
    std::optional<double> f1;           // 2TP / (2TP + FP + FN)
};

/// Positive prediction iff p > cutoff.
ConfusionCounts confusion(std::span<const int> labels, std::span<const double> probs, double cutoff);
Metrics metrics(const ConfusionCounts& c);

/// Arithmetic mean of the two probability streams.
double fuse(double p_journal, double p_author);

struct FusedPrediction {
    std::string paper_id;
    double p_journal = 0.0;
    double p_author = 0.0;
    double p_combined = 0.0;
};

struct CutoffChoice {
    double cutoff = 0.5;
    double value = 0.0;  // F1 or Youden's J at the cutoff
};

/// Scans cutoffs k*step for k = 0..floor(1/step) and returns the one with the
/// largest F1; ties go to the smallest cutoff.
CutoffChoice threshold_search(std::span<const int> labels, std::span<const double> probs, double step);

/// Same grid, maximizing sensitivity + specificity - 1.
CutoffChoice youden_search(std::span<const int> labels, std::span<const double> probs, double step);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double cutoff = 0.0;  // rates are for p > cutoff; the last point uses -inf
};

/// Points from (0,0) to (1,1), one per distinct probability.
std::vector<RocPoint> roc_curve(std::span<const int> labels, std::span<const double> probs);
double roc_auc(std::span<const RocPoint> curve);

/// paper_id<TAB>probability per line; the format the sidecar classifier writes.
std::map<std::string, double, std::less<>> load_probabilities(const std::filesystem::path& path);
void save_probabilities(const std::map<std::string, double, std::less<>>& probs, const std::filesystem::path& path);

void save_predictions(std::span<const FusedPrediction> preds, const std::filesystem::path& path);
std::vector<FusedPrediction> load_predictions(const std::filesystem::path& path);

}  // namespace scimetrics
