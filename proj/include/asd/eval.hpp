#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "asd/featsel.hpp"
#include "asd/learn.hpp"
#include "asd/tabular.hpp"

namespace asd {

struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }

    bool operator==(const ConfusionMatrix&) const = default;
};

// Ratio metrics from a confusion matrix. A metric whose denominator is
// zero is reported as nullopt rather than a silent 0.
struct Metrics {
    std::optional<double> accuracy;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f_measure;  // harmonic mean of precision and recall

    bool operator==(const Metrics&) const = default;
};

Metrics metrics(const ConfusionMatrix& cm);

// Normalization convention for the two relative error ratios. MAE and
// RMSE are the same under both. U1 divides the residual norm by the norm
// of the actual values (Theil's U1 forecast-accuracy ratio); MeanBaseline
// divides by the error of always predicting the mean actual value, the
// convention of the common ML toolkits.
enum class ErrorVariant { U1, MeanBaseline };

struct ErrorSummary {
    double mae = 0.0;
    double rmse = 0.0;
    std::optional<double> rae;   // nullopt when its normalizer is zero
    std::optional<double> rrse;  // nullopt when the actuals are constant

    bool operator==(const ErrorSummary&) const = default;
};

// Residual summary of `predicted` against `actual` (equal, non-zero
// lengths). The actual values are the 0/1 class labels; predictions may
// be hard labels or probabilities.
ErrorSummary error_metrics(std::span<const double> predicted, std::span<const double> actual,
                           ErrorVariant variant);

// A partition of a dataset's records into k cross-validation folds.
struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::size_t> fold;  // fold index of each record

    std::vector<std::size_t> test_rows(std::size_t f) const;
    std::vector<std::size_t> train_rows(std::size_t f) const;
};

// Deterministic stratified split: each class is shuffled with Rng(seed)
// and dealt round-robin, so per-fold class counts stay within one of
// exact proportionality. Requires 2 <= k <= record count and both classes
// present; records must have a class label.
FoldAssignment stratified_folds(const Dataset& d, std::size_t k, std::uint64_t seed);

// Aggregate outcome of one cross-validated run. The four error summaries
// cover both prediction conventions (hard 0/1 labels vs probabilities)
// under both normalizations; errors() picks the set conventionally
// reported for the classifier kind. wall_seconds is informational and
// excluded from reproducibility comparisons.
struct EvalReport {
    ClassifierKind kind = ClassifierKind::Smo;
    std::size_t fold_count = 0;
    std::size_t feature_count = 0;
    ConfusionMatrix confusion;
    Metrics metrics;
    ErrorSummary hard_u1;
    ErrorSummary hard_baseline;
    ErrorSummary prob_u1;
    ErrorSummary prob_baseline;
    double wall_seconds = 0.0;

    // Hard-label errors for the margin classifier (its raw decision is
    // not a probability), probability errors for the rest.
    const ErrorSummary& errors(ErrorVariant variant) const;
};

// Stratified k-fold cross-validation of `config.kind` on the named
// feature subset. Every fold fits its own encoder on the training
// partition only; the confusion matrix aggregates all held-out
// predictions and the error summaries are computed over the concatenated
// held-out folds. Per-fold random state derives from (seed, fold index).
EvalReport cross_validate(const Dataset& d, const std::vector<std::string>& features,
                          const LearnerConfig& config, std::size_t k, std::uint64_t seed);

struct CurvePoint {
    std::size_t attributes = 0;
    std::optional<double> f_measure;

    bool operator==(const CurvePoint&) const = default;
};

// Cross-validated F-measure as the feature set grows along a ranking:
// point m uses the m best-ranked attributes, for m = 1..|ranking|.
std::vector<CurvePoint> attribute_curve(const Dataset& d, const FeatureRanking& ranking,
                                        const LearnerConfig& config, std::size_t k,
                                        std::uint64_t seed);

// CSV serialization of evaluation reports: one row per report with the
// MeanBaseline-normalized canonical error set. Undefined metrics print
// as "NA".
std::string report_csv_header();
std::string report_csv_row(const std::string& dataset, const EvalReport& report);

}  // namespace asd
