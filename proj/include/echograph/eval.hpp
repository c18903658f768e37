#pragma once

// Classification metrics, paired-prediction McNemar test, and stratified
// train/valid/test split plans keyed by (fraction, seed).

#include <array>
#include <cstdint>
#include <vector>

#include "echograph/graph.hpp"

namespace echograph {

struct Metrics {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double auc = 0.0;
  // confusion[actual][predicted], index 0 = factual, 1 = fake.
  std::array<std::array<std::int64_t, 2>, 2> confusion{{{0, 0}, {0, 0}}};
};

// probabilities are P(fake); the predicted label is fake iff p >= 0.5.
// Macro metrics are the unweighted mean over the two classes, with
// empty-denominator precision/recall defined as 0. AUC uses the
// Mann-Whitney rank statistic with midranks for ties; if only one class
// is present the AUC is 0.5 by convention.
// Throws std::invalid_argument on length mismatch, empty input, or
// probabilities outside [0, 1].
Metrics compute_metrics(const std::vector<Label>& labels,
                        const std::vector<double>& probabilities);

// Independent brute-force AUC: counts concordant pairs directly, ties
// worth 1/2. Quadratic, kept for cross-checking compute_metrics.
double rank_auc_oracle(const std::vector<Label>& labels,
                       const std::vector<double>& probabilities);

struct McNemarResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Continuity-corrected McNemar test on discordant counts b and c:
//   statistic = max(|b - c| - 1, 0)^2 / (b + c), 0 when b + c == 0,
//   p = erfc(sqrt(statistic / 2))  (chi-square with 1 dof).
// Throws std::invalid_argument on negative counts.
McNemarResult mcnemar(std::int64_t b, std::int64_t c);

enum class SplitRole { train, valid, test };

const char* to_string(SplitRole role);
SplitRole split_role_from_string(const std::string& s);

struct SplitPlan {
  double train_fraction = 0.0;
  std::uint64_t seed = 0;
  std::vector<SplitRole> role;  // one entry per article, input order
};

// Stratified random split: train gets floor(fraction * N) articles,
// allocated across labels by largest remainder of fraction * n_label;
// the remainder is halved into valid and test per label, with odd
// leftovers alternating between the two so totals stay balanced.
// Deterministic in (labels, fraction, seed).
// Throws std::invalid_argument for fraction outside (0, 1) or empty input.
SplitPlan make_splits(const std::vector<Label>& labels, double train_fraction,
                      std::uint64_t seed);

}  // namespace echograph
