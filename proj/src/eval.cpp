#include "echograph/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "echograph/rng.hpp"

namespace echograph {

namespace {

void check_inputs(const std::vector<Label>& labels,
                  const std::vector<double>& probabilities) {
  if (labels.size() != probabilities.size()) {
    throw std::invalid_argument("metrics: labels/probabilities length mismatch");
  }
  if (labels.empty()) {
    throw std::invalid_argument("metrics: empty input");
  }
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("metrics: probability outside [0, 1]");
    }
  }
}

// Mann-Whitney AUC with midranks for ties.
double rank_auc(const std::vector<Label>& labels,
                const std::vector<double>& probabilities) {
  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return probabilities[a] < probabilities[b];
  });

  double n_pos = 0.0, n_neg = 0.0;
  for (Label l : labels) (l == Label::fake ? n_pos : n_neg) += 1.0;
  if (n_pos == 0.0 || n_neg == 0.0) return 0.5;

  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && probabilities[order[j]] == probabilities[order[i]]) ++j;
    // Ranks are 1-based; the tied block [i, j) shares the midrank.
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == Label::fake) rank_sum_pos += midrank;
    }
    i = j;
  }
  return (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);
}

}  // namespace

Metrics compute_metrics(const std::vector<Label>& labels,
                        const std::vector<double>& probabilities) {
  check_inputs(labels, probabilities);

  Metrics m;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int actual = labels[i] == Label::fake ? 1 : 0;
    const int predicted = probabilities[i] >= 0.5 ? 1 : 0;
    ++m.confusion[actual][predicted];
  }

  const double total = static_cast<double>(labels.size());
  m.accuracy =
      static_cast<double>(m.confusion[0][0] + m.confusion[1][1]) / total;

  double prec_sum = 0.0, rec_sum = 0.0, f1_sum = 0.0;
  for (int cls = 0; cls < 2; ++cls) {
    const double tp = static_cast<double>(m.confusion[cls][cls]);
    const double fp = static_cast<double>(m.confusion[1 - cls][cls]);
    const double fn = static_cast<double>(m.confusion[cls][1 - cls]);
    const double prec = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
    const double rec = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
    const double f1 = prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    prec_sum += prec;
    rec_sum += rec;
    f1_sum += f1;
  }
  m.macro_precision = prec_sum / 2.0;
  m.macro_recall = rec_sum / 2.0;
  m.macro_f1 = f1_sum / 2.0;
  m.auc = rank_auc(labels, probabilities);
  return m;
}

double rank_auc_oracle(const std::vector<Label>& labels,
                       const std::vector<double>& probabilities) {
  check_inputs(labels, probabilities);
  double concordant = 0.0;
  double n_pos = 0.0, n_neg = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != Label::fake) continue;
    n_pos += 1.0;
    for (std::size_t j = 0; j < labels.size(); ++j) {
      if (labels[j] == Label::fake) continue;
      if (probabilities[i] > probabilities[j]) {
        concordant += 1.0;
      } else if (probabilities[i] == probabilities[j]) {
        concordant += 0.5;
      }
    }
  }
  for (Label l : labels) {
    if (l != Label::fake) n_neg += 1.0;
  }
  if (n_pos == 0.0 || n_neg == 0.0) return 0.5;
  return concordant / (n_pos * n_neg);
}

McNemarResult mcnemar(std::int64_t b, std::int64_t c) {
  if (b < 0 || c < 0) {
    throw std::invalid_argument("mcnemar: negative discordant count");
  }
  McNemarResult r;
  if (b + c == 0) {
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  const double diff = std::abs(static_cast<double>(b - c)) - 1.0;
  const double clipped = std::max(diff, 0.0);
  r.statistic = clipped * clipped / static_cast<double>(b + c);
  // Chi-square(1) survival function.
  r.p_value = std::erfc(std::sqrt(r.statistic / 2.0));
  return r;
}

const char* to_string(SplitRole role) {
  switch (role) {
    case SplitRole::train: return "train";
    case SplitRole::valid: return "valid";
    default: return "test";
  }
}

SplitRole split_role_from_string(const std::string& s) {
  if (s == "train") return SplitRole::train;
  if (s == "valid") return SplitRole::valid;
  if (s == "test") return SplitRole::test;
  throw std::invalid_argument("unknown split role: '" + s + "'");
}

SplitPlan make_splits(const std::vector<Label>& labels, double train_fraction,
                      std::uint64_t seed) {
  if (labels.empty()) throw std::invalid_argument("splits: empty input");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw std::invalid_argument("splits: train_fraction must be in (0, 1)");
  }

  SplitPlan plan;
  plan.train_fraction = train_fraction;
  plan.seed = seed;
  plan.role.assign(labels.size(), SplitRole::test);

  // Indices per label, each shuffled with its own derived stream.
  std::array<std::vector<std::size_t>, 2> byLabel;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    byLabel[labels[i] == Label::fake ? 1 : 0].push_back(i);
  }
  for (int cls = 0; cls < 2; ++cls) {
    Rng rng(hash_seed(seed, 0x53504c49ULL, static_cast<std::uint64_t>(cls)));
    rng.shuffle(byLabel[cls]);
  }

  // Train count: floor of the global target, distributed across labels by
  // largest remainder so class balance carries into the split.
  const auto train_total = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(labels.size())));
  std::array<std::size_t, 2> train_cnt{};
  std::array<double, 2> remainder{};
  std::size_t assigned = 0;
  for (int cls = 0; cls < 2; ++cls) {
    const double exact =
        train_fraction * static_cast<double>(byLabel[cls].size());
    train_cnt[cls] = std::min(byLabel[cls].size(),
                              static_cast<std::size_t>(std::floor(exact)));
    remainder[cls] = exact - std::floor(exact);
    assigned += train_cnt[cls];
  }
  while (assigned < train_total) {
    int pick = remainder[0] >= remainder[1] ? 0 : 1;
    if (train_cnt[pick] >= byLabel[pick].size()) pick = 1 - pick;
    if (train_cnt[pick] >= byLabel[pick].size()) break;
    ++train_cnt[pick];
    remainder[pick] = -1.0;
    ++assigned;
  }

  // Remainder halves into valid and test per label; labels with an odd
  // remainder alternate which side gets the extra element.
  bool extra_to_valid = true;
  for (int cls = 0; cls < 2; ++cls) {
    const auto& idx = byLabel[cls];
    const std::size_t m = idx.size() - train_cnt[cls];
    std::size_t valid_cnt = m / 2;
    if (m % 2 == 1) {
      if (extra_to_valid) ++valid_cnt;
      extra_to_valid = !extra_to_valid;
    }
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k < train_cnt[cls]) {
        plan.role[idx[k]] = SplitRole::train;
      } else if (k < train_cnt[cls] + valid_cnt) {
        plan.role[idx[k]] = SplitRole::valid;
      } else {
        plan.role[idx[k]] = SplitRole::test;
      }
    }
  }
  return plan;
}

}  // namespace echograph
