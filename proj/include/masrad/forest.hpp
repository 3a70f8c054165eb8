#pragma once

// Random forest of CART trees (Gini impurity, bootstrap samples, random
// feature subsets per split), plus per-occurrence ranking of its scores.
//
// Defaults reproduce a Weka RandomForest run with "-I 252 -K 0 -depth 0":
// 252 trees, floor(log2(d)) + 1 features tried per split, no depth limit,
// one instance per leaf minimum.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "masrad/encode.hpp"
#include "masrad/error.hpp"
#include "masrad/heuristic.hpp"

namespace masrad {

struct ForestParams {
  std::size_t n_trees = 252;
  /// Features tried per split; 0 means floor(log2(d)) + 1.
  std::size_t mtry = 0;
  /// 0 means unlimited.
  std::size_t max_depth = 0;
  std::size_t min_leaf = 1;
  std::uint64_t seed = 1;
  /// Worker threads; 0 means hardware concurrency. Does not affect results.
  std::size_t threads = 0;
};

inline std::size_t default_mtry(std::size_t n_features) {
  if (n_features <= 1) return 1;
  return static_cast<std::size_t>(std::floor(std::log2(static_cast<double>(n_features)))) + 1;
}

/// Flat node arrays; node 0 is the root. Leaves have feature == -1.
struct Tree {
  std::vector<int> feature;
  std::vector<double> threshold;
  std::vector<int> left;
  std::vector<int> right;
  std::vector<std::uint8_t> vote;

  bool predict(std::span<const double> x) const {
    int node = 0;
    while (feature[node] >= 0) {
      node = x[static_cast<std::size_t>(feature[node])] <= threshold[node] ? left[node] : right[node];
    }
    return vote[node] != 0;
  }

  std::size_t size() const { return feature.size(); }

  friend bool operator==(const Tree&, const Tree&) = default;
};

struct Forest {
  std::vector<Tree> trees;
  ForestParams params;
  std::size_t n_features = 0;
  std::size_t mtry = 0;
  std::string schema_version{kSchemaVersion};

  /// Fraction of trees voting True.
  double score(std::span<const double> x) const {
    if (x.size() != n_features) {
      throw Error(ErrorCode::kSchemaMismatch, "instance has " + std::to_string(x.size()) +
                                                  " columns, forest expects " +
                                                  std::to_string(n_features));
    }
    std::size_t yes = 0;
    for (const Tree& t : trees) yes += t.predict(x) ? 1 : 0;
    return static_cast<double>(yes) / static_cast<double>(trees.size());
  }
};

/// Per-instance training-set scores: in-bag uses every tree, out-of-bag
/// only trees whose bootstrap sample left the instance out (NaN if none).
struct TrainingDiagnostics {
  std::vector<double> inbag_score;
  std::vector<double> oob_score;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct TreeBuilder {
  const std::vector<EncodedInstance>& data;
  const ForestParams& params;
  std::size_t n_features;
  std::size_t mtry;
  std::mt19937_64 rng;
  Tree tree;

  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
  };

  static double gini(std::size_t pos, std::size_t n) {
    if (n == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(n);
    return 2.0 * p * (1.0 - p);
  }

  int add_leaf(std::size_t pos, std::size_t n) {
    tree.feature.push_back(-1);
    tree.threshold.push_back(0.0);
    tree.left.push_back(-1);
    tree.right.push_back(-1);
    tree.vote.push_back(2 * pos > n ? 1 : 0);
    return static_cast<int>(tree.feature.size() - 1);
  }

  Split best_split_on(std::vector<std::size_t>& idx, int f, std::size_t pos_total) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const double va = data[a].values[f];
      const double vb = data[b].values[f];
      return va != vb ? va < vb : a < b;
    });
    const std::size_t n = idx.size();
    const double parent = gini(pos_total, n);
    Split best;
    std::size_t left_pos = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_pos += *data[idx[i]].label ? 1 : 0;
      const double here = data[idx[i]].values[f];
      const double next = data[idx[i + 1]].values[f];
      if (here == next) continue;
      const std::size_t nl = i + 1;
      if (nl < params.min_leaf || n - nl < params.min_leaf) continue;
      const double child =
          (static_cast<double>(nl) * gini(left_pos, nl) +
           static_cast<double>(n - nl) * gini(pos_total - left_pos, n - nl)) /
          static_cast<double>(n);
      const double gain = parent - child;
      if (gain > best.gain) {
        best.feature = f;
        best.gain = gain;
        best.threshold = here + (next - here) / 2.0;
        if (best.threshold >= next) best.threshold = here;
      }
    }
    return best;
  }

  int build(std::vector<std::size_t> idx, std::size_t depth) {
    std::size_t pos = 0;
    for (std::size_t i : idx) pos += *data[i].label ? 1 : 0;
    const std::size_t n = idx.size();
    if (pos == 0 || pos == n || n < 2 * params.min_leaf ||
        (params.max_depth != 0 && depth >= params.max_depth)) {
      return add_leaf(pos, n);
    }

    // Try features in random order until at least mtry have been tried and
    // one of them reduced impurity. If none does, the best separating split
    // is still taken so trees grow to purity.
    std::vector<int> order(n_features);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    Split best;
    std::size_t tried = 0;
    for (int f : order) {
      const Split s = best_split_on(idx, f, pos);
      ++tried;
      if (s.feature >= 0 && s.gain > best.gain) best = s;
      if (tried >= mtry && best.gain > 0.0) break;
    }
    if (best.feature < 0) return add_leaf(pos, n);

    std::vector<std::size_t> left_idx;
    std::vector<std::size_t> right_idx;
    for (std::size_t i : idx) {
      (data[i].values[best.feature] <= best.threshold ? left_idx : right_idx).push_back(i);
    }
    const int node = add_leaf(pos, n);
    tree.feature[node] = best.feature;
    tree.threshold[node] = best.threshold;
    const int l = build(std::move(left_idx), depth + 1);
    const int r = build(std::move(right_idx), depth + 1);
    tree.left[node] = l;
    tree.right[node] = r;
    return node;
  }
};

inline void validate_training_data(const std::vector<EncodedInstance>& data) {
  if (data.empty()) throw Error(ErrorCode::kEmptyData, "no training instances");
  const std::size_t width = data.front().values.size();
  std::size_t pos = 0;
  for (const auto& d : data) {
    if (!d.label) throw Error(ErrorCode::kEmptyData, "instance " + d.candidate_id + " has no label");
    if (d.values.size() != width) throw Error(ErrorCode::kSchemaMismatch, "ragged training data");
    pos += *d.label ? 1 : 0;
  }
  if (pos == 0 || pos == data.size()) {
    throw Error(ErrorCode::kSingleClass, "training labels contain a single class");
  }
}

}  // namespace detail

inline Forest train_forest(const std::vector<EncodedInstance>& data, const ForestParams& params = {},
                           TrainingDiagnostics* diagnostics = nullptr) {
  detail::validate_training_data(data);
  if (params.n_trees == 0) throw Error(ErrorCode::kUsage, "n_trees must be at least 1");

  Forest forest;
  forest.params = params;
  forest.n_features = data.front().values.size();
  forest.mtry = params.mtry == 0 ? default_mtry(forest.n_features)
                                 : std::min(params.mtry, forest.n_features);
  forest.trees.resize(params.n_trees);
  std::vector<std::vector<std::uint8_t>> in_bag(params.n_trees);

  const std::size_t n = data.size();
  auto train_one = [&](std::size_t t) {
    detail::TreeBuilder b{data, params, forest.n_features, forest.mtry,
                          std::mt19937_64(detail::splitmix64(params.seed ^ (t * 0x2545F4914F6CDD1DULL))),
                          {}};
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<std::size_t> sample(n);
    in_bag[t].assign(n, 0);
    for (auto& s : sample) {
      s = pick(b.rng);
      in_bag[t][s] = 1;
    }
    b.build(std::move(sample), 0);
    forest.trees[t] = std::move(b.tree);
  };

  std::size_t workers = params.threads != 0 ? params.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, params.n_trees);
  if (workers == 1) {
    for (std::size_t t = 0; t < params.n_trees; ++t) train_one(t);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t t = w; t < params.n_trees; t += workers) train_one(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  if (diagnostics != nullptr) {
    diagnostics->inbag_score.assign(n, 0.0);
    diagnostics->oob_score.assign(n, std::nan(""));
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t yes = 0;
      std::size_t oob_yes = 0;
      std::size_t oob_n = 0;
      for (std::size_t t = 0; t < params.n_trees; ++t) {
        const bool v = forest.trees[t].predict(data[i].values);
        yes += v ? 1 : 0;
        if (in_bag[t][i] == 0) {
          ++oob_n;
          oob_yes += v ? 1 : 0;
        }
      }
      diagnostics->inbag_score[i] = static_cast<double>(yes) / static_cast<double>(params.n_trees);
      if (oob_n > 0) diagnostics->oob_score[i] = static_cast<double>(oob_yes) / static_cast<double>(oob_n);
    }
  }
  return forest;
}

inline double predict_score(const Forest& forest, const EncodedInstance& inst) {
  return forest.score(inst.values);
}

/// Inclusive threshold: a score equal to the threshold is True.
inline bool classify(double score, double threshold = 0.5) { return score >= threshold; }

inline bool classify(const Forest& forest, const EncodedInstance& inst, double threshold = 0.5) {
  return classify(predict_score(forest, inst), threshold);
}

struct RankedCandidate {
  std::string candidate_id;
  double score = 0.0;
  std::size_t word_count = 0;
};

/// Orders one occurrence by score descending (ties: fewer words, then
/// smaller candidate_id). The head is the selected target.
inline std::vector<RankedCandidate> rank_scores(std::vector<RankedCandidate> ranked) {
  if (ranked.empty()) throw Error(ErrorCode::kEmptyGroup, "nothing to rank");
  std::sort(ranked.begin(), ranked.end(), [](const RankedCandidate& a, const RankedCandidate& b) {
    return better_candidate(a.score, a.word_count, a.candidate_id, b.score, b.word_count,
                            b.candidate_id);
  });
  return ranked;
}

inline std::vector<RankedCandidate> rank_occurrence(const Forest& forest,
                                                    const std::vector<EncodedInstance>& group) {
  if (group.empty()) throw Error(ErrorCode::kEmptyGroup, "nothing to rank");
  std::vector<RankedCandidate> ranked;
  ranked.reserve(group.size());
  for (const auto& inst : group) {
    if (inst.occurrence_id != group.front().occurrence_id) {
      throw Error(ErrorCode::kEmptyGroup, "rank group mixes occurrences");
    }
    ranked.push_back({inst.candidate_id, predict_score(forest, inst), inst.word_count});
  }
  return rank_scores(std::move(ranked));
}

// ---- model file ------------------------------------------------------------

inline constexpr std::string_view kModelFormat = "masrad-forest/1";

inline nlohmann::json forest_to_json(const Forest& f) {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : f.trees) {
    trees.push_back({{"feature", t.feature},
                     {"threshold", t.threshold},
                     {"left", t.left},
                     {"right", t.right},
                     {"vote", t.vote}});
  }
  return {{"format", kModelFormat},
          {"schema_version", f.schema_version},
          {"n_features", f.n_features},
          {"mtry", f.mtry},
          {"seed", f.params.seed},
          {"params",
           {{"n_trees", f.params.n_trees},
            {"mtry", f.params.mtry},
            {"max_depth", f.params.max_depth},
            {"min_leaf", f.params.min_leaf}}},
          {"trees", std::move(trees)}};
}

inline Forest forest_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw Error(ErrorCode::kSchemaMismatch, "not a " + std::string(kModelFormat) + " model");
    }
    Forest f;
    f.schema_version = j.at("schema_version").get<std::string>();
    f.n_features = j.at("n_features").get<std::size_t>();
    f.mtry = j.at("mtry").get<std::size_t>();
    f.params.seed = j.at("seed").get<std::uint64_t>();
    const auto& p = j.at("params");
    f.params.n_trees = p.at("n_trees").get<std::size_t>();
    f.params.mtry = p.at("mtry").get<std::size_t>();
    f.params.max_depth = p.at("max_depth").get<std::size_t>();
    f.params.min_leaf = p.at("min_leaf").get<std::size_t>();
    for (const auto& jt : j.at("trees")) {
      Tree t;
      t.feature = jt.at("feature").get<std::vector<int>>();
      t.threshold = jt.at("threshold").get<std::vector<double>>();
      t.left = jt.at("left").get<std::vector<int>>();
      t.right = jt.at("right").get<std::vector<int>>();
      t.vote = jt.at("vote").get<std::vector<std::uint8_t>>();
      const std::size_t n = t.feature.size();
      if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
          t.vote.size() != n) {
        throw Error(ErrorCode::kParse, "malformed tree in model file");
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (t.feature[k] >= static_cast<int>(f.n_features) ||
            (t.feature[k] >= 0 && (t.left[k] <= static_cast<int>(k) || t.right[k] <= static_cast<int>(k) ||
                                   t.left[k] >= static_cast<int>(n) || t.right[k] >= static_cast<int>(n)))) {
          throw Error(ErrorCode::kParse, "malformed tree node in model file");
        }
      }
      f.trees.push_back(std::move(t));
    }
    if (f.trees.empty()) throw Error(ErrorCode::kParse, "model has no trees");
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model file: ") + e.what());
  }
}

}  // namespace masrad
