#include "veriscale/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "veriscale/binomial.hpp"
#include "veriscale/parallel.hpp"
#include "veriscale/rng.hpp"

namespace veriscale {

namespace {

// Hard ceiling on forced exhaustive enumeration; beyond this the subset count
// would overflow the uint64 tally and never finish anyway.
constexpr double kForcedEnumerationCap = 1e8;

// Walks all C(n, k) index combinations in lexicographic order.
class CombinationWalker {
 public:
  CombinationWalker(int n, int k) : n_(n), indices_(static_cast<std::size_t>(k)) {
    std::iota(indices_.begin(), indices_.end(), 0);
    done_ = k > n;
  }

  bool done() const { return done_; }
  const std::vector<int>& indices() const { return indices_; }

  void advance() {
    const int k = static_cast<int>(indices_.size());
    int i = k - 1;
    while (i >= 0 && indices_[static_cast<std::size_t>(i)] == n_ - k + i) --i;
    if (i < 0) {
      done_ = true;
      return;
    }
    ++indices_[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      indices_[static_cast<std::size_t>(j)] = indices_[static_cast<std::size_t>(j - 1)] + 1;
  }

 private:
  int n_;
  std::vector<int> indices_;
  bool done_ = false;
};

// Interns each distinct answer of a problem as a small id; the ground truth
// gets id g (or -1 when no solution proposes it).
struct AnswerIds {
  std::vector<int> per_solution;
  int gt_id = -1;
  int n_distinct = 0;
};

AnswerIds intern_answers(const ProblemRecord& problem) {
  AnswerIds ids;
  std::vector<std::string> seen;
  ids.per_solution.reserve(problem.solutions.size());
  for (const auto& sol : problem.solutions) {
    auto it = std::find(seen.begin(), seen.end(), sol.answer);
    if (it == seen.end()) {
      seen.push_back(sol.answer);
      ids.per_solution.push_back(static_cast<int>(seen.size()) - 1);
    } else {
      ids.per_solution.push_back(static_cast<int>(it - seen.begin()));
    }
  }
  ids.n_distinct = static_cast<int>(seen.size());
  auto gt = std::find(seen.begin(), seen.end(), problem.gt_answer);
  ids.gt_id = gt == seen.end() ? -1 : static_cast<int>(gt - seen.begin());
  return ids;
}

// Tallies one voted subset: modal-set size t and whether the ground truth is
// modal. counts[t] accumulates subsets whose modal set has size t and
// contains the ground truth.
void tally_votes(const std::vector<int>& votes, int gt_id, std::vector<std::uint64_t>& counts) {
  int best = 0;
  int tie_size = 0;
  bool gt_modal = false;
  for (std::size_t id = 0; id < votes.size(); ++id) {
    if (votes[id] == 0) continue;
    if (votes[id] > best) {
      best = votes[id];
      tie_size = 1;
      gt_modal = (static_cast<int>(id) == gt_id);
    } else if (votes[id] == best) {
      ++tie_size;
      gt_modal = gt_modal || (static_cast<int>(id) == gt_id);
    }
  }
  if (gt_modal) ++counts[static_cast<std::size_t>(tie_size)];
}

// Shared final reduction: subsets with a modal tie of size t containing the
// ground truth each contribute 1/t.
double reduce_tie_counts(const std::vector<std::uint64_t>& counts, double total_subsets) {
  double acc = 0.0;
  for (std::size_t t = 1; t < counts.size(); ++t) {
    if (counts[t]) acc += static_cast<double>(counts[t]) / static_cast<double>(t);
  }
  return acc / total_subsets;
}

double sc_problem_exhaustive(const ProblemRecord& problem, int k) {
  const int n = static_cast<int>(problem.solutions.size());
  const AnswerIds ids = intern_answers(problem);
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(k) + 1, 0);
  std::vector<int> votes(static_cast<std::size_t>(ids.n_distinct), 0);
  for (CombinationWalker walker(n, k); !walker.done(); walker.advance()) {
    std::fill(votes.begin(), votes.end(), 0);
    for (int idx : walker.indices())
      ++votes[static_cast<std::size_t>(ids.per_solution[static_cast<std::size_t>(idx)])];
    tally_votes(votes, ids.gt_id, counts);
  }
  return reduce_tie_counts(counts, choose_double(n, k));
}

double sc_problem_monte_carlo(const ProblemRecord& problem, int k, const EstimatorConfig& cfg,
                              Rng rng) {
  const int n = static_cast<int>(problem.solutions.size());
  const AnswerIds ids = intern_answers(problem);
  std::vector<int> votes(static_cast<std::size_t>(ids.n_distinct), 0);
  std::vector<int> modal;
  std::uint64_t successes = 0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::fill(votes.begin(), votes.end(), 0);
    for (int idx : rng.sample_indices(n, k))
      ++votes[static_cast<std::size_t>(ids.per_solution[static_cast<std::size_t>(idx)])];
    int best = 0;
    modal.clear();
    for (std::size_t id = 0; id < votes.size(); ++id) {
      if (votes[id] == 0) continue;
      if (votes[id] > best) {
        best = votes[id];
        modal.assign(1, static_cast<int>(id));
      } else if (votes[id] == best) {
        modal.push_back(static_cast<int>(id));
      }
    }
    const int picked =
        modal.size() == 1 ? modal[0] : modal[rng.below(modal.size())];
    if (picked == ids.gt_id) ++successes;
  }
  return static_cast<double>(successes) / static_cast<double>(cfg.trials);
}

// Aggregates the scores at the drawn indices.
double aggregate_drawn(const std::vector<double>& scores, const std::vector<int>& drawn,
                       Aggregation aggregation) {
  double acc = 0.0;
  for (int idx : drawn) {
    const double score = scores[static_cast<std::size_t>(idx)];
    acc += aggregation == Aggregation::mean_score ? score : (verdict_from_score(score) ? 1.0 : 0.0);
  }
  return acc / static_cast<double>(drawn.size());
}

// Expectation of the closed form over uniform permutations of score ties:
// every position of a tie block takes the block's mean correctness.
double closed_form_tie_averaged(std::vector<std::pair<double, int>>& scored, int s) {
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  const std::size_t n = scored.size();
  std::vector<double> alpha(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    double block_sum = 0.0;
    while (j < n && scored[j].first == scored[i].first) {
      block_sum += static_cast<double>(scored[j].second);
      ++j;
    }
    const double block_mean = block_sum / static_cast<double>(j - i);
    for (std::size_t p = i; p < j; ++p) alpha[p] = block_mean;
    i = j;
  }
  return best_of_k_closed_form(alpha, s);
}

double genrm_problem_exhaustive(const ProblemRecord& problem, int s, int v,
                                const EstimatorConfig& cfg) {
  const int n = static_cast<int>(problem.solutions.size());
  const int m = problem.min_verifications();
  std::vector<std::pair<double, int>> scored(static_cast<std::size_t>(n));
  double acc = 0.0;
  std::uint64_t n_subsets = 0;
  for (CombinationWalker walker(m, v); !walker.done(); walker.advance()) {
    for (int j = 0; j < n; ++j) {
      const auto& sol = problem.solutions[static_cast<std::size_t>(j)];
      scored[static_cast<std::size_t>(j)] = {
          aggregate_drawn(sol.verification_scores, walker.indices(), cfg.aggregation),
          sol.correct ? 1 : 0};
    }
    acc += closed_form_tie_averaged(scored, s);
    ++n_subsets;
  }
  return acc / static_cast<double>(n_subsets);
}

double genrm_problem_monte_carlo(const ProblemRecord& problem, int s, int v,
                                 const EstimatorConfig& cfg, Rng rng) {
  const int n = static_cast<int>(problem.solutions.size());
  const int m = problem.min_verifications();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::vector<double> scores(static_cast<std::size_t>(n));
  std::vector<double> alpha(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (int trial = 0; trial < cfg.trials; ++trial) {
    std::vector<int> drawn;
    if (!cfg.per_solution_draws) {
      drawn = rng.sample_indices(m, v);
      // Canonical summation order: equal means must compare equal against
      // the exhaustive path, which aggregates in ascending index order.
      std::sort(drawn.begin(), drawn.end());
    }
    for (int j = 0; j < n; ++j) {
      const auto& sol = problem.solutions[static_cast<std::size_t>(j)];
      if (cfg.per_solution_draws) {
        drawn = rng.sample_indices(static_cast<int>(sol.verification_scores.size()), v);
        std::sort(drawn.begin(), drawn.end());
      }
      scores[static_cast<std::size_t>(j)] = aggregate_drawn(sol.verification_scores, drawn,
                                                            cfg.aggregation);
    }
    // Rank by score; equal scores fall back to a fresh uniform permutation.
    const std::vector<int> tiebreak = rng.permutation(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const double sa = scores[static_cast<std::size_t>(a)];
      const double sb = scores[static_cast<std::size_t>(b)];
      if (sa != sb) return sa > sb;
      return tiebreak[static_cast<std::size_t>(a)] < tiebreak[static_cast<std::size_t>(b)];
    });
    for (int j = 0; j < n; ++j)
      alpha[static_cast<std::size_t>(j)] =
          problem.solutions[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])].correct
              ? 1.0
              : 0.0;
    acc += best_of_k_closed_form(alpha, s);
  }
  return acc / static_cast<double>(cfg.trials);
}

double mean_over_problems(const Dataset& dataset,
                          const std::function<double(const ProblemRecord&)>& per_problem) {
  std::vector<double> values(dataset.problems.size());
  parallel_for(dataset.problems.size(),
               [&](std::size_t i) { values[i] = per_problem(dataset.problems[i]); });
  double acc = 0.0;
  for (double value : values) acc += value;
  return acc / static_cast<double>(values.size());
}

}  // namespace

double pass_at_1(const Dataset& dataset) {
  if (dataset.problems.empty()) throw DataError("empty dataset");
  double acc = 0.0;
  for (const auto& p : dataset.problems) {
    std::size_t correct = 0;
    for (const auto& sol : p.solutions) correct += sol.correct ? 1 : 0;
    acc += static_cast<double>(correct) / static_cast<double>(p.solutions.size());
  }
  return acc / static_cast<double>(dataset.problems.size());
}

double aggregate_score(const std::vector<double>& scores, Aggregation aggregation) {
  if (scores.empty()) throw std::domain_error("aggregate_score: empty score list");
  double acc = 0.0;
  for (double score : scores)
    acc += aggregation == Aggregation::mean_score ? score
                                                  : (verdict_from_score(score) ? 1.0 : 0.0);
  return acc / static_cast<double>(scores.size());
}

double best_of_k_closed_form(const std::vector<double>& alpha, int k) {
  const int n = static_cast<int>(alpha.size());
  if (k < 1 || k > n) throw std::domain_error("best_of_k: k must satisfy 1 <= k <= N");
  if (n > kMaxChooseN)
    throw std::domain_error("best_of_k: N exceeds the exact binomial range (max 128)");
  double acc = 0.0;
  for (int i = 0; i + k <= n; ++i)
    acc += choose_double(n - i - 1, k - 1) * alpha[static_cast<std::size_t>(i)];
  return acc / choose_double(n, k);
}

double best_of_k_closed_form(const AlphaVector& alpha, int k) {
  std::vector<double> values;
  values.reserve(alpha.values.size());
  for (int a : alpha.values) {
    if (a != 0 && a != 1) throw std::domain_error("alpha entries must be 0 or 1");
    values.push_back(static_cast<double>(a));
  }
  return best_of_k_closed_form(values, k);
}

double sc_success_rate(const Dataset& dataset, int k, const EstimatorConfig& cfg) {
  cfg.validate();
  if (dataset.problems.empty()) throw DataError("empty dataset");
  if (k < 1 || k > dataset.usable_solutions())
    throw std::domain_error("sc_success_rate: k outside the usable solution range");
  return mean_over_problems(dataset, [&](const ProblemRecord& problem) {
    const int n = static_cast<int>(problem.solutions.size());
    bool exhaustive = false;
    if (cfg.mode == SamplingMode::exhaustive) {
      if (n > kMaxChooseN || choose_double(n, k) > kForcedEnumerationCap)
        throw std::domain_error("sc_success_rate: exhaustive enumeration too large");
      exhaustive = true;
    } else if (cfg.mode == SamplingMode::automatic) {
      exhaustive = n <= kMaxChooseN && choose_double(n, k) <= cfg.exhaustive_limit;
    }
    if (exhaustive) return sc_problem_exhaustive(problem, k);
    return sc_problem_monte_carlo(problem, k, cfg,
                                  derive_rng(cfg.seed, "sc/" + problem.problem_id));
  });
}

double genrm_success_rate(const Dataset& dataset, int s, int v, const EstimatorConfig& cfg) {
  cfg.validate();
  if (dataset.problems.empty()) throw DataError("empty dataset");
  if (s < 1 || s > dataset.usable_solutions())
    throw std::domain_error("genrm_success_rate: s outside the usable solution range");
  if (v < 1)
    throw std::domain_error("genrm_success_rate: v must be >= 1 (v = 0 is majority voting)");
  if (v > dataset.usable_verifications())
    throw std::domain_error("genrm_success_rate: v outside the usable verification range");
  return mean_over_problems(dataset, [&](const ProblemRecord& problem) {
    const int n = static_cast<int>(problem.solutions.size());
    const int m = problem.min_verifications();
    bool exhaustive = false;
    if (cfg.mode == SamplingMode::exhaustive) {
      if (cfg.per_solution_draws)
        throw std::domain_error(
            "genrm_success_rate: exhaustive mode requires the shared draw protocol");
      if (n > kMaxChooseN || m > kMaxChooseN ||
          choose_double(m, v) * choose_double(n, s) > kForcedEnumerationCap)
        throw std::domain_error("genrm_success_rate: exhaustive enumeration too large");
      exhaustive = true;
    } else if (cfg.mode == SamplingMode::automatic) {
      exhaustive = !cfg.per_solution_draws && n <= kMaxChooseN && m <= kMaxChooseN &&
                   choose_double(m, v) * choose_double(n, s) <= cfg.exhaustive_limit;
    }
    if (exhaustive) return genrm_problem_exhaustive(problem, s, v, cfg);
    return genrm_problem_monte_carlo(problem, s, v, cfg,
                                     derive_rng(cfg.seed, "genrm/" + problem.problem_id));
  });
}

}  // namespace veriscale
