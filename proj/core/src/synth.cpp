#include "veriscale/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "veriscale/binomial.hpp"
#include "veriscale/rng.hpp"

namespace veriscale {

namespace {

constexpr double kOracleSubsetCap = 1e6;
// Subset enumeration uses 64-bit masks.
constexpr int kOracleMaxElements = 63;

double standard_normal(Rng& rng) {
  const double u1 = 1.0 - rng.uniform();  // (0, 1]
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

// Marsaglia-Tsang; shapes below 1 use the boost Gamma(a) = Gamma(a+1) * U^(1/a).
double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = 1.0 - rng.uniform();
    return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = standard_normal(rng);
    const double v = (1.0 + c * x) * (1.0 + c * x) * (1.0 + c * x);
    if (v <= 0.0) continue;
    const double u = 1.0 - rng.uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double beta_draw(Rng& rng, double a, double b) {
  const double x = gamma_draw(rng, a);
  const double y = gamma_draw(rng, b);
  return x / (x + y);
}

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error(std::string(name) + " must lie in [0,1]");
}

// Applies fn to every k-subset bitmask of n elements (Gosper's hack),
// in increasing mask order.
template <typename Fn>
void for_each_subset_mask(int n, int k, Fn&& fn) {
  if (k == 0 || k > n) throw std::domain_error("subset size out of range");
  const std::uint64_t count = static_cast<std::uint64_t>(choose(n, k));
  std::uint64_t mask = (k == 64) ? ~0ULL : ((1ULL << k) - 1);
  for (std::uint64_t i = 0; i < count; ++i) {
    fn(mask);
    const std::uint64_t c = mask & (0 - mask);
    const std::uint64_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

void check_oracle_size(double n_subsets, int n_elements) {
  if (n_elements > kOracleMaxElements)
    throw std::domain_error("oracle enumeration limited to 63 elements");
  if (n_subsets > kOracleSubsetCap)
    throw std::domain_error("oracle enumeration too large (subset cap 1e6)");
}

std::vector<double> full_aggregate_scores(const ProblemRecord& problem, Aggregation aggregation) {
  std::vector<double> scores;
  scores.reserve(problem.solutions.size());
  for (const auto& sol : problem.solutions) {
    if (sol.verification_scores.empty())
      throw std::domain_error("oracle requires at least one verification per solution");
    scores.push_back(aggregate_score(sol.verification_scores, aggregation));
  }
  return scores;
}

// Mean correctness of the top-scored members of the subset (analytic tie
// average).
double top_pick_value(const std::vector<double>& scores, const std::vector<int>& correct,
                      std::uint64_t mask) {
  double best = -1.0;
  int tie = 0;
  int tie_correct = 0;
  for (std::uint64_t bits = mask; bits; bits &= bits - 1) {
    const int idx = __builtin_ctzll(bits);
    const double score = scores[static_cast<std::size_t>(idx)];
    if (score > best) {
      best = score;
      tie = 1;
      tie_correct = correct[static_cast<std::size_t>(idx)];
    } else if (score == best) {
      ++tie;
      tie_correct += correct[static_cast<std::size_t>(idx)];
    }
  }
  return static_cast<double>(tie_correct) / static_cast<double>(tie);
}

}  // namespace

void SynthConfig::validate() const {
  if (n_problems < 1 || n_solutions < 1 || n_verifications < 1)
    throw std::domain_error("n_problems, n_solutions, n_verifications must be >= 1");
  check_probability(difficulty, "difficulty");
  check_probability(verifier_tpr, "verifier_tpr");
  check_probability(verifier_fpr, "verifier_fpr");
  if (difficulty_beta && (!(difficulty_beta->first > 0.0) || !(difficulty_beta->second > 0.0)))
    throw std::domain_error("difficulty_beta parameters must be > 0");
  if (distractors < 1) throw std::domain_error("distractors must be >= 1");
  if (!(distractor_decay > 0.0 && distractor_decay <= 1.0))
    throw std::domain_error("distractor_decay must lie in (0,1]");
  if (!(score_noise >= 0.0 && score_noise <= 0.5))
    throw std::domain_error("score_noise must lie in [0,0.5] so scores keep their verdicts");
}

Dataset generate(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);

  // Geometric popularity profile over the distractor pool.
  std::vector<double> cumulative(static_cast<std::size_t>(config.distractors));
  {
    double weight = 1.0;
    double total = 0.0;
    for (int j = 0; j < config.distractors; ++j) {
      total += weight;
      cumulative[static_cast<std::size_t>(j)] = total;
      weight *= config.distractor_decay;
    }
    for (auto& c : cumulative) c /= total;
  }

  Dataset dataset;
  dataset.metadata["generator"] = "synthetic";
  dataset.metadata["seed"] = std::to_string(config.seed);
  for (int i = 0; i < config.n_problems; ++i) {
    ProblemRecord problem;
    char id[16];
    std::snprintf(id, sizeof(id), "p%04d", i);
    problem.problem_id = id;
    problem.gt_answer = "A";
    const double p_correct = config.difficulty_beta
                                 ? beta_draw(rng, config.difficulty_beta->first,
                                             config.difficulty_beta->second)
                                 : config.difficulty;
    for (int j = 0; j < config.n_solutions; ++j) {
      SolutionRecord sol;
      sol.correct = rng.bernoulli(p_correct);
      if (sol.correct) {
        sol.answer = problem.gt_answer;
      } else {
        const double u = rng.uniform();
        const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
        const auto pick = it == cumulative.end() ? cumulative.size() - 1
                                                 : static_cast<std::size_t>(it - cumulative.begin());
        sol.answer = "W" + std::to_string(pick);
      }
      for (int k = 0; k < config.n_verifications; ++k) {
        const bool verdict = rng.bernoulli(sol.correct ? config.verifier_tpr : config.verifier_fpr);
        const double noise = (2.0 * rng.uniform() - 1.0) * config.score_noise;
        sol.verification_scores.push_back(
            std::clamp((verdict ? 1.0 : 0.0) + noise, 0.0, 1.0));
      }
      problem.solutions.push_back(std::move(sol));
    }
    dataset.problems.push_back(std::move(problem));
  }
  dataset.validate();
  return dataset;
}

double brute_force_best_of_k(const ProblemRecord& problem, int k, Aggregation aggregation) {
  const int n = static_cast<int>(problem.solutions.size());
  if (k < 1 || k > n) throw std::domain_error("k must satisfy 1 <= k <= N");
  check_oracle_size(choose_double(n, k), n);
  const std::vector<double> scores = full_aggregate_scores(problem, aggregation);
  std::vector<int> correct;
  for (const auto& sol : problem.solutions) correct.push_back(sol.correct ? 1 : 0);
  double acc = 0.0;
  for_each_subset_mask(n, k, [&](std::uint64_t mask) {
    acc += top_pick_value(scores, correct, mask);
  });
  return acc / choose_double(n, k);
}

double brute_force_sc(const ProblemRecord& problem, int k) {
  const int n = static_cast<int>(problem.solutions.size());
  if (k < 1 || k > n) throw std::domain_error("k must satisfy 1 <= k <= N");
  check_oracle_size(choose_double(n, k), n);

  // Intern answers; tally subsets by modal-tie size exactly as integers.
  std::vector<std::string> names;
  std::vector<int> answer_id;
  for (const auto& sol : problem.solutions) {
    auto it = std::find(names.begin(), names.end(), sol.answer);
    if (it == names.end()) {
      names.push_back(sol.answer);
      answer_id.push_back(static_cast<int>(names.size()) - 1);
    } else {
      answer_id.push_back(static_cast<int>(it - names.begin()));
    }
  }
  const auto gt_it = std::find(names.begin(), names.end(), problem.gt_answer);
  const int gt_id = gt_it == names.end() ? -1 : static_cast<int>(gt_it - names.begin());

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(k) + 1, 0);
  std::vector<int> votes(names.size());
  for_each_subset_mask(n, k, [&](std::uint64_t mask) {
    std::fill(votes.begin(), votes.end(), 0);
    for (std::uint64_t bits = mask; bits; bits &= bits - 1)
      ++votes[static_cast<std::size_t>(answer_id[static_cast<std::size_t>(__builtin_ctzll(bits))])];
    int best = 0;
    int tie = 0;
    bool gt_modal = false;
    for (std::size_t id = 0; id < votes.size(); ++id) {
      if (votes[id] == 0) continue;
      if (votes[id] > best) {
        best = votes[id];
        tie = 1;
        gt_modal = static_cast<int>(id) == gt_id;
      } else if (votes[id] == best) {
        ++tie;
        gt_modal = gt_modal || static_cast<int>(id) == gt_id;
      }
    }
    if (gt_modal) ++counts[static_cast<std::size_t>(tie)];
  });

  // Subsets with a modal tie of size t containing the ground truth
  // contribute 1/t each.
  double acc = 0.0;
  for (std::size_t t = 1; t < counts.size(); ++t) {
    if (counts[t]) acc += static_cast<double>(counts[t]) / static_cast<double>(t);
  }
  return acc / choose_double(n, k);
}

double brute_force_genrm(const ProblemRecord& problem, int s, int v, Aggregation aggregation) {
  const int n = static_cast<int>(problem.solutions.size());
  const int m = problem.min_verifications();
  if (s < 1 || s > n) throw std::domain_error("s must satisfy 1 <= s <= N");
  if (v < 1 || v > m) throw std::domain_error("v must satisfy 1 <= v <= M");
  check_oracle_size(choose_double(n, s) * choose_double(m, v), std::max(n, m));

  std::vector<int> correct;
  for (const auto& sol : problem.solutions) correct.push_back(sol.correct ? 1 : 0);
  std::vector<double> scores(static_cast<std::size_t>(n));
  double acc = 0.0;
  for_each_subset_mask(m, v, [&](std::uint64_t ver_mask) {
    for (int j = 0; j < n; ++j) {
      double sum = 0.0;
      int cnt = 0;
      for (std::uint64_t bits = ver_mask; bits; bits &= bits - 1) {
        const double score = problem.solutions[static_cast<std::size_t>(j)]
                                 .verification_scores[static_cast<std::size_t>(
                                     __builtin_ctzll(bits))];
        sum += aggregation == Aggregation::mean_score
                   ? score
                   : (verdict_from_score(score) ? 1.0 : 0.0);
        ++cnt;
      }
      scores[static_cast<std::size_t>(j)] = sum / static_cast<double>(cnt);
    }
    for_each_subset_mask(n, s, [&](std::uint64_t sol_mask) {
      acc += top_pick_value(scores, correct, sol_mask);
    });
  });
  return acc / (choose_double(n, s) * choose_double(m, v));
}

SynthConfig precise_verifier_scenario() {
  SynthConfig config;
  config.n_problems = 96;
  config.n_solutions = 64;
  config.n_verifications = 16;
  config.difficulty_beta = {{5.0, 6.0}};
  config.distractors = 4;
  config.distractor_decay = 0.6;
  config.verifier_tpr = 0.58;
  config.verifier_fpr = 0.42;
  config.score_noise = 0.3;
  config.seed = 20240913;
  return config;
}

SynthConfig uninformative_verifier_scenario() {
  SynthConfig config;
  config.n_problems = 64;
  config.n_solutions = 32;
  config.n_verifications = 8;
  config.difficulty = 0.6;
  config.difficulty_beta.reset();
  config.distractors = 6;
  config.distractor_decay = 1.0;
  config.verifier_tpr = 0.5;
  config.verifier_fpr = 0.5;
  config.score_noise = 0.25;
  config.seed = 7071;
  return config;
}

SynthConfig coverage_limited_scenario() {
  SynthConfig config;
  config.n_problems = 64;
  config.n_solutions = 32;
  config.n_verifications = 16;
  config.difficulty = 0.08;
  config.difficulty_beta.reset();
  config.distractors = 5;
  config.distractor_decay = 0.5;
  config.verifier_tpr = 0.92;
  config.verifier_fpr = 0.08;
  config.score_noise = 0.05;
  config.seed = 4242;
  return config;
}

}  // namespace veriscale
