#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace veriscale {

// Raised for malformed or inconsistent record files.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A verification score at or above this threshold counts as a Yes verdict.
inline constexpr double kVerdictThreshold = 0.5;

inline bool verdict_from_score(double score) { return score >= kVerdictThreshold; }

// One sampled solution attempt for a problem, with the verification scores
// assigned to it by repeated verifier calls.
struct SolutionRecord {
  std::string answer;
  bool correct = false;
  std::vector<double> verification_scores;

  bool operator==(const SolutionRecord&) const = default;
};

struct ProblemRecord {
  std::string problem_id;
  std::string gt_answer;
  std::vector<SolutionRecord> solutions;

  bool operator==(const ProblemRecord&) const = default;

  // Smallest verification count across this problem's solutions; 0 when the
  // problem has no solutions.
  int min_verifications() const;
};

struct Dataset {
  std::vector<ProblemRecord> problems;
  // Free-form run information (generator settings, source notes). Never
  // serialized into record files; loaded datasets always have it empty.
  std::map<std::string, std::string> metadata;

  bool operator==(const Dataset& other) const { return problems == other.problems; }

  std::size_t n_problems() const { return problems.size(); }

  // Largest solution count usable for every problem (the minimum across
  // problems); 0 for an empty dataset.
  int usable_solutions() const;

  // Largest verification count usable for every solution of every problem.
  int usable_verifications() const;

  // True when solution or verification counts differ across the dataset.
  bool ragged() const;

  // Throws DataError unless every problem has a non-empty id, ids are unique,
  // and every correctness flag matches answer == gt_answer. Non-rectangular
  // grids are rejected unless allow_ragged; estimators then only accept
  // (s, v) within the usable_* minima.
  void validate(bool allow_ragged = false) const;
};

// Whitespace-trimmed copy; answers are compared as exact strings after
// trimming.
std::string canonical_answer(const std::string& raw);

// JSONL record I/O. One JSON object per line:
//   {"problem_id": ..., "gt_answer": ..., "solutions": [
//       {"answer": ..., "correct": ..., "verification_scores": [...],
//        "verification_verdicts": [...]}, ...]}
// verification_verdicts is optional on input (recomputed from scores) and
// always written on output.
Dataset load_jsonl(const std::string& path, bool allow_ragged = false);
void save_jsonl(const Dataset& dataset, const std::string& path);

std::string to_jsonl(const Dataset& dataset);
Dataset from_jsonl(const std::string& text, const std::string& origin = "<string>",
                   bool allow_ragged = false);

// Verifier fine-tuning data preparation ------------------------------------

// One (solution, verdict) training pair as used for verifier fine-tuning.
struct VerificationExample {
  std::string problem_id;
  std::string answer;
  bool solution_correct = false;
  bool verdict = false;

  bool operator==(const VerificationExample&) const = default;
};

// Flattens a dataset into one example per verification score.
std::vector<VerificationExample> collect_verifications(const Dataset& dataset);

// Keeps only examples whose verdict agrees with the solution's correctness
// label. Order-preserving and idempotent.
std::vector<VerificationExample> filter_verifications(
    const std::vector<VerificationExample>& examples);

// Downsamples the majority verdict class uniformly at random so Yes and No
// counts match. Order-preserving; output size is 2 * min(#Yes, #No). Sets
// *warning when one class is empty (result is then empty too).
std::vector<VerificationExample> balance_verdicts(
    const std::vector<VerificationExample>& examples, std::uint64_t seed,
    std::string* warning = nullptr);

}  // namespace veriscale
