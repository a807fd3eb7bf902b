#include "veriscale/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

#include "veriscale/rng.hpp"

namespace veriscale {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line_no, const std::string& what) {
  std::ostringstream oss;
  oss << origin << ":" << line_no << ": " << what;
  throw DataError(oss.str());
}

ProblemRecord parse_problem(const json& obj, const std::string& origin, std::size_t line_no) {
  if (!obj.is_object()) fail(origin, line_no, "record is not an object");
  ProblemRecord problem;
  try {
    problem.problem_id = obj.at("problem_id").get<std::string>();
    problem.gt_answer = canonical_answer(obj.at("gt_answer").get<std::string>());
    const auto& solutions = obj.at("solutions");
    if (!solutions.is_array() || solutions.empty())
      fail(origin, line_no, "solutions must be a non-empty array");
    for (const auto& s : solutions) {
      SolutionRecord sol;
      sol.answer = canonical_answer(s.at("answer").get<std::string>());
      sol.correct = s.at("correct").get<bool>();
      if (s.contains("verification_scores")) {
        sol.verification_scores = s.at("verification_scores").get<std::vector<double>>();
      }
      for (double score : sol.verification_scores) {
        if (!(score >= 0.0 && score <= 1.0))
          fail(origin, line_no, "verification score outside [0,1] in problem '" +
                                    problem.problem_id + "'");
      }
      if (s.contains("verification_verdicts") && !s.at("verification_verdicts").is_null()) {
        const auto verdicts = s.at("verification_verdicts").get<std::vector<bool>>();
        if (verdicts.size() != sol.verification_scores.size())
          fail(origin, line_no, "verdict list length differs from score list in problem '" +
                                    problem.problem_id + "'");
        for (std::size_t i = 0; i < verdicts.size(); ++i) {
          if (verdicts[i] != verdict_from_score(sol.verification_scores[i]))
            fail(origin, line_no, "verdict contradicts its score in problem '" +
                                      problem.problem_id + "'");
        }
      }
      problem.solutions.push_back(std::move(sol));
    }
  } catch (const json::exception& e) {
    fail(origin, line_no, std::string("schema error: ") + e.what());
  }
  return problem;
}

json problem_to_json(const ProblemRecord& problem) {
  json solutions = json::array();
  for (const auto& sol : problem.solutions) {
    json verdicts = json::array();
    for (double score : sol.verification_scores) verdicts.push_back(verdict_from_score(score));
    solutions.push_back({{"answer", sol.answer},
                         {"correct", sol.correct},
                         {"verification_scores", sol.verification_scores},
                         {"verification_verdicts", verdicts}});
  }
  return json{{"problem_id", problem.problem_id},
              {"gt_answer", problem.gt_answer},
              {"solutions", solutions}};
}

}  // namespace

std::string canonical_answer(const std::string& raw) { return trim(raw); }

int ProblemRecord::min_verifications() const {
  if (solutions.empty()) return 0;
  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (const auto& sol : solutions) m = std::min(m, sol.verification_scores.size());
  return static_cast<int>(m);
}

int Dataset::usable_solutions() const {
  if (problems.empty()) return 0;
  std::size_t m = std::numeric_limits<std::size_t>::max();
  for (const auto& p : problems) m = std::min(m, p.solutions.size());
  return static_cast<int>(m);
}

int Dataset::usable_verifications() const {
  if (problems.empty()) return 0;
  int m = std::numeric_limits<int>::max();
  for (const auto& p : problems) m = std::min(m, p.min_verifications());
  return m;
}

bool Dataset::ragged() const {
  const int n_sol = usable_solutions();
  const int n_ver = usable_verifications();
  for (const auto& p : problems) {
    if (static_cast<int>(p.solutions.size()) != n_sol) return true;
    for (const auto& sol : p.solutions) {
      if (static_cast<int>(sol.verification_scores.size()) != n_ver) return true;
    }
  }
  return false;
}

void Dataset::validate(bool allow_ragged) const {
  if (problems.empty()) throw DataError("empty dataset");
  std::unordered_set<std::string> ids;
  for (const auto& p : problems) {
    if (p.problem_id.empty()) throw DataError("problem with empty problem_id");
    if (!ids.insert(p.problem_id).second)
      throw DataError("duplicate problem_id '" + p.problem_id + "'");
    if (p.solutions.empty())
      throw DataError("problem '" + p.problem_id + "' has no solutions");
    if (p.gt_answer.empty())
      throw DataError("problem '" + p.problem_id + "' has an empty gt_answer");
    for (const auto& sol : p.solutions) {
      if (sol.answer.empty())
        throw DataError("problem '" + p.problem_id + "' has a solution with an empty answer");
      const bool matches = (sol.answer == p.gt_answer);
      if (sol.correct != matches)
        throw DataError("problem '" + p.problem_id +
                        "': correct flag inconsistent with answer comparison");
    }
  }
  if (!allow_ragged && ragged())
    throw DataError(
        "non-rectangular grid (solution or verification counts differ); "
        "pass the ragged flag to accept it");
}

Dataset from_jsonl(const std::string& text, const std::string& origin, bool allow_ragged) {
  Dataset dataset;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail(origin, line_no, std::string("malformed line: ") + e.what());
    }
    dataset.problems.push_back(parse_problem(obj, origin, line_no));
  }
  dataset.validate(allow_ragged);
  return dataset;
}

Dataset load_jsonl(const std::string& path, bool allow_ragged) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_jsonl(buffer.str(), path, allow_ragged);
}

std::string to_jsonl(const Dataset& dataset) {
  std::ostringstream out;
  for (const auto& p : dataset.problems) out << problem_to_json(p).dump() << "\n";
  return out.str();
}

void save_jsonl(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << to_jsonl(dataset);
  if (!out) throw DataError("write failed for '" + path + "'");
}

std::vector<VerificationExample> collect_verifications(const Dataset& dataset) {
  std::vector<VerificationExample> out;
  for (const auto& p : dataset.problems) {
    for (const auto& sol : p.solutions) {
      for (double score : sol.verification_scores) {
        out.push_back({p.problem_id, sol.answer, sol.correct, verdict_from_score(score)});
      }
    }
  }
  return out;
}

std::vector<VerificationExample> filter_verifications(
    const std::vector<VerificationExample>& examples) {
  std::vector<VerificationExample> out;
  for (const auto& e : examples) {
    if (e.verdict == e.solution_correct) out.push_back(e);
  }
  return out;
}

std::vector<VerificationExample> balance_verdicts(const std::vector<VerificationExample>& examples,
                                                  std::uint64_t seed, std::string* warning) {
  std::size_t n_yes = 0;
  for (const auto& e : examples) n_yes += e.verdict ? 1 : 0;
  const std::size_t n_no = examples.size() - n_yes;
  const std::size_t target = std::min(n_yes, n_no);
  if (warning) warning->clear();
  if (target == 0) {
    if (warning && !examples.empty())
      *warning = "one verdict class is empty; balanced output is empty";
    return {};
  }

  // Choose which examples of the majority class to keep, uniformly at
  // random, then emit in original order.
  const bool majority_is_yes = n_yes > n_no;
  const std::size_t majority_count = std::max(n_yes, n_no);
  std::vector<char> keep(examples.size(), 1);
  if (majority_count > target) {
    Rng rng = derive_rng(seed, "balance-verdicts");
    std::vector<int> kept_positions =
        rng.sample_indices(static_cast<int>(majority_count), static_cast<int>(target));
    std::vector<char> kept_in_class(majority_count, 0);
    for (int pos : kept_positions) kept_in_class[static_cast<std::size_t>(pos)] = 1;
    std::size_t class_pos = 0;
    for (std::size_t i = 0; i < examples.size(); ++i) {
      if (examples[i].verdict == majority_is_yes) {
        keep[i] = kept_in_class[class_pos];
        ++class_pos;
      }
    }
  }
  std::vector<VerificationExample> out;
  out.reserve(2 * target);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    if (keep[i]) out.push_back(examples[i]);
  }
  return out;
}

}  // namespace veriscale
