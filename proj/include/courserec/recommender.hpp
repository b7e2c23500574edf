#ifndef COURSEREC_RECOMMENDER_HPP_
#define COURSEREC_RECOMMENDER_HPP_

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "courserec/model.hpp"

namespace courserec {

// ---------------------------------------------------------------------------
// Grades and recommendation status
// ---------------------------------------------------------------------------

enum class Grade { APlus, A, AMinus, BPlus, B, BMinus, C, D, F };

enum class Status {
  HighRecommendation,
  Recommended,
  LowRecommendation,
  StudentDecision,
  NotRecommended,
  AlreadyStudied,
  NotEnoughData,
};

constexpr std::string_view to_string(Grade g) noexcept {
  switch (g) {
    case Grade::APlus: return "A+";
    case Grade::A: return "A";
    case Grade::AMinus: return "A-";
    case Grade::BPlus: return "B+";
    case Grade::B: return "B";
    case Grade::BMinus: return "B-";
    case Grade::C: return "C";
    case Grade::D: return "D";
    case Grade::F: return "F";
  }
  return "N-A";
}

constexpr std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::HighRecommendation: return "High Recommendation";
    case Status::Recommended: return "Recommended";
    case Status::LowRecommendation: return "Low Recommendation";
    case Status::StudentDecision: return "Student Decision";
    case Status::NotRecommended: return "Not Recommended";
    case Status::AlreadyStudied: return "Already Studied";
    case Status::NotEnoughData: return "Not Enough Data";
  }
  return "";
}

/// Rank for the predicted tiers; higher is better. Sentinel statuses rank 0.
constexpr int status_rank(Status s) noexcept {
  switch (s) {
    case Status::HighRecommendation: return 5;
    case Status::Recommended: return 4;
    case Status::LowRecommendation: return 3;
    case Status::StudentDecision: return 2;
    case Status::NotRecommended: return 1;
    default: return 0;
  }
}

struct GradeStatus {
  Grade grade;
  Status status;
  friend bool operator==(const GradeStatus&, const GradeStatus&) = default;
};

/// Percentage-to-grade bands. Thresholds compare against the unrounded value.
constexpr GradeStatus status_of(double predicted_marks) noexcept {
  if (predicted_marks >= 90) return {Grade::APlus, Status::HighRecommendation};
  if (predicted_marks >= 85) return {Grade::A, Status::HighRecommendation};
  if (predicted_marks >= 80) return {Grade::AMinus, Status::HighRecommendation};
  if (predicted_marks >= 75) return {Grade::BPlus, Status::Recommended};
  if (predicted_marks >= 71) return {Grade::B, Status::Recommended};
  if (predicted_marks >= 68) return {Grade::BMinus, Status::Recommended};
  if (predicted_marks >= 61) return {Grade::C, Status::LowRecommendation};
  if (predicted_marks >= 50) return {Grade::D, Status::StudentDecision};
  return {Grade::F, Status::NotRecommended};
}

// ---------------------------------------------------------------------------
// Similarity and neighbor selection
// ---------------------------------------------------------------------------

enum class SimilaritySpace {
  CommonCourses,    // vectors restricted to courses both students studied
  ZeroFilledUnion,  // union of courses, missing marks read as 0
};

struct KnnConfig {
  int k = 10;
  int min_raters = 3;  // NotEnoughData when eligible neighbors <= min_raters
  SimilaritySpace space = SimilaritySpace::CommonCourses;

  void validate() const {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
    if (min_raters < 0) throw Error(ErrorKind::InvalidArgument, "min_raters must be >= 0");
  }
};

struct SimilarityScore {
  StudentId neighbor_id = 0;
  double value = 0.0;
  friend bool operator==(const SimilarityScore&, const SimilarityScore&) = default;
};

/// Cosine of the two mark vectors over their common courses. 0 when the
/// students share no course.
inline double cosine_similarity(const StudentRecord& a, const StudentRecord& b) noexcept {
  double dot = 0, norm_a = 0, norm_b = 0;
  auto ia = a.marks.begin();
  auto ib = b.marks.begin();
  while (ia != a.marks.end() && ib != b.marks.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      const double x = ia->second, y = ib->second;
      dot += x * y;
      norm_a += x * x;
      norm_b += y * y;
      ++ia;
      ++ib;
    }
  }
  if (norm_a == 0 || norm_b == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(norm_a) * std::sqrt(norm_b)), 0.0, 1.0);
}

/// Cosine over the union of both students' courses, absent marks as 0.
inline double cosine_similarity_union(const StudentRecord& a, const StudentRecord& b) noexcept {
  double dot = 0, norm_a = 0, norm_b = 0;
  for (const auto& [code, m] : a.marks) norm_a += double(m) * m;
  for (const auto& [code, m] : b.marks) norm_b += double(m) * m;
  for (const auto& [code, m] : a.marks) {
    if (auto it = b.marks.find(code); it != b.marks.end()) dot += double(m) * it->second;
  }
  if (norm_a == 0 || norm_b == 0) return 0.0;
  return std::clamp(dot / (std::sqrt(norm_a) * std::sqrt(norm_b)), 0.0, 1.0);
}

inline double similarity(const StudentRecord& a, const StudentRecord& b, SimilaritySpace space) {
  return space == SimilaritySpace::CommonCourses ? cosine_similarity(a, b)
                                                 : cosine_similarity_union(a, b);
}

/// Scores every rater of `course_code` (other than the target) against the
/// target, keeps strictly positive scores, and orders them by descending value
/// then ascending id. The target record may differ from the one stored in the
/// dataset (leave-one-out views pass a modified copy).
inline std::vector<SimilarityScore> eligible_neighbors(const Dataset& dataset,
                                                       const StudentRecord& target,
                                                       std::string_view course_code,
                                                       SimilaritySpace space = SimilaritySpace::CommonCourses) {
  const auto& raters = dataset.raters_of(course_code);
  std::vector<SimilarityScore> scores;
  scores.reserve(raters.size());
  for (StudentId id : raters) {
    if (id == target.id) continue;
    double value = similarity(target, dataset.student(id), space);
    if (value > 0.0) scores.push_back({id, value});
  }
  std::sort(scores.begin(), scores.end(), [](const auto& x, const auto& y) {
    return x.value != y.value ? x.value > y.value : x.neighbor_id < y.neighbor_id;
  });
  return scores;
}

inline std::vector<SimilarityScore> select_k_nearest(std::vector<SimilarityScore> scores,
                                                     const KnnConfig& config) {
  config.validate();
  if (scores.size() > static_cast<std::size_t>(config.k)) scores.resize(config.k);
  return scores;
}

/// Target average plus the similarity-weighted mean of each neighbor's
/// deviation from their own average, clamped to [0, 100].
inline double predict_marks(const StudentRecord& target, std::string_view course_code,
                            const std::vector<SimilarityScore>& neighbors, const Dataset& dataset) {
  const double target_avg = student_average(target);
  const std::string code(course_code);
  double weighted = 0, sim_sum = 0;
  for (const auto& n : neighbors) {
    const auto& neighbor = dataset.student(n.neighbor_id);
    auto it = neighbor.marks.find(code);
    if (it == neighbor.marks.end()) {
      throw Error(ErrorKind::NoActualMark, "neighbor " + std::to_string(n.neighbor_id) +
                                               " has no mark for " + code);
    }
    weighted += n.value * (it->second - student_average(neighbor));
    sim_sum += n.value;
  }
  if (!(sim_sum > 0.0)) {
    throw Error(ErrorKind::ZeroSimilaritySum, "neighbor similarities sum to zero for " + code);
  }
  return std::clamp(target_avg + weighted / sim_sum, double(kMinMarks), double(kMaxMarks));
}

// ---------------------------------------------------------------------------
// Recommendation
// ---------------------------------------------------------------------------

enum class Outcome { Predicted, AlreadyStudied, NotEnoughData };

struct Recommendation {
  Outcome outcome = Outcome::NotEnoughData;
  std::optional<double> predicted_marks;
  std::optional<Grade> grade;
  Status status = Status::NotEnoughData;
  int neighbors_used = 0;
  int eligible_neighbors = 0;

  static Recommendation already_studied() {
    return {Outcome::AlreadyStudied, std::nullopt, std::nullopt, Status::AlreadyStudied, 0, 0};
  }
  static Recommendation not_enough_data(int eligible) {
    return {Outcome::NotEnoughData, std::nullopt, std::nullopt, Status::NotEnoughData, 0, eligible};
  }
};

/// Recommendation for an explicit target record. `dataset` must contain the
/// course; the target need not be stored in it.
inline Recommendation recommend_for(const Dataset& dataset, const StudentRecord& target,
                                    std::string_view course_code, const KnnConfig& config) {
  config.validate();
  if (!dataset.has_course(course_code)) {
    throw Error(ErrorKind::UnknownCourse, "unknown course " + std::string(course_code),
                std::string(course_code));
  }
  if (target.has_mark(course_code)) return Recommendation::already_studied();
  if (target.marks.empty()) {
    throw Error(ErrorKind::EmptyHistory,
                "student " + std::to_string(target.id) + " has no marks; use popular/top courses");
  }

  auto scores = eligible_neighbors(dataset, target, course_code, config.space);
  const int eligible = static_cast<int>(scores.size());
  if (eligible <= config.min_raters) return Recommendation::not_enough_data(eligible);

  auto nearest = select_k_nearest(std::move(scores), config);
  const double marks = predict_marks(target, course_code, nearest, dataset);
  const auto gs = status_of(marks);
  return {Outcome::Predicted, marks, gs.grade, gs.status, static_cast<int>(nearest.size()), eligible};
}

inline Recommendation recommend(const Dataset& dataset, StudentId student_id,
                                std::string_view course_code, const KnnConfig& config = {}) {
  const auto& student = dataset.student(student_id);
  return recommend_for(dataset, student, course_code, config);
}

// ---------------------------------------------------------------------------
// Cold-start lists
// ---------------------------------------------------------------------------

struct PopularCourse {
  Course course;
  std::size_t rater_count = 0;
};

struct TopCourse {
  Course course;
  std::size_t rater_count = 0;
  double average_marks = 0.0;  // unrounded

  long display_average() const { return std::lround(average_marks); }
};

/// Courses by number of raters, most first; ties by code.
inline std::vector<PopularCourse> popular_courses(const Dataset& dataset, std::size_t limit = 20) {
  std::vector<PopularCourse> out;
  for (const auto& [code, course] : dataset.catalogue()) {
    out.push_back({course, dataset.rater_count(code)});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.rater_count > b.rater_count;  // catalogue is already code-ordered
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

/// Courses with more than `min_raters` raters by mean mark, best first; ties
/// by code.
inline std::vector<TopCourse> top_courses(const Dataset& dataset, std::size_t limit = 20,
                                          std::size_t min_raters = 3) {
  std::vector<TopCourse> out;
  for (const auto& [code, raters] : dataset.course_to_raters()) {
    if (raters.size() <= min_raters) continue;
    long long sum = 0;
    for (StudentId id : raters) sum += dataset.student(id).marks.at(code);
    out.push_back({dataset.course(code), raters.size(),
                   static_cast<double>(sum) / static_cast<double>(raters.size())});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.average_marks > b.average_marks;
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

}  // namespace courserec

#endif  // COURSEREC_RECOMMENDER_HPP_
