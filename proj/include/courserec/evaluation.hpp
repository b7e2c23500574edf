#ifndef COURSEREC_EVALUATION_HPP_
#define COURSEREC_EVALUATION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <iomanip>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "courserec/recommender.hpp"

namespace courserec {

struct Observation {
  StudentId student_id = 0;
  CourseCode course_code;
  int actual_marks = 0;
  double predicted_marks = 0.0;
  double absolute_error = 0.0;
  int neighbors_used = 0;
};

enum class SkipReason { NotEnoughData, EmptyHistory, AlreadyStudied };

constexpr std::string_view to_string(SkipReason r) noexcept {
  switch (r) {
    case SkipReason::NotEnoughData: return "NotEnoughData";
    case SkipReason::EmptyHistory: return "EmptyHistory";
    case SkipReason::AlreadyStudied: return "AlreadyStudied";
  }
  return "";
}

struct Skip {
  StudentId student_id = 0;
  CourseCode course_code;
  SkipReason reason = SkipReason::NotEnoughData;
};

using LeaveOneOutResult = std::variant<Observation, Skip>;

/// Withholds the student's mark for `course_code`, predicts it from the
/// remaining data and compares. Only that single mark is removed: the
/// student's average and the course's rater set both exclude it.
inline LeaveOneOutResult leave_one_out_predict(const Dataset& dataset, StudentId student_id,
                                               const CourseCode& course_code,
                                               const KnnConfig& config = {}) {
  const auto& student = dataset.student(student_id);
  if (!dataset.has_course(course_code)) {
    throw Error(ErrorKind::UnknownCourse, "unknown course " + course_code, course_code);
  }
  auto it = student.marks.find(course_code);
  if (it == student.marks.end()) {
    throw Error(ErrorKind::NoActualMark,
                "student " + std::to_string(student_id) + " has no mark for " + course_code);
  }
  const int actual = it->second;

  // The target is skipped by id when scanning raters, so withholding the mark
  // from a copy of the target record is equivalent to removing it from the
  // dataset.
  StudentRecord withheld = student;
  withheld.marks.erase(course_code);
  if (withheld.marks.empty()) return Skip{student_id, course_code, SkipReason::EmptyHistory};

  auto rec = recommend_for(dataset, withheld, course_code, config);
  switch (rec.outcome) {
    case Outcome::AlreadyStudied: return Skip{student_id, course_code, SkipReason::AlreadyStudied};
    case Outcome::NotEnoughData: return Skip{student_id, course_code, SkipReason::NotEnoughData};
    case Outcome::Predicted: break;
  }
  const double predicted = *rec.predicted_marks;
  return Observation{student_id, course_code, actual, predicted, std::abs(predicted - actual),
                     rec.neighbors_used};
}

struct ErrorQuantiles {
  double p50 = 0, p90 = 0, max = 0;
};

struct EvaluationReport {
  std::vector<Observation> observations;
  std::vector<Skip> skipped;
  double mae = 0.0;
  double rmse = 0.0;
  ErrorQuantiles absolute_error_quantiles;
  ErrorQuantiles relative_error_quantiles;  // |error| / actual
};

/// Nearest-rank quantile of an unsorted sample.
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

/// Fills mae / rmse / quantiles from `report.observations` (ordered fold).
inline void aggregate(EvaluationReport& report) {
  const auto n = report.observations.size();
  if (n == 0) {
    report.mae = report.rmse = 0.0;
    report.absolute_error_quantiles = report.relative_error_quantiles = {};
    return;
  }
  double abs_sum = 0, sq_sum = 0;
  std::vector<double> abs_errors, rel_errors;
  for (const auto& o : report.observations) {
    abs_sum += o.absolute_error;
    sq_sum += o.absolute_error * o.absolute_error;
    abs_errors.push_back(o.absolute_error);
    if (o.actual_marks > 0) rel_errors.push_back(o.absolute_error / o.actual_marks);
  }
  report.mae = abs_sum / static_cast<double>(n);
  report.rmse = std::sqrt(sq_sum / static_cast<double>(n));
  report.absolute_error_quantiles = {quantile(abs_errors, 0.5), quantile(abs_errors, 0.9),
                                     *std::max_element(abs_errors.begin(), abs_errors.end())};
  if (!rel_errors.empty()) {
    report.relative_error_quantiles = {quantile(rel_errors, 0.5), quantile(rel_errors, 0.9),
                                       *std::max_element(rel_errors.begin(), rel_errors.end())};
  }
}

struct SampleSpec {
  int students = 50;
  int courses_per_student = 2;
  std::uint64_t seed = 0;
};

/// Seeded leave-one-out run: samples `students` distinct students holding at
/// least `courses_per_student` marks, then `courses_per_student` of their
/// courses each, and predicts every sampled mark with it withheld. Skipped
/// observations are reported separately and excluded from MAE / RMSE.
inline EvaluationReport evaluate(const Dataset& dataset, const SampleSpec& spec,
                                 const KnnConfig& config = {}) {
  config.validate();
  if (spec.students < 1 || spec.courses_per_student < 1) {
    throw Error(ErrorKind::InvalidArgument, "sample sizes must be >= 1");
  }
  std::vector<StudentId> qualifying;
  for (const auto& [id, s] : dataset.students()) {
    if (s.marks.size() >= static_cast<std::size_t>(spec.courses_per_student)) qualifying.push_back(id);
  }
  if (qualifying.size() < static_cast<std::size_t>(spec.students)) {
    throw Error(ErrorKind::InsufficientData,
                "need " + std::to_string(spec.students) + " students with >= " +
                    std::to_string(spec.courses_per_student) + " marks, found " +
                    std::to_string(qualifying.size()));
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<StudentId> chosen;
  std::sample(qualifying.begin(), qualifying.end(), std::back_inserter(chosen), spec.students, rng);

  EvaluationReport report;
  for (StudentId id : chosen) {
    std::vector<CourseCode> studied;
    for (const auto& [code, m] : dataset.student(id).marks) studied.push_back(code);
    std::vector<CourseCode> codes;
    std::sample(studied.begin(), studied.end(), std::back_inserter(codes), spec.courses_per_student,
                rng);
    for (const auto& code : codes) {
      auto result = leave_one_out_predict(dataset, id, code, config);
      if (auto* obs = std::get_if<Observation>(&result)) {
        report.observations.push_back(std::move(*obs));
      } else {
        report.skipped.push_back(std::get<Skip>(std::move(result)));
      }
    }
  }
  aggregate(report);
  return report;
}

inline std::string format_report_csv(const EvaluationReport& report) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "student_id,course_code,actual,predicted,abs_error\n";
  for (const auto& o : report.observations) {
    out << o.student_id << ',' << o.course_code << ',' << o.actual_marks << ',' << o.predicted_marks
        << ',' << o.absolute_error << '\n';
  }
  out << "# n=" << report.observations.size() << " skipped=" << report.skipped.size()
      << " mae=" << report.mae << " rmse=" << report.rmse << '\n';
  return out.str();
}

}  // namespace courserec

#endif  // COURSEREC_EVALUATION_HPP_
