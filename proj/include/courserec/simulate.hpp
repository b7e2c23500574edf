#ifndef COURSEREC_SIMULATE_HPP_
#define COURSEREC_SIMULATE_HPP_

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "courserec/model.hpp"

namespace courserec {

struct SimulationConfig {
  std::uint64_t seed = 0;
  int students_per_degree = 40;
  int marks_min = 40;
  int marks_max = 99;
  StudentId id_start = 1001;

  void validate() const {
    if (students_per_degree < 1) {
      throw Error(ErrorKind::InvalidArgument, "students_per_degree must be >= 1");
    }
    if (!(0 <= marks_min && marks_min <= marks_max && marks_max <= 100)) {
      throw Error(ErrorKind::InvalidArgument, "marks range must satisfy 0 <= min <= max <= 100");
    }
    if (id_start < 1) throw Error(ErrorKind::InvalidArgument, "id_start must be positive");
  }
};

/// Generates a synthetic roster: students_per_degree students per scheme.
/// Each student studies semesters 1..n of their scheme, n uniform in
/// [1, semester_count], with one uniform integer mark in [marks_min, marks_max]
/// per course.
///
/// Draw order is fixed: schemes by degree name, then students in id order,
/// then for each student one draw for n followed by one draw per course in
/// scheme order. Ids run sequentially from id_start in that same order.
inline std::vector<StudentRecord> simulate(std::vector<DegreeScheme> schemes,
                                           const SimulationConfig& config) {
  config.validate();
  if (schemes.empty()) throw Error(ErrorKind::EmptySchemes, "no degree schemes to simulate");
  std::sort(schemes.begin(), schemes.end(),
            [](const auto& a, const auto& b) { return a.degree_name < b.degree_name; });

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> mark_dist(config.marks_min, config.marks_max);

  std::vector<StudentRecord> roster;
  roster.reserve(schemes.size() * static_cast<std::size_t>(config.students_per_degree));
  StudentId next_id = config.id_start;
  for (const auto& scheme : schemes) {
    if (scheme.semesters.empty()) {
      throw Error(ErrorKind::GapInSemesters, "scheme '" + scheme.degree_name + "' has no semesters");
    }
    std::uniform_int_distribution<int> semester_dist(1, scheme.semester_count());
    for (int i = 0; i < config.students_per_degree; ++i) {
      StudentRecord student;
      student.id = next_id++;
      student.degree_name = scheme.degree_name;
      student.semesters_studied = semester_dist(rng);
      for (const auto& code : scheme.courses_through(student.semesters_studied)) {
        student.marks.emplace(code, mark_dist(rng));
      }
      roster.push_back(std::move(student));
    }
  }
  return roster;
}

}  // namespace courserec

#endif  // COURSEREC_SIMULATE_HPP_
