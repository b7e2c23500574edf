#ifndef COURSEREC_MODEL_HPP_
#define COURSEREC_MODEL_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include "courserec/error.hpp"

namespace courserec {

using StudentId = std::int64_t;
using CourseCode = std::string;

inline constexpr int kMinMarks = 0;
inline constexpr int kMaxMarks = 100;

enum class CourseType { Required, Elective };

constexpr std::string_view to_string(CourseType type) noexcept {
  return type == CourseType::Required ? "Required" : "Elective";
}

/// Case-insensitive parse of "Required" / "Elective".
inline std::optional<CourseType> parse_course_type(std::string_view text) {
  std::string lowered(text);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lowered == "required") return CourseType::Required;
  if (lowered == "elective") return CourseType::Elective;
  return std::nullopt;
}

/// Uppercase letters and digits only, non-empty.
inline bool is_valid_course_code(std::string_view code) noexcept {
  return !code.empty() && std::all_of(code.begin(), code.end(), [](char c) {
    return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  });
}

inline bool is_valid_mark(int marks) noexcept { return marks >= kMinMarks && marks <= kMaxMarks; }

struct Course {
  CourseCode code;
  std::string title;
  CourseType type = CourseType::Required;

  friend bool operator==(const Course&, const Course&) = default;
};

/// Per-degree study scheme. semesters[0] is semester 1.
struct DegreeScheme {
  std::string degree_name;
  std::vector<std::vector<CourseCode>> semesters;

  int semester_count() const noexcept { return static_cast<int>(semesters.size()); }

  /// Courses of semesters 1..n in scheme order.
  std::vector<CourseCode> courses_through(int n) const {
    std::vector<CourseCode> out;
    for (int s = 0; s < n && s < semester_count(); ++s) {
      out.insert(out.end(), semesters[s].begin(), semesters[s].end());
    }
    return out;
  }

  friend bool operator==(const DegreeScheme&, const DegreeScheme&) = default;
};

struct StudentRecord {
  StudentId id = 0;
  std::string degree_name;
  int semesters_studied = 1;
  std::map<CourseCode, int> marks;

  bool has_mark(std::string_view code) const { return marks.find(std::string(code)) != marks.end(); }

  friend bool operator==(const StudentRecord&, const StudentRecord&) = default;
};

/// Mean of all marks, unrounded. Throws EmptyHistory for a student with no marks.
inline double student_average(const StudentRecord& student) {
  if (student.marks.empty()) {
    throw Error(ErrorKind::EmptyHistory, "student " + std::to_string(student.id) + " has no marks");
  }
  long long sum = 0;
  for (const auto& [code, marks] : student.marks) sum += marks;
  return static_cast<double>(sum) / static_cast<double>(student.marks.size());
}

/// In-memory store of catalogue, schemes and students with a course -> raters
/// index. All mutators keep the index consistent with the marks maps.
class Dataset {
 public:
  using CourseIndex = std::map<CourseCode, std::set<StudentId>>;

  Dataset() = default;

  const std::map<CourseCode, Course>& catalogue() const noexcept { return catalogue_; }
  const std::map<std::string, DegreeScheme>& schemes() const noexcept { return schemes_; }
  const std::map<StudentId, StudentRecord>& students() const noexcept { return students_; }
  const CourseIndex& course_to_raters() const noexcept { return course_to_raters_; }

  bool has_course(std::string_view code) const { return catalogue_.count(std::string(code)) != 0; }

  const Course& course(std::string_view code) const {
    auto it = catalogue_.find(std::string(code));
    if (it == catalogue_.end()) throw unknown_course(code);
    return it->second;
  }

  const StudentRecord* find_student(StudentId id) const {
    auto it = students_.find(id);
    return it == students_.end() ? nullptr : &it->second;
  }

  const StudentRecord& student(StudentId id) const {
    if (const auto* s = find_student(id)) return *s;
    throw Error(ErrorKind::UnknownStudent, "unknown student " + std::to_string(id));
  }

  const DegreeScheme* find_scheme(std::string_view degree) const {
    auto it = schemes_.find(std::string(degree));
    return it == schemes_.end() ? nullptr : &it->second;
  }

  /// Ids of students holding a mark for `code`.
  const std::set<StudentId>& raters_of(std::string_view code) const {
    if (!has_course(code)) throw unknown_course(code);
    static const std::set<StudentId> kEmpty;
    auto it = course_to_raters_.find(std::string(code));
    return it == course_to_raters_.end() ? kEmpty : it->second;
  }

  std::size_t rater_count(std::string_view code) const { return raters_of(code).size(); }

  void add_course(Course course) {
    if (!is_valid_course_code(course.code)) {
      throw Error(ErrorKind::ParseError, "invalid course code '" + course.code + "'");
    }
    if (catalogue_.count(course.code)) {
      throw Error(ErrorKind::DuplicateCode, "duplicate course code " + course.code);
    }
    auto code = course.code;
    catalogue_.emplace(std::move(code), std::move(course));
  }

  void add_scheme(DegreeScheme scheme) {
    if (scheme.semesters.empty()) {
      throw Error(ErrorKind::GapInSemesters, "scheme '" + scheme.degree_name + "' has no semesters");
    }
    for (const auto& semester : scheme.semesters) {
      for (const auto& code : semester) {
        if (!has_course(code)) throw unknown_course(code, "scheme '" + scheme.degree_name + "'");
      }
    }
    if (schemes_.count(scheme.degree_name)) {
      throw Error(ErrorKind::InvalidArgument, "duplicate scheme '" + scheme.degree_name + "'");
    }
    auto name = scheme.degree_name;
    schemes_.emplace(std::move(name), std::move(scheme));
  }

  /// Inserts a student with its marks. Validates ids, marks, catalogue
  /// membership, and the semester range when the degree has a scheme.
  void add_student(StudentRecord student) {
    if (student.id <= 0) {
      throw Error(ErrorKind::InvalidArgument, "student id must be positive");
    }
    if (students_.count(student.id)) {
      throw Error(ErrorKind::DuplicateStudent, "duplicate student " + std::to_string(student.id));
    }
    validate_semesters(student);
    for (const auto& [code, marks] : student.marks) {
      if (!has_course(code)) throw unknown_course(code, "student " + std::to_string(student.id));
      if (!is_valid_mark(marks)) throw bad_mark(student.id, code, marks);
    }
    for (const auto& [code, marks] : student.marks) course_to_raters_[code].insert(student.id);
    students_.emplace(student.id, std::move(student));
  }

  void remove_student(StudentId id) {
    auto it = students_.find(id);
    if (it == students_.end()) {
      throw Error(ErrorKind::UnknownStudent, "unknown student " + std::to_string(id));
    }
    for (const auto& [code, marks] : it->second.marks) unindex(code, id);
    students_.erase(it);
  }

  void add_mark(StudentId id, const CourseCode& code, int marks) {
    auto it = students_.find(id);
    if (it == students_.end()) {
      throw Error(ErrorKind::UnknownStudent, "unknown student " + std::to_string(id));
    }
    if (!has_course(code)) throw unknown_course(code);
    if (!is_valid_mark(marks)) throw bad_mark(id, code, marks);
    if (!it->second.marks.emplace(code, marks).second) {
      throw Error(ErrorKind::DuplicateMark,
                  "student " + std::to_string(id) + " already has a mark for " + code);
    }
    course_to_raters_[code].insert(id);
  }

  /// Removes and returns the mark.
  int remove_mark(StudentId id, const CourseCode& code) {
    auto it = students_.find(id);
    if (it == students_.end()) {
      throw Error(ErrorKind::UnknownStudent, "unknown student " + std::to_string(id));
    }
    auto mark_it = it->second.marks.find(code);
    if (mark_it == it->second.marks.end()) {
      throw Error(ErrorKind::NoActualMark,
                  "student " + std::to_string(id) + " has no mark for " + code);
    }
    int marks = mark_it->second;
    it->second.marks.erase(mark_it);
    unindex(code, id);
    return marks;
  }

  /// Reconstructs course_to_raters from the marks maps. Idempotent.
  void rebuild_indexes() { course_to_raters_ = scan_index(); }

  /// Brute-force index built from the marks maps alone.
  CourseIndex scan_index() const {
    CourseIndex index;
    for (const auto& [id, student] : students_) {
      for (const auto& [code, marks] : student.marks) index[code].insert(id);
    }
    return index;
  }

  StudentId next_student_id(StudentId id_start = 1001) const {
    return students_.empty() ? id_start : std::max(id_start, students_.rbegin()->first + 1);
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

  // Test hook for stale-index scenarios.
  CourseIndex& mutable_index_for_testing() { return course_to_raters_; }

 private:
  static Error unknown_course(std::string_view code, const std::string& where = {}) {
    std::string msg = "unknown course " + std::string(code);
    if (!where.empty()) msg += " (referenced by " + where + ")";
    return Error(ErrorKind::UnknownCourse, msg, std::string(code));
  }

  static Error bad_mark(StudentId id, const CourseCode& code, int marks) {
    return Error(ErrorKind::InvalidArgument,
                 "mark " + std::to_string(marks) + " for student " + std::to_string(id) + " in " +
                     code + " is outside [0, 100]");
  }

  void validate_semesters(const StudentRecord& student) const {
    if (student.semesters_studied < 1) {
      throw Error(ErrorKind::InvalidArgument,
                  "student " + std::to_string(student.id) + ": semesters_studied must be >= 1");
    }
    if (const auto* scheme = find_scheme(student.degree_name)) {
      if (student.semesters_studied > scheme->semester_count()) {
        throw Error(ErrorKind::InvalidArgument,
                    "student " + std::to_string(student.id) + ": semesters_studied " +
                        std::to_string(student.semesters_studied) + " exceeds " +
                        std::to_string(scheme->semester_count()) + " semesters of '" +
                        student.degree_name + "'");
      }
    }
  }

  void unindex(const CourseCode& code, StudentId id) {
    auto it = course_to_raters_.find(code);
    if (it == course_to_raters_.end()) return;
    it->second.erase(id);
    if (it->second.empty()) course_to_raters_.erase(it);
  }

  std::map<CourseCode, Course> catalogue_;
  std::map<std::string, DegreeScheme> schemes_;
  std::map<StudentId, StudentRecord> students_;
  CourseIndex course_to_raters_;
};

/// Copy of `dataset` with a consistent index.
inline Dataset rebuild_indexes(Dataset dataset) {
  dataset.rebuild_indexes();
  return dataset;
}

/// Many-reader / single-writer holder. Readers take an immutable snapshot;
/// writers copy the current state, mutate the copy and publish it, so a
/// reader sees either the old or the new dataset, never a mix.
class DatasetStore {
 public:
  explicit DatasetStore(Dataset initial)
      : current_(std::make_shared<const Dataset>(std::move(initial))) {}

  std::shared_ptr<const Dataset> snapshot() const {
    std::lock_guard lock(publish_mutex_);
    return current_;
  }

  /// Applies `mutate` to a private copy; publishes only if it returns normally.
  template <class F>
  auto update(F&& mutate) {
    std::lock_guard writer(writer_mutex_);
    auto next = std::make_shared<Dataset>(*snapshot());
    if constexpr (std::is_void_v<decltype(mutate(*next))>) {
      mutate(*next);
      publish(std::move(next));
    } else {
      auto result = mutate(*next);
      publish(std::move(next));
      return result;
    }
  }

 private:
  void publish(std::shared_ptr<Dataset> next) {
    std::lock_guard lock(publish_mutex_);
    current_ = std::move(next);
  }

  mutable std::mutex publish_mutex_;
  std::mutex writer_mutex_;
  std::shared_ptr<const Dataset> current_;
};

}  // namespace courserec

#endif  // COURSEREC_MODEL_HPP_
