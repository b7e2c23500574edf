#ifndef COURSEREC_INGEST_HPP_
#define COURSEREC_INGEST_HPP_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "courserec/csv.hpp"
#include "courserec/model.hpp"

// CSV formats:
//   courses.csv   code,title,type
//   schemes.csv   degree,semester,course_code
//   students.csv  id,degree,semesters_studied
//   marks.csv     student_id,course_code,marks[,degree]

namespace courserec {

namespace detail {

inline void expect_columns(const csv::Row& row, std::size_t n) {
  if (row.fields.size() != n) {
    throw csv::parse_error(row.line, "expected " + std::to_string(n) + " columns, got " +
                                         std::to_string(row.fields.size()));
  }
}

}  // namespace detail

inline std::vector<Course> parse_catalogue(std::string_view text) {
  auto rows = csv::parse(text);
  csv::expect_header(rows, {"code", "title", "type"});
  std::vector<Course> courses;
  std::set<CourseCode> seen;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    detail::expect_columns(row, 3);
    Course course;
    course.code = csv::trim(row.fields[0]);
    course.title = csv::trim(row.fields[1]);
    if (!is_valid_course_code(course.code)) {
      throw csv::parse_error(row.line, "invalid course code '" + row.fields[0] + "'");
    }
    auto type = parse_course_type(csv::trim(row.fields[2]));
    if (!type) throw csv::parse_error(row.line, "invalid course type '" + row.fields[2] + "'");
    course.type = *type;
    if (!seen.insert(course.code).second) {
      throw Error(ErrorKind::DuplicateCode,
                  "line " + std::to_string(row.line) + ": duplicate course code " + course.code,
                  course.code);
    }
    courses.push_back(std::move(course));
  }
  return courses;
}

/// Schemes sorted by degree name. Every referenced code must be in `catalogue`.
inline std::vector<DegreeScheme> parse_schemes(std::string_view text,
                                               const std::set<CourseCode>& catalogue) {
  auto rows = csv::parse(text);
  csv::expect_header(rows, {"degree", "semester", "course_code"});
  std::map<std::string, std::map<int, std::vector<CourseCode>>> grouped;
  std::map<std::string, std::set<CourseCode>> per_degree;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    detail::expect_columns(row, 3);
    auto degree = csv::trim(row.fields[0]);
    if (degree.empty()) throw csv::parse_error(row.line, "empty degree name");
    int semester = csv::parse_int<int>(row.fields[1], row.line, "semester");
    if (semester < 1) throw csv::parse_error(row.line, "semester must be >= 1");
    auto code = csv::trim(row.fields[2]);
    if (!catalogue.count(code)) {
      throw Error(ErrorKind::UnknownCourse,
                  "line " + std::to_string(row.line) + ": unknown course " + code, code);
    }
    if (!per_degree[degree].insert(code).second) {
      throw csv::parse_error(row.line, "course " + code + " listed twice in '" + degree + "'");
    }
    grouped[degree][semester].push_back(std::move(code));
  }

  std::vector<DegreeScheme> schemes;
  for (auto& [degree, semesters] : grouped) {
    DegreeScheme scheme{degree, {}};
    int expected = 1;
    for (auto& [number, codes] : semesters) {
      if (number != expected) {
        throw Error(ErrorKind::GapInSemesters, "scheme '" + degree + "' is missing semester " +
                                                   std::to_string(expected),
                    degree);
      }
      scheme.semesters.push_back(std::move(codes));
      ++expected;
    }
    schemes.push_back(std::move(scheme));
  }
  return schemes;
}

/// Students sorted by id with marks attached. `schemes` (optional, may be
/// empty) bounds semesters_studied for degrees that have a scheme.
inline std::vector<StudentRecord> parse_roster(std::string_view students_text,
                                               std::string_view marks_text,
                                               const std::set<CourseCode>& catalogue,
                                               const std::vector<DegreeScheme>& schemes = {}) {
  std::map<std::string, int> semester_counts;
  for (const auto& s : schemes) semester_counts[s.degree_name] = s.semester_count();

  std::map<StudentId, StudentRecord> roster;
  auto student_rows = csv::parse(students_text);
  csv::expect_header(student_rows, {"id", "degree", "semesters_studied"});
  for (std::size_t i = 1; i < student_rows.size(); ++i) {
    const auto& row = student_rows[i];
    detail::expect_columns(row, 3);
    StudentRecord student;
    student.id = csv::parse_int<StudentId>(row.fields[0], row.line, "id");
    if (student.id <= 0) throw csv::parse_error(row.line, "student id must be positive");
    student.degree_name = csv::trim(row.fields[1]);
    student.semesters_studied = csv::parse_int<int>(row.fields[2], row.line, "semesters_studied");
    if (student.semesters_studied < 1) {
      throw csv::parse_error(row.line, "semesters_studied must be >= 1");
    }
    if (auto it = semester_counts.find(student.degree_name);
        it != semester_counts.end() && student.semesters_studied > it->second) {
      throw csv::parse_error(row.line, "semesters_studied exceeds the " +
                                           std::to_string(it->second) + " semesters of '" +
                                           student.degree_name + "'");
    }
    if (roster.count(student.id)) {
      throw Error(ErrorKind::DuplicateStudent,
                  "line " + std::to_string(row.line) + ": duplicate student " +
                      std::to_string(student.id));
    }
    roster.emplace(student.id, std::move(student));
  }

  auto mark_rows = csv::parse(marks_text);
  auto columns = csv::expect_header(mark_rows, {"student_id", "course_code", "marks"}, {"degree"});
  for (std::size_t i = 1; i < mark_rows.size(); ++i) {
    const auto& row = mark_rows[i];
    detail::expect_columns(row, columns);
    auto id = csv::parse_int<StudentId>(row.fields[0], row.line, "student_id");
    auto it = roster.find(id);
    if (it == roster.end()) {
      throw Error(ErrorKind::UnknownStudent,
                  "line " + std::to_string(row.line) + ": marks for unknown student " +
                      std::to_string(id),
                  std::to_string(id));
    }
    auto code = csv::trim(row.fields[1]);
    if (!catalogue.count(code)) {
      throw Error(ErrorKind::UnknownCourse,
                  "line " + std::to_string(row.line) + ": unknown course " + code, code);
    }
    int marks = csv::parse_int<int>(row.fields[2], row.line, "marks");
    if (!is_valid_mark(marks)) throw csv::parse_error(row.line, "marks outside [0, 100]");
    if (columns == 4) {
      auto degree = csv::trim(row.fields[3]);
      if (!degree.empty() && degree != it->second.degree_name) {
        throw Error(ErrorKind::DegreeMismatch,
                    "line " + std::to_string(row.line) + ": degree '" + degree +
                        "' does not match student " + std::to_string(id) + " ('" +
                        it->second.degree_name + "')");
      }
    }
    if (!it->second.marks.emplace(code, marks).second) {
      throw Error(ErrorKind::DuplicateMark,
                  "line " + std::to_string(row.line) + ": duplicate mark for student " +
                      std::to_string(id) + " in " + code);
    }
  }

  std::vector<StudentRecord> out;
  out.reserve(roster.size());
  for (auto& [id, s] : roster) out.push_back(std::move(s));
  return out;
}

inline std::string format_catalogue(const std::vector<Course>& courses) {
  std::string out = "code,title,type\n";
  for (const auto& c : courses) out += csv::format_row({c.code, c.title, std::string(to_string(c.type))});
  return out;
}

inline std::string format_schemes(const std::vector<DegreeScheme>& schemes) {
  std::string out = "degree,semester,course_code\n";
  for (const auto& scheme : schemes) {
    for (int s = 0; s < scheme.semester_count(); ++s) {
      for (const auto& code : scheme.semesters[s]) {
        out += csv::format_row({scheme.degree_name, std::to_string(s + 1), code});
      }
    }
  }
  return out;
}

struct RosterFiles {
  std::string students;
  std::string marks;
};

/// students.csv ordered by id; marks.csv ordered by student id then course
/// code, with the degree column filled in.
inline RosterFiles format_roster(std::vector<StudentRecord> students) {
  std::sort(students.begin(), students.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  RosterFiles files{"id,degree,semesters_studied\n", "student_id,course_code,marks,degree\n"};
  for (const auto& s : students) {
    files.students += csv::format_row(
        {std::to_string(s.id), s.degree_name, std::to_string(s.semesters_studied)});
    for (const auto& [code, marks] : s.marks) {
      files.marks += csv::format_row({std::to_string(s.id), code, std::to_string(marks), s.degree_name});
    }
  }
  return files;
}

inline std::set<CourseCode> codes_of(const std::vector<Course>& courses) {
  std::set<CourseCode> codes;
  for (const auto& c : courses) codes.insert(c.code);
  return codes;
}

// File-level entry points.

inline std::vector<Course> load_catalogue(const std::string& path) {
  return parse_catalogue(csv::read_file(path));
}

inline std::vector<DegreeScheme> load_schemes(const std::string& path,
                                              const std::vector<Course>& catalogue) {
  return parse_schemes(csv::read_file(path), codes_of(catalogue));
}

inline std::vector<StudentRecord> load_roster(const std::string& students_path,
                                              const std::string& marks_path,
                                              const std::vector<Course>& catalogue,
                                              const std::vector<DegreeScheme>& schemes = {}) {
  return parse_roster(csv::read_file(students_path), csv::read_file(marks_path), codes_of(catalogue),
                      schemes);
}

inline void write_roster(const std::vector<StudentRecord>& students, const std::string& students_path,
                         const std::string& marks_path) {
  auto files = format_roster(students);
  csv::write_file(students_path, files.students);
  csv::write_file(marks_path, files.marks);
}

/// Standard file names inside a data directory.
struct DataPaths {
  std::string courses;
  std::string schemes;
  std::string students;
  std::string marks;

  static DataPaths in_directory(const std::filesystem::path& dir) {
    return {(dir / "courses.csv").string(), (dir / "schemes.csv").string(),
            (dir / "students.csv").string(), (dir / "marks.csv").string()};
  }
};

inline Dataset make_dataset(const std::vector<Course>& courses,
                            const std::vector<DegreeScheme>& schemes,
                            const std::vector<StudentRecord>& students) {
  Dataset dataset;
  for (const auto& c : courses) dataset.add_course(c);
  for (const auto& s : schemes) dataset.add_scheme(s);
  for (const auto& s : students) dataset.add_student(s);
  return dataset;
}

/// Loads a full dataset. The schemes file is optional (skipped when absent);
/// students/marks are required.
inline Dataset load_dataset(const DataPaths& paths) {
  auto courses = load_catalogue(paths.courses);
  std::vector<DegreeScheme> schemes;
  if (!paths.schemes.empty() && std::filesystem::exists(paths.schemes)) {
    schemes = load_schemes(paths.schemes, courses);
  }
  auto students = load_roster(paths.students, paths.marks, courses, schemes);
  return make_dataset(courses, schemes, students);
}

}  // namespace courserec

#endif  // COURSEREC_INGEST_HPP_
