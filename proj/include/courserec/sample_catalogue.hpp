#ifndef COURSEREC_SAMPLE_CATALOGUE_HPP_
#define COURSEREC_SAMPLE_CATALOGUE_HPP_

#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <vector>

#include "courserec/model.hpp"

// Deterministic demo catalogue: 470 courses across 65 degree schemes. The
// first twenty entries are the university-wide courses shared by most
// degrees; the remaining 450 are spread over 22 subject areas.

namespace courserec {

struct SampleCatalogue {
  std::vector<Course> courses;
  std::vector<DegreeScheme> schemes;
};

namespace detail {

struct SubjectArea {
  const char* prefix;
  const char* name;
};

inline constexpr std::array<SubjectArea, 22> kSubjectAreas{{
    {"ACC", "Accounting"},         {"BIF", "Bioinformatics"},    {"BIO", "Biology"},
    {"BT", "Biotechnology"},       {"CS", "Computer Science"},   {"ECO", "Economics"},
    {"EDU", "Education"},          {"ELT", "English Linguistics"}, {"FIN", "Finance"},
    {"BNK", "Banking"},            {"MGT", "Management"},        {"MKT", "Marketing"},
    {"MTH", "Mathematics"},        {"PHY", "Physics"},           {"PSY", "Psychology"},
    {"SOC", "Sociology"},          {"STA", "Statistics"},        {"ZOO", "Zoology"},
    {"CHE", "Chemistry"},          {"MCM", "Mass Communication"}, {"IT", "Information Technology"},
    {"SE", "Software Engineering"},
}};

inline const std::vector<Course>& shared_courses() {
  static const std::vector<Course> courses = {
      {"CS101", "Introduction to Computing", CourseType::Required},
      {"ENG101", "English Comprehension", CourseType::Required},
      {"ENG201", "Business and Technical English Writing", CourseType::Required},
      {"PAK301", "Pakistan Studies", CourseType::Required},
      {"ISL201", "Islamic Studies", CourseType::Elective},
      {"ETH201", "Ethics (for Non-Muslims)", CourseType::Elective},
      {"SOC101", "Introduction to Sociology", CourseType::Required},
      {"ECO401", "Economics", CourseType::Required},
      {"MGT211", "Introduction To Business", CourseType::Required},
      {"MGT101", "Financial Accounting", CourseType::Required},
      {"MTH302", "Business Mathematics & Statistics", CourseType::Required},
      {"MCM301", "Communication skills", CourseType::Required},
      {"STA301", "Statistics and Probability", CourseType::Required},
      {"MGT503", "Principles of Management", CourseType::Required},
      {"MGT301", "Principles of Marketing", CourseType::Required},
      {"CS201", "Introduction to Programming", CourseType::Required},
      {"PSY101", "Introduction to Psychology", CourseType::Required},
      {"ENG301", "Business Communication", CourseType::Required},
      {"STA630", "Research Methods", CourseType::Elective},
      {"MGT501", "Human Resource Management", CourseType::Required},
  };
  return courses;
}

}  // namespace detail

inline SampleCatalogue sample_catalogue() {
  using detail::kSubjectAreas;
  constexpr int kSpecificCourses = 450;
  constexpr int kDegrees = 65;

  SampleCatalogue out;
  out.courses = detail::shared_courses();
  std::set<CourseCode> used;
  for (const auto& c : out.courses) used.insert(c.code);

  // Round-robin over areas so each area gets 20 or 21 courses.
  std::vector<std::vector<CourseCode>> by_area(kSubjectAreas.size());
  std::vector<int> next_number(kSubjectAreas.size(), 0);
  for (int made = 0; made < kSpecificCourses;) {
    for (std::size_t a = 0; a < kSubjectAreas.size() && made < kSpecificCourses; ++a) {
      CourseCode code;
      do {
        int n = next_number[a]++;
        code = std::string(kSubjectAreas[a].prefix) + std::to_string(300 + (n / 8) * 100 + n % 8 * 3 + 1);
      } while (used.count(code));
      used.insert(code);
      int index = static_cast<int>(by_area[a].size());
      out.courses.push_back({code, std::string(kSubjectAreas[a].name) + " " + std::to_string(index + 1),
                             index % 4 == 3 ? CourseType::Elective : CourseType::Required});
      by_area[a].push_back(code);
      ++made;
    }
  }

  const auto& shared = detail::shared_courses();
  static constexpr std::array<const char*, 3> kLevels{"BS", "MS", "M.Sc."};
  for (int d = 0; d < kDegrees; ++d) {
    const std::size_t area = static_cast<std::size_t>(d) % kSubjectAreas.size();
    const int level = d / static_cast<int>(kSubjectAreas.size());
    const bool undergrad = level == 0;
    const int semesters = undergrad ? 8 : 4;
    const std::size_t per_semester = undergrad ? 5 : 4;

    std::vector<CourseCode> pool;
    auto add = [&](const CourseCode& c) {
      if (std::find(pool.begin(), pool.end(), c) == pool.end()) pool.push_back(c);
    };
    if (undergrad) {
      add("CS101");
      add("ENG101");
      add("ENG201");
      add(d % 7 == 6 ? "ETH201" : "ISL201");
      add("PAK301");
    } else {
      add("ENG101");
      add("CS101");
    }
    const auto& own = by_area[area];
    if (undergrad) {
      for (const auto& c : own) add(c);
    } else {
      for (std::size_t i = 0; i < own.size(); i += 2) add(own[(i + level) % own.size()]);
    }
    // Breadth courses: the remaining shared ones, rotated per degree, then the
    // neighbouring area.
    for (std::size_t i = 6; i < shared.size(); ++i) {
      add(shared[6 + (i + static_cast<std::size_t>(d)) % (shared.size() - 6)].code);
    }
    for (const auto& c : by_area[(area + 1) % kSubjectAreas.size()]) add(c);

    DegreeScheme scheme;
    scheme.degree_name = std::string(kLevels[level]) + " " + kSubjectAreas[area].name;
    std::size_t next = 0;
    for (int s = 0; s < semesters; ++s) {
      std::vector<CourseCode> semester;
      for (std::size_t i = 0; i < per_semester && next < pool.size(); ++i) semester.push_back(pool[next++]);
      scheme.semesters.push_back(std::move(semester));
    }
    out.schemes.push_back(std::move(scheme));
  }
  return out;
}

}  // namespace courserec

#endif  // COURSEREC_SAMPLE_CATALOGUE_HPP_
