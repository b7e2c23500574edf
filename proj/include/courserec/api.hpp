#ifndef COURSEREC_API_HPP_
#define COURSEREC_API_HPP_

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

#include "courserec/evaluation.hpp"
#include "courserec/recommender.hpp"

namespace courserec {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Wire encoding
// ---------------------------------------------------------------------------

inline constexpr int kAlreadyStudiedCode = -1;
inline constexpr int kNotEnoughDataCode = -2;
inline constexpr std::string_view kNoGrade = "N-A";

/// Integer outcome: -1 already studied, -2 not enough data, otherwise the
/// predicted marks rounded to nearest.
inline int outcome_code(const Recommendation& rec) {
  switch (rec.outcome) {
    case Outcome::AlreadyStudied: return kAlreadyStudiedCode;
    case Outcome::NotEnoughData: return kNotEnoughDataCode;
    case Outcome::Predicted: return static_cast<int>(std::lround(*rec.predicted_marks));
  }
  return kNotEnoughDataCode;
}

inline std::string grade_label(const Recommendation& rec) {
  return rec.grade ? std::string(to_string(*rec.grade)) : std::string(kNoGrade);
}

inline json to_json(const Course& c) {
  return {{"code", c.code}, {"title", c.title}, {"type", std::string(to_string(c.type))}};
}

inline json to_json(const StudentRecord& s) {
  json marks = json::array();
  for (const auto& [code, m] : s.marks) marks.push_back({{"course_code", code}, {"marks", m}});
  json out = {{"id", s.id},
              {"degree", s.degree_name},
              {"semesters_studied", s.semesters_studied},
              {"marks", std::move(marks)},
              {"average", nullptr}};
  if (!s.marks.empty()) out["average"] = student_average(s);
  return out;
}

inline json recommendation_json(StudentId student_id, const std::string& course_code,
                                const Recommendation& rec) {
  json out = {{"student_id", student_id},
              {"course_code", course_code},
              {"outcome", outcome_code(rec)},
              {"predicted_marks", nullptr},
              {"grade", grade_label(rec)},
              {"status", std::string(to_string(rec.status))},
              {"neighbors_used", rec.neighbors_used}};
  if (rec.predicted_marks) out["predicted_marks"] = *rec.predicted_marks;
  return out;
}

inline json to_json(const PopularCourse& p) {
  auto out = to_json(p.course);
  out["students"] = p.rater_count;
  return out;
}

inline json to_json(const TopCourse& t) {
  auto out = to_json(t.course);
  out["average_marks"] = t.display_average();
  out["average_exact"] = t.average_marks;
  out["students"] = t.rater_count;
  return out;
}

inline json to_json(const ErrorQuantiles& q) {
  return {{"p50", q.p50}, {"p90", q.p90}, {"max", q.max}};
}

inline json to_json(const EvaluationReport& report) {
  json observations = json::array();
  for (const auto& o : report.observations) {
    observations.push_back({{"student_id", o.student_id},
                            {"course_code", o.course_code},
                            {"actual", o.actual_marks},
                            {"predicted", o.predicted_marks},
                            {"abs_error", o.absolute_error},
                            {"neighbors_used", o.neighbors_used}});
  }
  json skipped = json::array();
  for (const auto& s : report.skipped) {
    skipped.push_back({{"student_id", s.student_id},
                       {"course_code", s.course_code},
                       {"reason", std::string(to_string(s.reason))}});
  }
  return {{"n", report.observations.size()},
          {"mae", report.mae},
          {"rmse", report.rmse},
          {"absolute_error_quantiles", to_json(report.absolute_error_quantiles)},
          {"relative_error_quantiles", to_json(report.relative_error_quantiles)},
          {"observations", std::move(observations)},
          {"skipped", std::move(skipped)}};
}

inline json error_json(ErrorKind kind, const std::string& message, const std::string& detail = {}) {
  return {{"error_kind", std::string(to_string(kind))}, {"message", message}, {"detail", detail}};
}

inline int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownStudent:
    case ErrorKind::UnknownCourse:
      return 404;
    case ErrorKind::DuplicateMark:
    case ErrorKind::DuplicateStudent:
      return 409;
    case ErrorKind::Io:
      return 500;
    default:
      return 422;
  }
}

// ---------------------------------------------------------------------------
// Transport-independent request handlers
// ---------------------------------------------------------------------------

struct ApiResponse {
  int status = 200;
  json body;
};

using QueryParams = std::multimap<std::string, std::string>;

/// Request handlers over a DatasetStore. GETs read one snapshot; POSTs go
/// through the store's single writer.
class Api {
 public:
  Api(DatasetStore& store, KnnConfig knn) : store_(store), knn_(knn) { knn_.validate(); }

  ApiResponse health() const {
    auto ds = store_.snapshot();
    return {200, {{"status", "ok"},
                  {"students", ds->students().size()},
                  {"courses", ds->catalogue().size()},
                  {"schemes", ds->schemes().size()}}};
  }

  ApiResponse courses() const {
    auto ds = store_.snapshot();
    json out = json::array();
    for (const auto& [code, c] : ds->catalogue()) out.push_back(to_json(c));
    return {200, std::move(out)};
  }

  ApiResponse popular(const QueryParams& q) const {
    return guarded([&] {
      auto limit = optional_size(q, "limit").value_or(20);
      auto ds = store_.snapshot();
      json out = json::array();
      for (const auto& p : popular_courses(*ds, limit)) out.push_back(to_json(p));
      return ApiResponse{200, std::move(out)};
    });
  }

  ApiResponse top(const QueryParams& q) const {
    return guarded([&] {
      auto limit = optional_size(q, "limit").value_or(20);
      auto ds = store_.snapshot();
      json out = json::array();
      for (const auto& t : top_courses(*ds, limit, static_cast<std::size_t>(knn_.min_raters))) {
        out.push_back(to_json(t));
      }
      return ApiResponse{200, std::move(out)};
    });
  }

  ApiResponse student(const std::string& id_text) const {
    return guarded([&] {
      auto ds = store_.snapshot();
      return ApiResponse{200, to_json(ds->student(parse_id(id_text, "id")))};
    });
  }

  ApiResponse recommendation(const QueryParams& q) const {
    return guarded([&] {
      auto id = parse_id(required(q, "student"), "student");
      auto course = required(q, "course");
      auto ds = store_.snapshot();
      return ApiResponse{200, recommendation_json(id, course, recommend(*ds, id, course, knn_))};
    });
  }

  /// Body: {"degree": str, "semesters_studied" | "semesters": int, "id"?: int}.
  ApiResponse register_student(const std::string& body) {
    return guarded([&] {
      auto req = parse_body(body);
      StudentRecord s;
      s.degree_name = get_string(req, "degree");
      if (req.contains("semesters_studied")) {
        s.semesters_studied = get_int(req, "semesters_studied");
      } else {
        s.semesters_studied = get_int(req, "semesters");
      }
      std::optional<StudentId> requested;
      if (req.contains("id")) requested = get_int(req, "id");
      auto created = store_.update([&](Dataset& ds) {
        if (!ds.schemes().empty() && !ds.find_scheme(s.degree_name)) {
          throw Error(ErrorKind::UnknownDegree, "unknown degree '" + s.degree_name + "'",
                      s.degree_name);
        }
        s.id = requested.value_or(ds.next_student_id());
        ds.add_student(s);
        return ds.student(s.id);
      });
      return ApiResponse{201, to_json(created)};
    });
  }

  /// Body: {"course_code": str, "marks": int}.
  ApiResponse add_mark(const std::string& id_text, const std::string& body) {
    return guarded([&] {
      auto id = parse_id(id_text, "id");
      auto req = parse_body(body);
      auto code = get_string(req, "course_code");
      auto marks = get_int(req, "marks");
      if (marks < kMinMarks || marks > kMaxMarks) {
        throw Error(ErrorKind::InvalidArgument, "marks must be an integer in [0, 100]");
      }
      auto updated = store_.update([&](Dataset& ds) {
        ds.add_mark(id, code, static_cast<int>(marks));
        return ds.student(id);
      });
      return ApiResponse{201, to_json(updated)};
    });
  }

  /// Body: {"students": int, "courses_per_student": int, "seed": uint}; all optional.
  ApiResponse evaluate(const std::string& body) const {
    return guarded([&] {
      auto req = body.empty() ? json::object() : parse_body(body);
      SampleSpec spec;
      if (req.contains("students")) spec.students = static_cast<int>(get_int(req, "students"));
      if (req.contains("courses_per_student")) {
        spec.courses_per_student = static_cast<int>(get_int(req, "courses_per_student"));
      }
      if (req.contains("seed")) spec.seed = static_cast<std::uint64_t>(get_int(req, "seed"));
      auto ds = store_.snapshot();
      return ApiResponse{200, to_json(courserec::evaluate(*ds, spec, knn_))};
    });
  }

  static ApiResponse not_found(const std::string& path) {
    return {404, error_json(ErrorKind::InvalidArgument, "no route for " + path, path)};
  }

 private:
  template <class F>
  static ApiResponse guarded(F&& f) {
    try {
      return f();
    } catch (const Error& e) {
      return {http_status(e.kind()), error_json(e.kind(), e.what(), e.detail())};
    } catch (const json::exception& e) {
      return {422, error_json(ErrorKind::InvalidArgument, e.what())};
    }
  }

  static std::string required(const QueryParams& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end() || it->second.empty()) {
      throw Error(ErrorKind::InvalidArgument, "missing query parameter '" + key + "'", key);
    }
    return it->second;
  }

  static long long parse_integer(const std::string& text, const std::string& what) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
      throw Error(ErrorKind::InvalidArgument, what + " must be an integer", text);
    }
    return v;
  }

  static StudentId parse_id(const std::string& text, const std::string& what) {
    return parse_integer(text, what);
  }

  static std::optional<std::size_t> optional_size(const QueryParams& q, const std::string& key) {
    auto it = q.find(key);
    if (it == q.end()) return std::nullopt;
    auto v = parse_integer(it->second, key);
    if (v < 1) throw Error(ErrorKind::InvalidArgument, key + " must be >= 1", it->second);
    return static_cast<std::size_t>(v);
  }

  static json parse_body(const std::string& body) {
    auto req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) {
      throw Error(ErrorKind::InvalidArgument, "request body must be a JSON object");
    }
    return req;
  }

  static std::string get_string(const json& req, const std::string& key) {
    if (!req.contains(key) || !req[key].is_string()) {
      throw Error(ErrorKind::InvalidArgument, "field '" + key + "' must be a string", key);
    }
    return req[key].get<std::string>();
  }

  static long long get_int(const json& req, const std::string& key) {
    if (!req.contains(key) || !req[key].is_number_integer()) {
      throw Error(ErrorKind::InvalidArgument, "field '" + key + "' must be an integer", key);
    }
    return req[key].get<long long>();
  }

  DatasetStore& store_;
  KnnConfig knn_;
};

}  // namespace courserec

#endif  // COURSEREC_API_HPP_
