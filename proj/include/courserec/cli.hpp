#ifndef COURSEREC_CLI_HPP_
#define COURSEREC_CLI_HPP_

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "courserec/api.hpp"
#include "courserec/evaluation.hpp"
#include "courserec/ingest.hpp"
#include "courserec/sample_catalogue.hpp"
#include "courserec/service.hpp"
#include "courserec/simulate.hpp"

namespace courserec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline std::string fixed(double v, int digits = 2) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace detail

/// Runs the command line. Output goes to `out`, diagnostics to `err`.
/// Exit codes: 0 success (including already-studied / not-enough-data
/// outcomes), 1 data error, 2 usage error.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Course recommender: predicted marks, grade and status from similar students"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string data_dir = "data";
  bool as_json = false;
  int k = 10;
  int min_raters = 3;
  app.add_option("--data", data_dir, "Directory holding courses.csv, schemes.csv, students.csv, marks.csv")
      ->capture_default_str();
  app.add_flag("--json", as_json, "Machine-readable JSON output");
  app.add_option("--k", k, "Neighbors used per prediction")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--min-raters", min_raters, "Eligible-neighbor count at or below which data is insufficient")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);

  auto* sim = app.add_subcommand("simulate", "Generate a seeded synthetic roster from the degree schemes");
  SimulationConfig sim_config;
  std::string sim_out;
  sim->add_option("--seed", sim_config.seed, "Random seed")->capture_default_str();
  sim->add_option("--students-per-degree", sim_config.students_per_degree)->capture_default_str();
  sim->add_option("--marks-min", sim_config.marks_min)->capture_default_str();
  sim->add_option("--marks-max", sim_config.marks_max)->capture_default_str();
  sim->add_option("--id-start", sim_config.id_start)->capture_default_str();
  sim->add_option("--out", sim_out, "Output directory (defaults to --data)");

  auto* rec = app.add_subcommand("recommend", "Predict marks, grade and status for one student and course");
  StudentId student_id = 0;
  std::string course_code;
  rec->add_option("--student", student_id)->required();
  rec->add_option("--course", course_code)->required();

  auto* pop = app.add_subcommand("popular", "Courses studied by the most students");
  std::size_t limit = 20;
  pop->add_option("--limit", limit)->capture_default_str()->check(CLI::PositiveNumber);

  auto* top = app.add_subcommand("top", "Courses with the highest average marks");
  top->add_option("--limit", limit)->capture_default_str()->check(CLI::PositiveNumber);

  auto* eval = app.add_subcommand("evaluate", "Leave-one-out MAE / RMSE over sampled known marks");
  SampleSpec spec;
  std::string csv_path;
  eval->add_option("--students", spec.students)->capture_default_str()->check(CLI::PositiveNumber);
  eval->add_option("--per-student", spec.courses_per_student)->capture_default_str()->check(CLI::PositiveNumber);
  eval->add_option("--seed", spec.seed)->capture_default_str();
  eval->add_option("--csv", csv_path, "Also write per-observation CSV here");

  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON API (COURSEREC_BIND overrides --bind)");
  std::string bind = "127.0.0.1:8080";
  serve->add_option("--bind", bind, "host:port")->capture_default_str();

  auto* sample = app.add_subcommand("sample-catalogue", "Write the built-in demo courses.csv and schemes.csv");
  std::string sample_out;
  sample->add_option("--out", sample_out, "Output directory (defaults to --data)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  const KnnConfig knn{k, min_raters};
  const auto paths = DataPaths::in_directory(data_dir);

  try {
    if (*sample) {
      auto dir = std::filesystem::path(sample_out.empty() ? data_dir : sample_out);
      std::filesystem::create_directories(dir);
      auto catalogue = sample_catalogue();
      csv::write_file((dir / "courses.csv").string(), format_catalogue(catalogue.courses));
      csv::write_file((dir / "schemes.csv").string(), format_schemes(catalogue.schemes));
      out << "wrote " << catalogue.courses.size() << " courses and " << catalogue.schemes.size()
          << " schemes to " << dir.string() << "\n";
      return kExitOk;
    }

    if (*sim) {
      auto courses = load_catalogue(paths.courses);
      auto schemes = load_schemes(paths.schemes, courses);
      auto roster = simulate(schemes, sim_config);
      auto dir = std::filesystem::path(sim_out.empty() ? data_dir : sim_out);
      std::filesystem::create_directories(dir);
      auto target = DataPaths::in_directory(dir);
      write_roster(roster, target.students, target.marks);
      std::size_t marks = 0;
      for (const auto& s : roster) marks += s.marks.size();
      if (as_json) {
        out << json{{"students", roster.size()}, {"marks", marks}, {"seed", sim_config.seed}}.dump() << "\n";
      } else {
        out << "simulated " << roster.size() << " students (" << marks << " marks) with seed "
            << sim_config.seed << " into " << dir.string() << "\n";
      }
      return kExitOk;
    }

    auto dataset = load_dataset(paths);

    if (*rec) {
      auto result = recommend(dataset, student_id, course_code, knn);
      auto body = recommendation_json(student_id, course_code, result);
      if (as_json) {
        out << body.dump() << "\n";
      } else {
        out << "student " << student_id << ", course " << course_code << " ("
            << dataset.course(course_code).title << ")\n";
        if (result.outcome == Outcome::Predicted) {
          out << "  predicted marks: " << detail::fixed(*result.predicted_marks) << " (code "
              << outcome_code(result) << ")\n"
              << "  grade:           " << grade_label(result) << "\n"
              << "  status:          " << to_string(result.status) << "\n"
              << "  neighbors used:  " << result.neighbors_used << " of " << result.eligible_neighbors
              << " eligible\n";
        } else {
          out << "  code:   " << outcome_code(result) << "\n"
              << "  grade:  " << grade_label(result) << "\n"
              << "  status: " << to_string(result.status) << "\n";
        }
      }
      return kExitOk;
    }

    if (*pop) {
      auto list = popular_courses(dataset, limit);
      if (as_json) {
        json arr = json::array();
        for (const auto& p : list) arr.push_back(to_json(p));
        out << arr.dump() << "\n";
      } else {
        for (const auto& p : list) {
          out << detail::pad(p.course.code, 9) << detail::pad(p.course.title, 44)
              << detail::pad(std::string(to_string(p.course.type)), 10) << p.rater_count << "\n";
        }
      }
      return kExitOk;
    }

    if (*top) {
      auto list = top_courses(dataset, limit, static_cast<std::size_t>(min_raters));
      if (as_json) {
        json arr = json::array();
        for (const auto& t : list) arr.push_back(to_json(t));
        out << arr.dump() << "\n";
      } else {
        for (const auto& t : list) {
          out << detail::pad(t.course.code, 9) << detail::pad(t.course.title, 44)
              << detail::pad(std::string(to_string(t.course.type)), 10) << t.display_average() << "\n";
        }
      }
      return kExitOk;
    }

    if (*eval) {
      auto report = evaluate(dataset, spec, knn);
      if (!csv_path.empty()) csv::write_file(csv_path, format_report_csv(report));
      if (as_json) {
        out << to_json(report).dump() << "\n";
      } else {
        const auto& a = report.absolute_error_quantiles;
        const auto& r = report.relative_error_quantiles;
        out << "observations: " << report.observations.size() << "\n"
            << "skipped:      " << report.skipped.size() << "\n";
        for (const auto& s : report.skipped) {
          out << "  " << s.student_id << " " << s.course_code << " " << to_string(s.reason) << "\n";
        }
        out << "MAE:          " << detail::fixed(report.mae, 4) << "\n"
            << "RMSE:         " << detail::fixed(report.rmse, 4) << "\n"
            << "abs error     p50 " << detail::fixed(a.p50) << "  p90 " << detail::fixed(a.p90) << "  max "
            << detail::fixed(a.max) << "\n"
            << "rel error     p50 " << detail::fixed(100 * r.p50) << "%  p90 " << detail::fixed(100 * r.p90)
            << "%  max " << detail::fixed(100 * r.max) << "%\n";
      }
      return kExitOk;
    }

    if (*serve) {
      auto address = bind_address_from_env(parse_bind_address(bind));
      DatasetStore store(std::move(dataset));
      Api api(store, knn);
      httplib::Server server;
      mount_routes(server, api);
      auto snap = store.snapshot();
      err << "serving " << snap->students().size() << " students / " << snap->catalogue().size()
          << " courses on " << address.host << ":" << address.port << "\n";
      if (!server.listen(address.host, address.port)) {
        err << "error: cannot bind " << address.host << ":" << address.port << "\n";
        return kExitDataError;
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    return kExitDataError;
  }
  return kExitUsage;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace courserec::cli

#endif  // COURSEREC_CLI_HPP_
