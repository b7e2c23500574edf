#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "courserec/recommender.hpp"
#include "support/oracle.hpp"
#include "support/toy_data.hpp"

using namespace courserec;
using courserec::testing::student;
using courserec::testing::toy_catalogue;

namespace {

Dataset catalogue_of(std::initializer_list<const char*> codes) {
  Dataset ds;
  for (const char* c : codes) ds.add_course({c, c});
  return ds;
}

}  // namespace

// --- cosine_similarity ------------------------------------------------------

TEST(Cosine, IdenticalVectors) {
  auto a = student(1, {{"X", 80}, {"Y", 70}});
  EXPECT_NEAR(cosine_similarity(a, a), 1.0, 1e-12);
}

TEST(Cosine, HandComputedPair) {
  // 3*4 + 4*3 = 24 over 5 * 5
  EXPECT_NEAR(cosine_similarity(student(1, {{"X", 3}, {"Y", 4}}), student(2, {{"X", 4}, {"Y", 3}})), 0.96, 1e-12);
}

TEST(Cosine, NoSharedCourses) {
  EXPECT_EQ(cosine_similarity(student(1, {{"X", 3}}), student(2, {{"Y", 4}})), 0.0);
  EXPECT_EQ(cosine_similarity(student(1, {}), student(2, {{"Y", 4}})), 0.0);
}

TEST(Cosine, OnlyCommonCoursesCount) {
  // Only X is shared; any two positive scalars are parallel.
  EXPECT_NEAR(cosine_similarity(student(1, {{"X", 40}, {"Y", 90}}), student(2, {{"X", 80}, {"Z", 10}})), 1.0, 1e-12);
  // The zero-filled variant sees the extra courses.
  EXPECT_LT(cosine_similarity_union(student(1, {{"X", 40}, {"Y", 90}}), student(2, {{"X", 80}, {"Z", 10}})), 0.5);
}

TEST(Cosine, ZeroMarksGiveZero) {
  EXPECT_EQ(cosine_similarity(student(1, {{"X", 0}}), student(2, {{"X", 50}})), 0.0);
}

TEST(Cosine, Properties) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> mark(0, 100), scale(2, 9);
  for (int trial = 0; trial < 500; ++trial) {
    auto r = courserec::testing::random_roster(rng, 2, 8, 0.8);
    auto ds = r.to_dataset();
    const auto& a = ds.student(1);
    const auto& b = ds.student(2);
    const double ab = cosine_similarity(a, b);
    EXPECT_NEAR(ab, cosine_similarity(b, a), 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    if (!a.marks.empty() && std::any_of(a.marks.begin(), a.marks.end(), [](auto& p) { return p.second > 0; })) {
      EXPECT_NEAR(cosine_similarity(a, a), 1.0, 1e-12);
    }
    auto scaled = a;
    const int f = scale(rng);
    for (auto& [c, m] : scaled.marks) m *= f;
    EXPECT_NEAR(cosine_similarity(scaled, b), ab, 1e-12);
  }
}

// --- eligible_neighbors / select_k_nearest ---------------------------------

TEST(EligibleNeighbors, NoRaters) {
  auto ds = catalogue_of({"X", "P"});
  ds.add_student(student(1, {{"P", 70}}));
  EXPECT_TRUE(eligible_neighbors(ds, ds.student(1), "X").empty());
}

TEST(EligibleNeighbors, DropsZeroOverlapAndSorts) {
  auto ds = catalogue_of({"X", "P", "Q", "R"});
  ds.add_student(student(1, {{"P", 70}, {"Q", 50}}));
  ds.add_student(student(2, {{"X", 60}, {"P", 70}, {"Q", 50}}));  // sim 1
  ds.add_student(student(3, {{"X", 60}, {"R", 70}}));             // no overlap
  ds.add_student(student(4, {{"X", 60}, {"P", 50}, {"Q", 70}}));  // sim < 1
  auto scores = eligible_neighbors(ds, ds.student(1), "X");
  ASSERT_EQ(scores.size(), 2u);
  EXPECT_EQ(scores[0].neighbor_id, 2);
  EXPECT_EQ(scores[1].neighbor_id, 4);
  EXPECT_GT(scores[0].value, scores[1].value);
}

TEST(EligibleNeighbors, TiesByAscendingIdAndNoCap) {
  auto ds = catalogue_of({"X", "P"});
  ds.add_student(student(100, {{"P", 70}}));
  for (int id = 12; id >= 1; --id) ds.add_student(student(id, {{"X", 50 + id}, {"P", 40 + id}}));
  auto scores = eligible_neighbors(ds, ds.student(100), "X");
  ASSERT_EQ(scores.size(), 12u);  // all sim 1.0
  for (std::size_t i = 0; i < scores.size(); ++i) EXPECT_EQ(scores[i].neighbor_id, StudentId(i + 1));
}

TEST(EligibleNeighbors, UnknownCourse) {
  auto ds = catalogue_of({"P"});
  ds.add_student(student(1, {{"P", 70}}));
  EXPECT_THROW(eligible_neighbors(ds, ds.student(1), "NOPE"), Error);
}

TEST(SelectKNearest, Truncation) {
  std::vector<SimilarityScore> twelve;
  for (int i = 0; i < 12; ++i) twelve.push_back({i + 1, 1.0 - i * 0.01});
  auto ten = select_k_nearest(twelve, {});
  ASSERT_EQ(ten.size(), 10u);
  EXPECT_EQ(ten.back().neighbor_id, 10);
  EXPECT_EQ(select_k_nearest({twelve.begin(), twelve.begin() + 4}, {}).size(), 4u);
  EXPECT_TRUE(select_k_nearest({}, {}).empty());
  EXPECT_THROW(select_k_nearest(twelve, KnnConfig{0, 3}), Error);
}

// --- predict_marks ----------------------------------------------------------

TEST(PredictMarks, SingleNeighborCollapses) {
  auto ds = catalogue_of({"X", "P", "Q"});
  ds.add_student(student(2, {{"X", 80}, {"Q", 70}}));
  auto target = student(1, {{"P", 70}});
  EXPECT_DOUBLE_EQ(predict_marks(target, "X", {{2, 1.0}}, ds), 75.0);
}

TEST(PredictMarks, TwoNeighborsHandEvaluated) {
  auto ds = catalogue_of({"X", "P", "Q", "R"});
  ds.add_student(student(2, {{"X", 90}, {"Q", 70}}));  // avg 80
  ds.add_student(student(3, {{"X", 60}, {"R", 80}}));  // avg 70
  auto target = student(1, {{"P", 70}});
  // 70 + (0.8 * 10 + 0.4 * -10) / 1.2
  EXPECT_NEAR(predict_marks(target, "X", {{2, 0.8}, {3, 0.4}}, ds), 70.0 + 4.0 / 1.2, 1e-12);
}

TEST(PredictMarks, ClampedToHundred) {
  auto ds = catalogue_of({"X", "P", "Q"});
  ds.add_student(student(2, {{"X", 100}, {"Q", 92}}));  // avg 96, bias +4
  auto target = student(1, {{"P", 99}});
  EXPECT_DOUBLE_EQ(predict_marks(target, "X", {{2, 1.0}}, ds), 100.0);
}

TEST(PredictMarks, ClampedToZero) {
  auto ds = catalogue_of({"X", "P", "Q"});
  ds.add_student(student(2, {{"X", 0}, {"Q", 100}}));  // bias -50
  auto target = student(1, {{"P", 10}});
  EXPECT_DOUBLE_EQ(predict_marks(target, "X", {{2, 1.0}}, ds), 0.0);
}

TEST(PredictMarks, ZeroSimilaritySum) {
  auto ds = catalogue_of({"X", "P"});
  ds.add_student(student(2, {{"X", 80}}));
  try {
    predict_marks(student(1, {{"P", 70}}), "X", {{2, 0.0}}, ds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroSimilaritySum);
  }
  EXPECT_THROW(predict_marks(student(1, {{"P", 70}}), "X", {}, ds), Error);
}

// --- status_of --------------------------------------------------------------

TEST(StatusOf, ExamplesFromScenarioTable) {
  EXPECT_EQ(status_of(86), (GradeStatus{Grade::A, Status::HighRecommendation}));
  EXPECT_EQ(status_of(60), (GradeStatus{Grade::D, Status::StudentDecision}));
  EXPECT_EQ(status_of(49.999), (GradeStatus{Grade::F, Status::NotRecommended}));
  EXPECT_EQ(status_of(65), (GradeStatus{Grade::C, Status::LowRecommendation}));
  EXPECT_EQ(status_of(76), (GradeStatus{Grade::BPlus, Status::Recommended}));
  EXPECT_EQ(status_of(70), (GradeStatus{Grade::BMinus, Status::Recommended}));
}

TEST(StatusOf, Monotone) {
  int prev_rank = 0;
  int prev_grade = static_cast<int>(Grade::F) + 1;
  for (int i = 0; i <= 100000; ++i) {
    auto gs = status_of(i / 1000.0);
    ASSERT_GE(status_rank(gs.status), prev_rank) << i / 1000.0;
    ASSERT_LE(static_cast<int>(gs.grade), prev_grade) << i / 1000.0;
    prev_rank = status_rank(gs.status);
    prev_grade = static_cast<int>(gs.grade);
  }
}

// --- recommend --------------------------------------------------------------

TEST(Recommend, AlreadyStudied) {
  auto ds = catalogue_of({"CS101", "P"});
  ds.add_student(student(1920, {{"CS101", 80}}));
  auto rec = recommend(ds, 1920, "CS101");
  EXPECT_EQ(rec.outcome, Outcome::AlreadyStudied);
  EXPECT_EQ(rec.status, Status::AlreadyStudied);
  EXPECT_FALSE(rec.predicted_marks);
  EXPECT_FALSE(rec.grade);
}

TEST(Recommend, NotEnoughDataWithTwoNeighbors) {
  auto ds = catalogue_of({"X", "P"});
  ds.add_student(student(1, {{"P", 70}}));
  ds.add_student(student(2, {{"X", 70}, {"P", 60}}));
  ds.add_student(student(3, {{"X", 80}, {"P", 65}}));
  auto rec = recommend(ds, 1, "X");
  EXPECT_EQ(rec.outcome, Outcome::NotEnoughData);
  EXPECT_EQ(rec.status, Status::NotEnoughData);
  EXPECT_EQ(rec.eligible_neighbors, 2);
}

TEST(Recommend, ThresholdIsInclusive) {
  auto ds = catalogue_of({"X", "P"});
  ds.add_student(student(1, {{"P", 70}}));
  for (int id = 2; id <= 4; ++id) ds.add_student(student(id, {{"X", 70}, {"P", 60}}));
  EXPECT_EQ(recommend(ds, 1, "X").outcome, Outcome::NotEnoughData);  // 3 <= 3
  ds.add_student(student(5, {{"X", 70}, {"P", 60}}));
  EXPECT_EQ(recommend(ds, 1, "X").outcome, Outcome::Predicted);  // 4 > 3
}

TEST(Recommend, SingleNeighborComposition) {
  auto ds = catalogue_of({"X", "P"});
  ds.add_student(student(1, {{"P", 70}}));
  ds.add_student(student(2, {{"X", 80}, {"P", 70}}));
  auto rec = recommend(ds, 1, "X", KnnConfig{10, 0});
  ASSERT_EQ(rec.outcome, Outcome::Predicted);
  EXPECT_DOUBLE_EQ(*rec.predicted_marks, 75.0);
  EXPECT_EQ(rec.grade, Grade::BPlus);
  EXPECT_EQ(rec.status, Status::Recommended);
  EXPECT_EQ(rec.neighbors_used, 1);
}

TEST(Recommend, CapsNeighborsAtK) {
  auto ds = catalogue_of({"X", "P", "Q"});
  ds.add_student(student(1, {{"P", 70}, {"Q", 60}}));
  for (int id = 2; id <= 14; ++id) ds.add_student(student(id, {{"X", 60}, {"P", 40 + id}, {"Q", 80 - id}}));
  auto rec = recommend(ds, 1, "X");
  EXPECT_EQ(rec.eligible_neighbors, 13);
  EXPECT_EQ(rec.neighbors_used, 10);
  EXPECT_EQ(recommend(ds, 1, "X", KnnConfig{3, 3}).neighbors_used, 3);
}

TEST(Recommend, Errors) {
  auto ds = catalogue_of({"X", "P"});
  ds.add_student(student(1, {}));
  auto kind = [&](StudentId id, const char* code) {
    try {
      recommend(ds, id, code);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Io;
  };
  EXPECT_EQ(kind(2, "X"), ErrorKind::UnknownStudent);
  EXPECT_EQ(kind(1, "NOPE"), ErrorKind::UnknownCourse);
  EXPECT_EQ(kind(1, "X"), ErrorKind::EmptyHistory);
}

TEST(Recommend, DegreeDoesNotRestrictNeighbors) {
  auto ds = catalogue_of({"X", "P"});
  ds.add_student(student(1, {{"P", 70}}, "BS A"));
  for (int id = 2; id <= 5; ++id) ds.add_student(student(id, {{"X", 70}, {"P", 60}}, "BS B"));
  EXPECT_EQ(recommend(ds, 1, "X").neighbors_used, 4);
}

TEST(Recommend, MatchesBruteForceOracle) {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> kdist(1, 10), mdist(0, 3);
  int predicted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto r = courserec::testing::random_roster(rng);
    auto ds = r.to_dataset();
    const KnnConfig cfg{kdist(rng), mdist(rng)};
    for (int s = 0; s < r.students; ++s) {
      for (int c = 0; c < r.courses; ++c) {
        auto want = courserec::testing::oracle_predict(r, s, c, cfg.k, cfg.min_raters);
        const auto code = "C" + std::to_string(c);
        if (want.code == -3) {
          EXPECT_THROW(recommend(ds, s + 1, code, cfg), Error);
          continue;
        }
        auto got = recommend(ds, s + 1, code, cfg);
        if (want.code == -1) {
          EXPECT_EQ(got.outcome, Outcome::AlreadyStudied);
        } else if (want.code == -2) {
          EXPECT_EQ(got.outcome, Outcome::NotEnoughData);
        } else {
          ASSERT_EQ(got.outcome, Outcome::Predicted);
          EXPECT_NEAR(*got.predicted_marks, want.predicted, 1e-9);
          EXPECT_EQ(got.neighbors_used, want.neighbors_used);
          EXPECT_LE(got.neighbors_used, cfg.k);
          ++predicted;
        }
      }
    }
  }
  EXPECT_GT(predicted, 100) << "generator should exercise the prediction branch";
}

// --- cold-start lists -------------------------------------------------------

TEST(PopularCourses, OrderingAndTieBreak) {
  auto ds = catalogue_of({"B2", "A1", "C3", "D4"});
  for (int id = 1; id <= 5; ++id) ds.add_student(student(id, {{"A1", 50}, {"B2", 60}}));
  ds.add_student(student(6, {{"C3", 70}, {"A1", 50}}));
  auto list = popular_courses(ds);
  ASSERT_EQ(list.size(), 4u);
  EXPECT_EQ(list[0].course.code, "A1");
  EXPECT_EQ(list[0].rater_count, 6u);
  EXPECT_EQ(list[1].course.code, "B2");
  EXPECT_EQ(list[2].course.code, "C3");
  EXPECT_EQ(list[3].course.code, "D4");
  EXPECT_EQ(list[3].rater_count, 0u);
  EXPECT_EQ(popular_courses(ds, 1).size(), 1u);
}

TEST(PopularCourses, EqualCountsOrderedByCode) {
  auto ds = catalogue_of({"ZZ1", "AA1"});
  for (int id = 1; id <= 5; ++id) ds.add_student(student(id, {{"ZZ1", 50}, {"AA1", 60}}));
  auto list = popular_courses(ds);
  EXPECT_EQ(list[0].course.code, "AA1");
  EXPECT_EQ(list[1].course.code, "ZZ1");
}

TEST(PopularCourses, Empty) { EXPECT_TRUE(popular_courses(Dataset{}).empty()); }

TEST(TopCourses, SingleRaterWithNoThreshold) {
  auto ds = catalogue_of({"ECTD520"});
  ds.add_student(student(1, {{"ECTD520", 86}}));
  auto list = top_courses(ds, 20, 0);
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].display_average(), 86);
}

TEST(TopCourses, ThresholdOrderingAndRounding) {
  auto ds = catalogue_of({"A1", "B1", "C1", "D1"});
  // A1: 4 raters, mean 70.5; B1: 4 raters mean 70.5 (tie -> code order);
  // C1: 5 raters mean 80.2; D1: 2 raters (excluded at min_raters 3).
  int a[] = {70, 71, 70, 71}, c[] = {80, 80, 81, 80, 80};
  for (int i = 0; i < 5; ++i) {
    std::map<CourseCode, int> m{{"C1", c[i]}};
    if (i < 4) m["A1"] = a[i], m["B1"] = a[3 - i];
    if (i < 2) m["D1"] = 99;
    ds.add_student(student(i + 1, m));
  }
  auto list = top_courses(ds);
  ASSERT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0].course.code, "C1");
  EXPECT_NEAR(list[0].average_marks, 80.2, 1e-12);
  EXPECT_EQ(list[0].display_average(), 80);
  EXPECT_EQ(list[1].course.code, "A1");
  EXPECT_EQ(list[2].course.code, "B1");
  EXPECT_EQ(list[1].display_average(), 71);  // 70.5 rounds half away from zero
  EXPECT_TRUE(top_courses(Dataset{}).empty());
}
