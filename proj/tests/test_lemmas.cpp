#include "csma/lemmas.hpp"

#include <gtest/gtest.h>

#include <set>
#include <stdexcept>

using namespace csma;
using namespace csma::lemmas;

TEST(Lemmas, DefaultCapPassesEverySuite) {
  const auto report = verify_lemmas();
  EXPECT_TRUE(report.ok()) << render_report(report, false);
  std::set<std::string> names;
  for (const auto& s : report.suites) {
    EXPECT_TRUE(s.skipped.empty()) << s.name << ": " << s.skipped;
    EXPECT_FALSE(s.checks.empty()) << s.name;
    names.insert(s.name);
  }
  EXPECT_GE(names.size(), 10u);
  EXPECT_EQ(names.size(), report.suites.size());
}

TEST(Lemmas, SmallCapRunsASubset) {
  LemmaOptions opt;
  opt.cap = 3;
  const auto small = verify_lemmas(opt);
  EXPECT_TRUE(small.ok()) << render_report(small, false);
  EXPECT_LT(small.total_checks(), verify_lemmas().total_checks());
}

TEST(Lemmas, GoldenBlockListsConstants) {
  const auto suite = suite_golden_constants(9);
  ASSERT_TRUE(suite.ok());
  const std::string text = [&] {
    std::string all;
    for (const auto& c : suite.checks) all += c.text + "\n";
    return all;
  }();
  for (const char* value : {"179/420", "11/30", "1/5", "3/8", "2/3", "1/3"})
    EXPECT_NE(text.find(value), std::string::npos) << value;
  EXPECT_EQ(suite.checks.size(), 7u);
  // With cap 4 only the segments of length at most four remain.
  EXPECT_EQ(suite_golden_constants(4).checks.size(), 4u);
}

TEST(Lemmas, ReportRendering) {
  SuiteResult bad;
  bad.name = "demo";
  bad.claim = "a claim";
  bad.add(true, "fine");
  bad.add(false, "broken 1/2 > 1/3");
  LemmaReport report;
  report.suites.push_back(bad);
  EXPECT_FALSE(report.ok());
  EXPECT_EQ(report.total_failures(), 1u);
  const auto quiet = render_report(report, false);
  EXPECT_NE(quiet.find("[FAIL] demo"), std::string::npos);
  EXPECT_NE(quiet.find("broken 1/2 > 1/3"), std::string::npos);
  EXPECT_EQ(quiet.find("fine"), std::string::npos);
  EXPECT_NE(render_report(report, true).find("fine"), std::string::npos);
}

TEST(Lemmas, RejectsCapAboveEnumerationLimit) {
  LemmaOptions opt;
  opt.cap = 11;
  EXPECT_THROW(verify_lemmas(opt), std::invalid_argument);
}

TEST(Lemmas, IndividualSuitesRecordExactValues) {
  const auto lower = suite_circle_lower_bound(10);
  ASSERT_TRUE(lower.ok());
  EXPECT_NE(lower.checks[1].text.find("C_5/5 = 2/5 == 2/5"), std::string::npos);
  const auto pair = suite_pair_bound(5);
  ASSERT_TRUE(pair.ok());
  EXPECT_FALSE(pair.checks.empty());
}
