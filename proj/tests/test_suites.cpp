#include <gtest/gtest.h>

#include <set>

#include "segrelab/suites.hpp"

using namespace segrelab;

// In-scope statement labels, kept by hand so that registry drift shows up here.
TEST(Suites, RegistryCoversEveryInScopeStatement) {
  const std::set<std::string> expected{
      "prop:wystaje2kolczaty", "lem:kolczat2minim", "exm:nested-hyperplanes", "exm:spiky:nonfloppy",
      "lem:hip:restricted", "exm:affinconnected", "fct:prodpls:gener", "fct:prodapls:gener", "rem:notapls",
      "fct:afred:gener", "rem:afred-converse", "prop:strong:afprodPLS", "prop:af2horlines", "fct:autyaf:gener",
      "lem:veblgamma", "cor:autext", "thm:hip:inprod", "rem:correl", "rem:reduct:notAPLS", "lem:prezerw:wystaw",
      "cor:wystawLS", "prop:redefprod", "lem:hipynieluskowate", "prop:degenkolcz", "prop:isomorph",
      "cor:affofprod:strong", "prop:affofprod:strong", "cor:strongasaffine", "thm:defofparal", "lem:siec",
      "lem:quadrparal", "fct:parallelism", "fct:prostewlistku", "prop:parallelglobal", "thm:auty:prod",
      "fact:covering", "prop:hipamu", "fct:mu", "cor:hyperplane-exists", "rem:gkz-spiky", "fct:hipygrass",
      "fct:hipypolar", "prop:hip:inpolarprod", "lem:klinear", "prop:hipaingrass", "cor:hip:inpolarprod:1",
      "cor:radical", "cor:hip:inproj2prod", "rem:alternating-nonspiky", "lem:niekolczaty", "prop:hk1k2",
      "prop:affproj", "exm:final-aut"};
  std::set<std::string> got, ids;
  for (const auto& s : suite_registry()) {
    EXPECT_TRUE(got.insert(s.statement).second) << "two suites for " << s.statement;
    EXPECT_TRUE(ids.insert(s.id).second) << "duplicate id " << s.id;
  }
  EXPECT_EQ(got, expected);
  EXPECT_TRUE(std::is_sorted(suite_registry().begin(), suite_registry().end(),
                             [](const SuiteDef& a, const SuiteDef& b) { return a.id < b.id; }));
}

TEST(Suites, RecordsAreDeterministic) {
  SuiteParams params;
  params.seed = 3;
  for (const char* id : {"lem-hip-restricted", "prop-fct-mu", "prop-parallelglobal", "final-example-aut"}) {
    const auto* def = find_suite(id);
    ASSERT_NE(def, nullptr) << id;
    EXPECT_EQ(to_json(run_suite(*def, params), false), to_json(run_suite(*def, params), false)) << id;
  }
}

TEST(Suites, GatesSkipInsteadOfFailing) {
  SuiteParams params;
  params.p = 2;
  for (const char* id : {"fact-covering", "lem-quadrparal", "prop-parallelglobal", "thm-defofparal"})
    EXPECT_EQ(run_suite(*find_suite(id), params).outcome.status, SuiteStatus::SkippedHypothesis) << id;
  params.p = 3;
  params.max_points = 100;
  EXPECT_EQ(run_suite(*find_suite("prop-h-k1k2"), params).outcome.status, SuiteStatus::SkippedHypothesis);
}

TEST(Suites, CharacteristicTwoIsFlagged) {
  SuiteParams params;
  params.p = 2;
  EXPECT_TRUE(run_suite(*find_suite("cor-radical"), params).outcome.outside_hypothesis);
  params.p = 3;
  EXPECT_FALSE(run_suite(*find_suite("cor-radical"), params).outcome.outside_hypothesis);
}

TEST(Suites, KnownCounterexamplesCarryWitnesses) {
  const SuiteParams params;
  for (const char* id : {"exm-spiky-nonflappy", "lem-quadrparal", "cor-hip-inpolarprod-1"}) {
    const auto rec = run_suite(*find_suite(id), params);
    EXPECT_EQ(rec.outcome.status, SuiteStatus::Fail) << id;
    EXPECT_FALSE(rec.outcome.witness.is_null()) << id;
  }
}

TEST(Suites, TraceFormIsNonDegenerateOnEverySegment) {
  for (int p : {2, 3, 5}) {
    const auto mu = suites::trace_form(p);
    for (int i = 0; i < 3; ++i) EXPECT_TRUE(segment_nondegenerate(mu, i)) << p << " " << i;
  }
}
