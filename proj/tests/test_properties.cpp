#include <gtest/gtest.h>

#include <cctype>

#include "support/properties.hpp"

namespace qcsp::testing {
namespace {

class PropertySuiteTest : public ::testing::TestWithParam<std::size_t> {};

TEST_P(PropertySuiteTest, NoFailures) {
  const PropertySuite suite = acceptance_suites()[GetParam()];
  PropertyResult r = suite.run();
  EXPECT_EQ(r.failures, 0) << r.first_failure;
  EXPECT_GE(r.cases, suite.min_cases);
}

std::string suite_name(const ::testing::TestParamInfo<std::size_t>& info) {
  std::string name = acceptance_suites()[info.param].name;
  for (char& c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  }
  return name;
}

INSTANTIATE_TEST_SUITE_P(All, PropertySuiteTest,
                         ::testing::Range<std::size_t>(0, acceptance_suites().size()),
                         suite_name);

}  // namespace
}  // namespace qcsp::testing
