#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "llb/studies.hpp"

using namespace llb;

namespace {

constexpr double pi = std::numbers::pi;
const SchemeParams sim1{5.0, 2.0, 50.0, 1.0, 1e-3};

Vec3 zero_field(const Vec3&) { return {0, 0, 0}; }

Vec3 sim1_u0(const Vec3& x) {
  return {std::cos(2 * pi * x[0]), std::sin(2 * pi * x[1]), 2 * std::cos(2 * pi * x[0]) * std::sin(2 * pi * x[1])};
}

}  // namespace

TEST(Rate, GeometricSequence) {
  const std::vector<double> e{3.0, 3.0 / 4, 3.0 / 16, 3.0 / 64, 3.0 / 256};
  const RateSequence r = compute_rate(e);
  ASSERT_EQ(r.ratios.size(), 4u);
  for (const auto& x : r.ratios) EXPECT_EQ(*x, 2.0);
  EXPECT_EQ(*r.summary, 2.0);
}

TEST(Rate, ConvexSquareErrorSequence) {
  const std::vector<double> e{0.741, 0.393, 0.180, 0.0884, 0.0438, 0.022};
  const std::vector<double> expected{0.915, 1.127, 1.026, 1.013, 0.993};
  const RateSequence r = compute_rate(e);
  ASSERT_EQ(r.ratios.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(*r.ratios[i], expected[i], 5e-4);
  EXPECT_NEAR(*r.summary, 0.5 * (1.013 + 0.993), 1e-3);
}

TEST(Rate, LShapeErrorSequence) {
  const std::vector<double> e{1.95, 1.2, 0.7, 0.4, 0.22, 0.14};
  const std::vector<double> expected{0.700, 0.778, 0.807, 0.862, 0.652};
  const RateSequence r = compute_rate(e);
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(*r.ratios[i], expected[i], 5e-4);
}

TEST(Rate, InvalidInput) {
  EXPECT_THROW(compute_rate(std::vector<double>{1.0}), std::invalid_argument);
  EXPECT_THROW(compute_rate(std::vector<double>{1.0, 0.0, 0.5}), std::invalid_argument);
  EXPECT_THROW(compute_rate(std::vector<double>{1.0, -0.5}), std::invalid_argument);
  EXPECT_THROW(compute_rate(std::vector<double>{1.0, NAN}), std::invalid_argument);
}

TEST(Rate, TableRatesTolerateZeros) {
  ErrorTable t;
  t.levels = {{0.5, 1.0, 0.0, 2.0}, {0.25, 0.25, 0.0, 1.0}, {0.125, 0.0625, 0.0, 0.5}};
  const RateReport r = compute_rates(t);
  EXPECT_EQ(*r.l2.summary, 2.0);
  EXPECT_EQ(*r.linf.summary, 1.0);
  EXPECT_FALSE(r.h1.summary.has_value());
  for (const auto& x : r.h1.ratios) EXPECT_FALSE(x.has_value());
}

TEST(Axis, Names) {
  for (StudyAxis a : {StudyAxis::h, StudyAxis::k, StudyAxis::eps}) EXPECT_EQ(parse_study_axis(to_string(a)), a);
  EXPECT_THROW(parse_study_axis("x"), std::invalid_argument);
}

TEST(HStudy, ZeroDataGivesZeroErrorsAndNoRates) {
  const StudyResult r = h_study(unit_square_mesh(2), 3, sim1, {0.1, 4}, zero_field);
  EXPECT_EQ(r.table.axis, StudyAxis::h);
  ASSERT_EQ(r.table.levels.size(), 2u);
  for (const ErrorLevel& l : r.table.levels) {
    EXPECT_EQ(l.l2, 0.0);
    EXPECT_EQ(l.h1, 0.0);
    EXPECT_EQ(l.linf, 0.0);
  }
  EXPECT_FALSE(r.rates.l2.summary.has_value());
}

TEST(HStudy, LevelsAreMeshSizesInDecreasingOrder) {
  const StudyResult r = h_study(unit_square_mesh(2), 4, sim1, {0.05, 1}, sim1_u0);
  ASSERT_EQ(r.table.levels.size(), 3u);
  EXPECT_NEAR(r.table.levels[0].parameter, std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(r.table.levels[1].parameter, std::sqrt(2.0) / 4, 1e-15);
  EXPECT_NEAR(r.table.levels[2].parameter, std::sqrt(2.0) / 8, 1e-15);
  for (const ErrorLevel& l : r.table.levels) EXPECT_GT(l.h1, 0.0);
  EXPECT_EQ(r.rates.h1.ratios.size(), 2u);
}

TEST(HStudy, RejectsTooFewLevels) {
  EXPECT_THROW(h_study(unit_square_mesh(2), 2, sim1, {0.1, 4}, zero_field), std::invalid_argument);
}

TEST(HStudy, WarnsWhenStepExceedsInverseEstimate) {
  const StudyResult r = h_study(unit_cube_mesh(1), 3, sim1, {2.0, 1}, zero_field);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Prolong, LinearFieldHasZeroDifference) {
  const Mesh coarse = l_shape_mesh(2);
  const auto [fine, p] = refine_uniform(coarse);
  auto f = [](const Vec3& x) { return Vec3{x[0] - x[1], 2 * x[1], 0.5}; };
  const NodalField diff = prolong(p, NodalField::interpolate(coarse, f)) - NodalField::interpolate(fine, f);
  for (double v : diff.flat()) EXPECT_EQ(v, 0.0);
}

TEST(KStudy, ZeroDataGivesZeroDifferences) {
  const std::vector<int> n{2, 4, 8};
  const StudyResult r = k_study(unit_square_mesh(3), sim1, 0.1, n, zero_field);
  EXPECT_EQ(r.table.axis, StudyAxis::k);
  ASSERT_EQ(r.table.levels.size(), 2u);
  EXPECT_NEAR(r.table.levels[0].parameter, 0.05, 1e-15);
  for (const ErrorLevel& l : r.table.levels) EXPECT_EQ(l.l2, 0.0);
}

TEST(KStudy, RequiresDoublingSequence) {
  EXPECT_THROW(k_study(unit_square_mesh(2), sim1, 0.1, std::vector<int>{2, 4}, zero_field), std::invalid_argument);
  EXPECT_THROW(k_study(unit_square_mesh(2), sim1, 0.1, std::vector<int>{2, 4, 6}, zero_field), std::invalid_argument);
}

TEST(KStudy, LinearHeatReductionIsFirstOrder) {
  const SchemeParams heat{1.0, 1.0, 0.0, 0.0, 0.0};
  const std::vector<int> n{40, 80, 160, 320};  // k * lambda_max of the data below 0.3
  const StudyResult r = k_study(unit_square_mesh(8), heat, 0.5, n, [](const Vec3& x) {
    return Vec3{std::cos(pi * x[0]), std::cos(pi * x[1]) * std::cos(pi * x[0]), 1.0};
  });
  ASSERT_TRUE(r.rates.l2.summary.has_value());
  EXPECT_GE(*r.rates.l2.summary, 0.9);
  EXPECT_LE(*r.rates.l2.summary, 1.1);
}

TEST(EpsStudy, RequiresPositiveHalvingSequence) {
  const TimeGrid g{0.1, 4};
  EXPECT_THROW(eps_study(unit_square_mesh(2), sim1, g, zero_field, std::vector<double>{1e-2, 5e-3}),
               std::invalid_argument);
  EXPECT_THROW(eps_study(unit_square_mesh(2), sim1, g, zero_field, std::vector<double>{1e-2, 0.0, 0.0}),
               std::invalid_argument);
  EXPECT_THROW(eps_study(unit_square_mesh(2), sim1, g, zero_field, std::vector<double>{1e-2, 4e-3, 2e-3}),
               std::invalid_argument);
}

TEST(EpsStudy, ZeroDataHasNoEpsilonDependence) {
  const StudyResult r =
      eps_study(unit_square_mesh(3), sim1, {0.1, 4}, zero_field, std::vector<double>{1e-2, 5e-3, 2.5e-3});
  EXPECT_EQ(r.table.axis, StudyAxis::eps);
  ASSERT_EQ(r.table.levels.size(), 3u);
  for (const ErrorLevel& l : r.table.levels) EXPECT_EQ(l.l2, 0.0);
}

TEST(EpsStudy, DoubledGammaKeepsFirstOrder) {
  SchemeParams p = sim1;
  p.gamma = 100.0;
  const std::vector<double> eps{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  const StudyResult r = eps_study(unit_square_mesh(16), p, {0.5, 200}, sim1_u0, eps);
  ASSERT_TRUE(r.rates.l2.summary.has_value());
  EXPECT_GE(*r.rates.l2.summary, 0.8);
  EXPECT_LE(*r.rates.l2.summary, 1.2);
}
