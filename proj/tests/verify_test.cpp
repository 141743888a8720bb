#include <cmath>

#include "gtest/gtest.h"
#include "support.hpp"

namespace optce {
namespace {

using testing::chicken;
using testing::prisoners_dilemma;

CorrelatedDistribution chicken_optimum()
{
   return {{{{0, 0}, 0.5}, {{0, 1}, 0.25}, {{1, 0}, 0.25}}};
}

TEST(VerifyTest, dominant_strategy_point_mass)
{
   const auto r = check_ce(prisoners_dilemma(), {{{{1, 1}, 1.}}});
   EXPECT_EQ(r.min_ce_value, 1.);
   EXPECT_EQ(r.probability_residual, 0.);
   EXPECT_EQ(r.expected_utilities, (std::vector< double >{1., 1.}));
   EXPECT_EQ(r.objective, 2.);
}

TEST(VerifyTest, chicken_optimum_is_tight)
{
   const auto r = check_ce(chicken(), chicken_optimum());
   EXPECT_NEAR(r.min_ce_value, 0., 1e-15);
   EXPECT_EQ(r.expected_utilities, (std::vector< double >{5.25, 5.25}));
   EXPECT_EQ(r.objective, 10.5);
   // C -> D for player 0: 0.5 (6 - 7) + 0.25 (2 - 0)
   EXPECT_EQ(r.ce_values[chicken().incentive_index(0, 0, 1)], 0.);
   // D -> C for player 0: 0.25 (7 - 6)
   EXPECT_EQ(r.ce_values[chicken().incentive_index(0, 1, 0)], 0.25);
}

TEST(VerifyTest, uniform_distributions)
{
   const auto g = testing::constant_game({2, 3}, 4.);
   CorrelatedDistribution uniform;
   for(const auto& s : enumerate_profiles(g)) {
      uniform.support.emplace_back(s, 1. / 6.);
   }
   const auto r = check_ce(g, uniform);
   for(double v : r.ce_values) {
      EXPECT_EQ(v, 0.);
   }
   for(double v : r.cce_values) {
      EXPECT_EQ(v, 0.);
   }
   EXPECT_NEAR(r.probability_residual, 0., 1e-15);

   const CorrelatedDistribution quarter{{{{0, 0}, .25}, {{0, 1}, .25}, {{1, 0}, .25}, {{1, 1}, .25}}};
   EXPECT_EQ(expected_utilities(chicken(), quarter), (std::vector< double >{3.75, 3.75}));
}

TEST(VerifyTest, point_mass_utilities)
{
   const auto g = gen::normal_form({2, 3, 2}, 3);
   const PureProfile s{1, 2, 0};
   const auto eu = expected_utilities(g, {{{s, 1.}}});
   for(std::size_t p = 0; p < 3; ++p) {
      EXPECT_EQ(eu[p], utility(g, p, s));
   }
}

TEST(VerifyTest, rejects_invalid_distributions)
{
   const auto ch = chicken();
   EXPECT_THROW((void)check_ce(ch, {{{{0, 0}, -0.5}, {{1, 1}, 1.5}}}), InvalidArgument);
   EXPECT_THROW((void)check_ce(ch, {{{{0, 0}, 0.5}, {{0, 0}, 0.5}}}), InvalidArgument);
   EXPECT_THROW((void)check_ce(ch, {{{{0, 2}, 1.}}}), InvalidArgument);
   EXPECT_THROW((void)check_ce(ch, {{{{0, 0}, std::nan("")}}}), InvalidArgument);
   EXPECT_THROW((void)check_ce(ch, chicken_optimum(), {1.}), InvalidArgument);
}

TEST(VerifyTest, reports_mass_residual)
{
   const auto r = check_ce(chicken(), {{{{0, 0}, 0.5}, {{1, 1}, 0.25}}});
   EXPECT_EQ(r.probability_residual, 0.25);
}

TEST(VerifyTest, matches_dense_formula)
{
   gen::Rng rng(41);
   for(std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto g = gen::normal_form({2, 3, 2}, seed);
      const auto table = testing::utility_table(g);
      std::vector< PureProfile > profiles;
      for(const auto& s : enumerate_profiles(g)) {
         profiles.push_back(s);
      }
      std::vector< double > x(profiles.size());
      double total = 0.;
      for(auto& v : x) {
         v = rng.uniform();
         total += v;
      }
      CorrelatedDistribution dist;
      for(std::size_t k = 0; k < x.size(); ++k) {
         x[k] /= total;
         dist.support.emplace_back(profiles[k], x[k]);
      }
      const auto index_of = [&](const PureProfile& s) {
         return static_cast< std::size_t >(
            std::find(profiles.begin(), profiles.end(), s) - profiles.begin());
      };
      const auto r = check_ce(g, dist);
      for(std::size_t p = 0; p < 3; ++p) {
         for(int i = 0; i < g.actions(p); ++i) {
            for(int j = 0; j < g.actions(p); ++j) {
               if(i == j) {
                  continue;
               }
               double expected = 0.;
               for(std::size_t k = 0; k < profiles.size(); ++k) {
                  if(profiles[k][p] != i) {
                     continue;
                  }
                  auto t = profiles[k];
                  t[p] = j;
                  expected += x[k] * (table[k][p] - table[index_of(t)][p]);
               }
               EXPECT_NEAR(r.ce_values[g.incentive_index(p, i, j)], expected, 1e-12);
            }
         }
      }
      double sum = 0.;
      for(double u : r.expected_utilities) {
         sum += u;
      }
      EXPECT_NEAR(sum, r.objective, 1e-9);
   }
}

TEST(VerifyTest, expansion_examples)
{
   const auto g2 = GameInstance(SingletonCongestionGame(2, {{1, 1}, {1, 1}}));
   const auto a = expand_exchangeable(g2, {{{{1, 1}, 1.}}});
   ASSERT_EQ(a.support.size(), 2u);
   EXPECT_EQ(a.support[0], (std::pair< PureProfile, double >{{0, 1}, 0.5}));
   EXPECT_EQ(a.support[1], (std::pair< PureProfile, double >{{1, 0}, 0.5}));

   const auto b = expand_exchangeable(g2, {{{{2, 0}, 1.}}});
   ASSERT_EQ(b.support.size(), 1u);
   EXPECT_EQ(b.support[0], (std::pair< PureProfile, double >{{0, 0}, 1.}));

   const auto g3 = GameInstance(SingletonCongestionGame(3, {{1, 1, 1}, {1, 1, 1}}));
   const auto c = expand_exchangeable(g3, {{{{2, 1}, 1.}}});
   ASSERT_EQ(c.support.size(), 3u);
   for(const auto& [s, x] : c.support) {
      EXPECT_EQ(count_vector(s, 2), (CountVector{2, 1}));
      EXPECT_DOUBLE_EQ(x, 1. / 3.);
   }
}

TEST(VerifyTest, expansion_rejects_bad_input)
{
   const auto g = gen::singleton_congestion(8, 3, 1);
   EXPECT_THROW((void)expand_exchangeable(g, {{{{3, 3, 2}, 1.}}}, 100), ResourceLimit);
   EXPECT_NO_THROW((void)expand_exchangeable(g, {{{{3, 3, 2}, 1.}}}, 560));
   EXPECT_THROW((void)expand_exchangeable(g, {{{{3, 3, 1}, 1.}}}), InvalidArgument);
   EXPECT_THROW((void)expand_exchangeable(g, {{{{4, 4}, 1.}}}), InvalidArgument);
   EXPECT_THROW((void)expand_exchangeable(g, {{{{4, 4, 0}, -1.}}}), InvalidArgument);
}

TEST(VerifyTest, expansion_agrees_with_count_space)
{
   gen::Rng rng(42);
   for(std::uint64_t seed = 0; seed < 15; ++seed) {
      const int n = 2 + static_cast< int >(seed % 4);
      const int k = 2 + static_cast< int >(seed % 2);
      const auto g = gen::singleton_congestion(static_cast< std::size_t >(n), static_cast< std::size_t >(k), seed);
      const auto& scg = *g.as< SingletonCongestionGame >();
      ExchangeableDistribution xc;
      double total = 0.;
      for(const auto& c : testing::all_count_vectors(n, k)) {
         if(rng.below(2) == 0) {
            xc.support.emplace_back(c, rng.uniform());
            total += xc.support.back().second;
         }
      }
      if(xc.support.empty()) {
         xc.support.emplace_back(CountVector(static_cast< std::size_t >(k), 0), 1.);
         xc.support.back().first[0] = n;
         total = 1.;
      }
      for(auto& [c, x] : xc.support) {
         x /= total;
      }
      const auto r = check_cce(g, expand_exchangeable(g, xc));
      EXPECT_NEAR(r.probability_residual, 0., 1e-12);
      for(int j = 0; j < k; ++j) {
         double count_space = 0.;
         for(const auto& [c, x] : xc.support) {
            count_space += x * scg_deviation_gap(scg, c, j);
         }
         count_space /= n;
         for(std::size_t p = 0; p < static_cast< std::size_t >(n); ++p) {
            EXPECT_NEAR(r.cce_values[g.coarse_index(p, j)], count_space, 1e-9);
         }
      }
   }
}

}  // namespace
}  // namespace optce
