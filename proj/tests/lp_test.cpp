#include <cmath>

#include "gtest/gtest.h"
#include "support.hpp"

namespace optce {
namespace {

using lp::Relation;
using lp::Sense;
using lp::Status;

double row_value(const lp::Row& r, const std::vector< double >& x)
{
   double v = 0.;
   for(std::size_t k = 0; k < x.size(); ++k) {
      v += r.coefficients[k] * x[k];
   }
   return v;
}

/// KKT check for problems with x >= 0 and no upper bounds: primal feasibility, dual sign
/// conventions, reduced-cost signs, complementary slackness and zero duality gap.
void expect_certified(const lp::Problem& prob, const lp::Solution& sol, double tol = 1e-8)
{
   ASSERT_EQ(sol.status, Status::optimal);
   ASSERT_EQ(sol.primal.size(), prob.variables());
   ASSERT_EQ(sol.duals.size(), prob.rows.size());
   const double sense = prob.sense == Sense::maximize ? 1. : -1.;
   double dual_objective = 0.;
   for(std::size_t i = 0; i < prob.rows.size(); ++i) {
      const auto& r = prob.rows[i];
      const double v = row_value(r, sol.primal);
      const double d = sense * sol.duals[i];
      switch(r.relation) {
         case Relation::less_equal:
            EXPECT_LE(v, r.rhs + tol);
            EXPECT_GE(d, -tol);
            break;
         case Relation::greater_equal:
            EXPECT_GE(v, r.rhs - tol);
            EXPECT_LE(d, tol);
            break;
         case Relation::equal:
            EXPECT_NEAR(v, r.rhs, tol);
            break;
      }
      EXPECT_LE(std::abs(d * (v - r.rhs)), 1e-7);
      dual_objective += sol.duals[i] * r.rhs;
   }
   std::size_t support = 0;
   for(std::size_t k = 0; k < prob.variables(); ++k) {
      EXPECT_GE(sol.primal[k], -tol);
      double reduced = prob.objective[k];
      for(std::size_t i = 0; i < prob.rows.size(); ++i) {
         reduced -= sol.duals[i] * prob.rows[i].coefficients[k];
      }
      EXPECT_LE(sense * reduced, tol);
      EXPECT_LE(std::abs(reduced * sol.primal[k]), 1e-7);
      support += sol.primal[k] > 1e-12 ? 1 : 0;
   }
   EXPECT_LE(support, prob.rows.size());
   EXPECT_NEAR(dual_objective, sol.objective, 1e-8 * (1. + std::abs(sol.objective)));
}

TEST(LpTest, single_bound)
{
   lp::Problem prob;
   prob.objective = {1.};
   prob.add_row({1.}, Relation::less_equal, 1.);
   const auto sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_DOUBLE_EQ(sol.primal[0], 1.);
   EXPECT_DOUBLE_EQ(sol.duals[0], 1.);
   EXPECT_DOUBLE_EQ(sol.objective, 1.);
}

TEST(LpTest, simplex_equality)
{
   lp::Problem prob;
   prob.objective = {1., 1.};
   prob.add_row({1., 1.}, Relation::equal, 1.);
   const auto sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_DOUBLE_EQ(sol.objective, 1.);
   EXPECT_DOUBLE_EQ(sol.duals[0], 1.);
   expect_certified(prob, sol);
}

TEST(LpTest, chicken_full_program)
{
   // variables: (C,C), (C,D), (D,C), (D,D)
   lp::Problem prob;
   prob.objective = {12., 9., 9., 0.};
   prob.add_row({-1., 2., 0., 0.}, Relation::greater_equal, 0.);  // p0: C -> D
   prob.add_row({0., 0., 1., -2.}, Relation::greater_equal, 0.);  // p0: D -> C
   prob.add_row({-1., 0., 2., 0.}, Relation::greater_equal, 0.);  // p1: C -> D
   prob.add_row({0., 1., 0., -2.}, Relation::greater_equal, 0.);  // p1: D -> C
   prob.add_row({1., 1., 1., 1.}, Relation::equal, 1.);
   const auto sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_NEAR(sol.objective, 10.5, 1e-9);
   EXPECT_NEAR(sol.primal[0], 0.5, 1e-9);
   EXPECT_NEAR(sol.primal[1], 0.25, 1e-9);
   EXPECT_NEAR(sol.primal[2], 0.25, 1e-9);
   expect_certified(prob, sol);
}

TEST(LpTest, minimize_with_ge_rows)
{
   lp::Problem prob;
   prob.sense = Sense::minimize;
   prob.objective = {2., 3.};
   prob.add_row({1., 1.}, Relation::greater_equal, 4.);
   prob.add_row({1., 3.}, Relation::greater_equal, 6.);
   const auto sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_NEAR(sol.objective, 9., 1e-9);
   EXPECT_NEAR(sol.primal[0], 3., 1e-9);
   EXPECT_NEAR(sol.primal[1], 1., 1e-9);
   expect_certified(prob, sol);
}

TEST(LpTest, free_variable)
{
   // max r s.t. r <= x, r <= 1 - x
   lp::Problem prob;
   prob.objective = {1., 0.};
   prob.lower = {-lp::kInf, 0.};
   prob.add_row({1., -1.}, Relation::less_equal, 0.);
   prob.add_row({1., 1.}, Relation::less_equal, 1.);
   auto sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_NEAR(sol.objective, 0.5, 1e-12);

   prob.rows[1].rhs = -3.;
   sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_NEAR(sol.objective, -3., 1e-12);
   EXPECT_NEAR(sol.primal[0], -3., 1e-12);
}

TEST(LpTest, bounds)
{
   lp::Problem prob;
   prob.objective = {1., 1.};
   prob.lower = {1., -2.};
   prob.upper = {3., lp::kInf};
   prob.add_row({1., 2.}, Relation::less_equal, 4.);
   const auto sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_NEAR(sol.primal[0], 3., 1e-12);
   EXPECT_NEAR(sol.primal[1], 0.5, 1e-12);
   EXPECT_NEAR(sol.objective, 3.5, 1e-12);
}

TEST(LpTest, infeasible_and_unbounded_are_statuses)
{
   lp::Problem bad;
   bad.objective = {1.};
   bad.add_row({1.}, Relation::less_equal, 1.);
   bad.add_row({1.}, Relation::greater_equal, 2.);
   EXPECT_EQ(lp::solve(bad).status, Status::infeasible);

   lp::Problem open;
   open.objective = {1., 0.};
   open.add_row({1., -1.}, Relation::less_equal, 1.);
   EXPECT_EQ(lp::solve(open).status, Status::unbounded);
}

TEST(LpTest, degenerate_cycling_example_terminates)
{
   lp::Problem prob;
   prob.sense = Sense::minimize;
   prob.objective = {-0.75, 20., -0.5, 6.};
   prob.add_row({0.25, -8., -1., 9.}, Relation::less_equal, 0.);
   prob.add_row({0.5, -12., -0.5, 3.}, Relation::less_equal, 0.);
   prob.add_row({0., 0., 1., 0.}, Relation::less_equal, 1.);
   const auto sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_NEAR(sol.objective, -1.25, 1e-12);
   expect_certified(prob, sol);
}

TEST(LpTest, redundant_equalities)
{
   lp::Problem prob;
   prob.objective = {1., 2., 0.};
   prob.add_row({1., 1., 1.}, Relation::equal, 1.);
   prob.add_row({2., 2., 2.}, Relation::equal, 2.);
   prob.add_row({0., 1., 0.}, Relation::less_equal, 0.25);
   const auto sol = lp::solve(prob);
   ASSERT_EQ(sol.status, Status::optimal);
   EXPECT_NEAR(sol.objective, 1.25, 1e-12);
   expect_certified(prob, sol);
}

TEST(LpTest, rejects_malformed_input)
{
   lp::Problem prob;
   prob.objective = {1., 1.};
   prob.add_row({1.}, Relation::less_equal, 1.);
   EXPECT_THROW((void)lp::solve(prob), InvalidArgument);
   prob.rows[0].coefficients = {1., std::nan("")};
   EXPECT_THROW((void)lp::solve(prob), InvalidArgument);
   prob.rows[0].coefficients = {1., 1.};
   prob.lower = {0.};
   EXPECT_THROW((void)lp::solve(prob), InvalidArgument);
}

TEST(LpTest, nonzero_cap)
{
   lp::Problem prob;
   prob.objective.assign(50, 1.);
   for(int i = 0; i < 50; ++i) {
      prob.add_row(std::vector< double >(50, 1.), Relation::less_equal, 1.);
   }
   lp::Options options;
   options.nonzero_cap = 2'000;
   EXPECT_THROW((void)lp::solve(prob, options), ResourceLimit);
   options.nonzero_cap = 2'500;
   EXPECT_EQ(lp::solve(prob, options).status, Status::optimal);
}

/// max c^T x, Ax <= b, x >= 0 against min b^T y, A^T y >= c, y >= 0.
TEST(LpTest, random_primal_dual_pairs)
{
   gen::Rng rng(21);
   for(int trial = 0; trial < 40; ++trial) {
      const int m = 2 + rng.below(6);
      const int n = 2 + rng.below(6);
      std::vector< std::vector< double > > a(static_cast< std::size_t >(m));
      std::vector< double > b, c;
      for(auto& row : a) {
         for(int k = 0; k < n; ++k) {
            row.push_back(rng.uniform(0.1, 2.));
         }
         b.push_back(rng.uniform(0.5, 3.));
      }
      for(int k = 0; k < n; ++k) {
         c.push_back(rng.uniform(-1., 2.));
      }
      lp::Problem primal;
      primal.objective = c;
      for(int i = 0; i < m; ++i) {
         primal.add_row(a[static_cast< std::size_t >(i)], Relation::less_equal, b[static_cast< std::size_t >(i)]);
      }
      lp::Problem dual;
      dual.sense = Sense::minimize;
      dual.objective = b;
      for(int k = 0; k < n; ++k) {
         std::vector< double > col;
         for(int i = 0; i < m; ++i) {
            col.push_back(a[static_cast< std::size_t >(i)][static_cast< std::size_t >(k)]);
         }
         dual.add_row(col, Relation::greater_equal, c[static_cast< std::size_t >(k)]);
      }
      const auto ps = lp::solve(primal);
      const auto ds = lp::solve(dual);
      expect_certified(primal, ps);
      expect_certified(dual, ds);
      EXPECT_NEAR(ps.objective, ds.objective, 1e-8 * (1. + std::abs(ps.objective)));
      for(int i = 0; i < m; ++i) {
         EXPECT_NEAR(ps.duals[static_cast< std::size_t >(i)], ds.primal[static_cast< std::size_t >(i)], 1e-7);
      }
   }
}

TEST(LpTest, random_mixed_relations)
{
   gen::Rng rng(22);
   int solved = 0;
   for(int trial = 0; trial < 60; ++trial) {
      const int m = 2 + rng.below(5);
      const int n = 3 + rng.below(5);
      lp::Problem prob;
      prob.sense = rng.below(2) == 0 ? Sense::maximize : Sense::minimize;
      for(int k = 0; k < n; ++k) {
         prob.objective.push_back(rng.uniform(-1., 1.));
      }
      for(int i = 0; i < m; ++i) {
         std::vector< double > row;
         for(int k = 0; k < n; ++k) {
            row.push_back(rng.uniform(-1., 1.));
         }
         const auto rel = static_cast< Relation >(rng.below(3));
         prob.add_row(std::move(row), rel, rng.uniform(-1., 1.));
      }
      prob.add_row(std::vector< double >(static_cast< std::size_t >(n), 1.), Relation::less_equal, 5.);
      const auto sol = lp::solve(prob);
      if(sol.status == Status::optimal) {
         ++solved;
         expect_certified(prob, sol);
      } else {
         EXPECT_EQ(sol.status, Status::infeasible);
      }
   }
   EXPECT_GT(solved, 10);
}

/// Equilibrium programs are massively degenerate: every incentive row has a zero right-hand side.
TEST(LpTest, degenerate_equilibrium_programs)
{
   for(std::uint64_t seed = 0; seed < 60; ++seed) {
      const auto g = gen::normal_form({3, 3, 3}, seed);
      const auto table = testing::utility_table(g);
      std::vector< PureProfile > profiles;
      for(const auto& s : enumerate_profiles(g)) {
         profiles.push_back(s);
      }
      lp::Problem prob;
      prob.sense = seed % 2 == 0 ? Sense::maximize : Sense::minimize;
      for(const auto& u : table) {
         prob.objective.push_back(u[0] + u[1] + u[2]);
      }
      for(std::size_t p = 0; p < 3; ++p) {
         for(int i = 0; i < 3; ++i) {
            for(int j = 0; j < 3; ++j) {
               if(i == j) {
                  continue;
               }
               std::vector< double > row;
               for(const auto& s : profiles) {
                  auto t = s;
                  t[p] = j;
                  row.push_back(s[p] == i ? utility(g, p, s) - utility(g, p, t) : 0.);
               }
               prob.add_row(std::move(row), Relation::greater_equal, 0.);
            }
         }
      }
      prob.add_row(std::vector< double >(profiles.size(), 1.), Relation::equal, 1.);
      expect_certified(prob, lp::solve(prob));
   }
}

TEST(LpTest, deterministic)
{
   const auto g = gen::normal_form({3, 3}, 5);
   lp::Problem prob;
   for(const auto& s : enumerate_profiles(g)) {
      prob.objective.push_back(social_welfare(g, s));
   }
   prob.add_row(std::vector< double >(9, 1.), Relation::equal, 1.);
   const auto a = lp::solve(prob);
   const auto b = lp::solve(prob);
   EXPECT_EQ(a.primal, b.primal);
   EXPECT_EQ(a.duals, b.duals);
   EXPECT_EQ(a.pivots, b.pivots);
}

}  // namespace
}  // namespace optce
