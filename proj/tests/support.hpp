// Fixtures and independent reference computations shared by the test binaries. Nothing here
// calls into the solver paths it is used to check.
#ifndef OPTCE_TESTS_SUPPORT_HPP
#define OPTCE_TESTS_SUPPORT_HPP

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "optce/optce.hpp"

namespace optce::testing {

inline GameInstance two_player(const std::vector< std::vector< double > >& rows)
{
   std::vector< double > flat;
   for(const auto& r : rows) {
      flat.insert(flat.end(), r.begin(), r.end());
   }
   return GameInstance(NormalFormGame({2, 2}, std::move(flat)));
}

/// Action 0 = C, 1 = D.
inline GameInstance prisoners_dilemma() { return two_player({{3, 3}, {0, 5}, {5, 0}, {1, 1}}); }
inline GameInstance chicken() { return two_player({{6, 6}, {2, 7}, {7, 2}, {0, 0}}); }

inline GameInstance small_congestion()
{
   return GameInstance(SingletonCongestionGame(2, {{3, 1}, {2, 2}}));
}

inline GameInstance single_edge_polymatrix()
{
   Eigen::MatrixXd a01(2, 2), a10(2, 2);
   a01 << 1, 0, 0, 2;
   a10 << 0, 0, 0, 1;
   return GameInstance(PolymatrixGame({2, 2}, {{0, 1, a01, a10}}));
}

inline GameInstance constant_game(std::vector< int > actions, double c)
{
   const auto profiles = detail::profile_count(actions);
   std::vector< double > u(profiles * actions.size(), c);
   return GameInstance(NormalFormGame(std::move(actions), std::move(u)));
}

/// Normal-form expansion of any representation.
inline GameInstance expand(const GameInstance& game)
{
   std::vector< double > u;
   for(const auto& s : enumerate_profiles(game)) {
      for(std::size_t p = 0; p < game.players(); ++p) {
         u.push_back(game.raw_utility(p, s));
      }
   }
   return GameInstance(NormalFormGame(game.action_counts(), std::move(u)));
}

/// Every count vector of `players` players over `actions` actions, lexicographic.
inline std::vector< CountVector > all_count_vectors(int players, int actions)
{
   std::vector< CountVector > out;
   CountVector c(static_cast< std::size_t >(actions), 0);
   std::function< void(int, int) > rec = [&](int a, int left) {
      if(a == actions - 1) {
         c[static_cast< std::size_t >(a)] = left;
         out.push_back(c);
         return;
      }
      for(int k = 0; k <= left; ++k) {
         c[static_cast< std::size_t >(a)] = k;
         rec(a + 1, left - k);
      }
   };
   rec(0, players);
   return out;
}

/// value(c) = sum_a [ c f^a(c) (1 + sum_{j != a} y_j) - (n - c) f^a(c + 1) y_a ], written out
/// term by term from the closed form.
inline double closed_form_value(
   const std::vector< std::vector< double > >& f,
   int n,
   const CountVector& c,
   const std::vector< double >& y)
{
   double total = 0.;
   for(std::size_t a = 0; a < f.size(); ++a) {
      double others = 0.;
      for(std::size_t j = 0; j < y.size(); ++j) {
         if(j != a) {
            others += y[j];
         }
      }
      const int ca = c[a];
      if(ca > 0) {
         total += ca * f[a][static_cast< std::size_t >(ca - 1)] * (1. + others);
      }
      if(ca < n) {
         total -= (n - ca) * f[a][static_cast< std::size_t >(ca)] * y[a];
      }
   }
   return total;
}

/// Dense utility table u[profile][p] for direct reference computations.
inline std::vector< std::vector< double > > utility_table(const GameInstance& game)
{
   std::vector< std::vector< double > > table;
   for(const auto& s : enumerate_profiles(game)) {
      std::vector< double > row;
      for(std::size_t p = 0; p < game.players(); ++p) {
         row.push_back(game.raw_utility(p, s));
      }
      table.push_back(std::move(row));
   }
   return table;
}

inline DeviationPlan random_plan(const GameInstance& game, gen::Rng& rng, double scale = 1.)
{
   DeviationPlan y(game);
   for(std::size_t p = 0; p < game.players(); ++p) {
      for(int i = 0; i < game.actions(p); ++i) {
         for(int j = 0; j < game.actions(p); ++j) {
            if(i != j) {
               y.set(p, i, j, scale * rng.uniform());
            }
         }
      }
   }
   return y;
}

inline CoarseDeviationPlan random_coarse_plan(const GameInstance& game, gen::Rng& rng)
{
   CoarseDeviationPlan y(game);
   for(std::size_t p = 0; p < game.players(); ++p) {
      for(int j = 0; j < game.actions(p); ++j) {
         y.set(p, j, rng.uniform());
      }
   }
   return y;
}

inline PureProfile random_profile(const GameInstance& game, gen::Rng& rng)
{
   PureProfile s(game.players());
   for(std::size_t p = 0; p < s.size(); ++p) {
      s[p] = rng.below(game.actions(p));
   }
   return s;
}

}  // namespace optce::testing

#endif  // OPTCE_TESTS_SUPPORT_HPP
