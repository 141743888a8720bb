#ifndef OPTCE_GENERATE_HPP
#define OPTCE_GENERATE_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "optce/game.hpp"

namespace optce::gen {

/// Seeded generator whose draws do not depend on the standard library's distributions, so a
/// seed reproduces the same instance everywhere.
class Rng {
  public:
   explicit Rng(std::uint64_t seed) : m_engine(seed) {}

   /// Uniform in [0, 1).
   double uniform() { return static_cast< double >(m_engine() >> 11) * 0x1.0p-53; }
   double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
   /// Uniform integer in [0, bound).
   int below(int bound)
   {
      return static_cast< int >(m_engine() % static_cast< std::uint64_t >(bound));
   }

  private:
   std::mt19937_64 m_engine;
};

inline GameInstance normal_form(const std::vector< int >& action_counts, std::uint64_t seed)
{
   Rng rng(seed);
   const auto profiles = detail::profile_count(action_counts);
   std::vector< double > utilities(profiles * action_counts.size());
   for(auto& u : utilities) {
      u = rng.uniform();
   }
   return GameInstance(NormalFormGame(action_counts, std::move(utilities)));
}

/// Random tree by parent attachment: player p > 0 attaches to a uniform earlier player.
inline GameInstance tree_polymatrix(const std::vector< int >& action_counts, std::uint64_t seed)
{
   Rng rng(seed);
   std::vector< PolymatrixEdge > edges;
   for(int q = 1; q < static_cast< int >(action_counts.size()); ++q) {
      const int p = rng.below(q);
      const int mp = action_counts[static_cast< std::size_t >(p)];
      const int mq = action_counts[static_cast< std::size_t >(q)];
      Eigen::MatrixXd pq(mp, mq);
      Eigen::MatrixXd qp(mq, mp);
      for(int a = 0; a < mp; ++a) {
         for(int b = 0; b < mq; ++b) {
            pq(a, b) = rng.uniform();
         }
      }
      for(int b = 0; b < mq; ++b) {
         for(int a = 0; a < mp; ++a) {
            qp(b, a) = rng.uniform();
         }
      }
      edges.push_back({p, q, std::move(pq), std::move(qp)});
   }
   return GameInstance(PolymatrixGame(action_counts, std::move(edges)));
}

inline GameInstance singleton_congestion(std::size_t players, std::size_t actions, std::uint64_t seed)
{
   Rng rng(seed);
   std::vector< std::vector< double > > f(actions, std::vector< double >(players));
   for(auto& row : f) {
      for(auto& v : row) {
         v = rng.uniform();
      }
   }
   return GameInstance(SingletonCongestionGame(players, std::move(f)));
}

}  // namespace optce::gen

#endif  // OPTCE_GENERATE_HPP
