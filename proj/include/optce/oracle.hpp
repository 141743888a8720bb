#ifndef OPTCE_ORACLE_HPP
#define OPTCE_ORACLE_HPP

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "optce/errors.hpp"
#include "optce/game.hpp"

namespace optce {

enum class Direction { max, min };

/// Per-player weights theta of a linear objective sum_p theta_p u^p. All-ones gives social
/// welfare; a point on the simplex gives the max-min pricing weights.
using PlayerWeights = std::vector< double >;

inline PlayerWeights uniform_weights(std::size_t players, double value = 1.)
{
   return PlayerWeights(players, value);
}

/// Prices y^p_{i,j} >= 0 on the incentive rows (p, i, j), i != j. Stored densely with the
/// (p, i, i) diagonal pinned at zero.
class DeviationPlan {
  public:
   DeviationPlan() = default;
   explicit DeviationPlan(std::vector< int > action_counts)
       : m_action_counts(std::move(action_counts))
   {
      std::size_t off = 0;
      for(int m : m_action_counts) {
         m_offsets.push_back(off);
         off += static_cast< std::size_t >(m) * static_cast< std::size_t >(m);
      }
      m_values.assign(off, 0.);
   }
   explicit DeviationPlan(const GameInstance& game) : DeviationPlan(game.action_counts()) {}

   [[nodiscard]] const std::vector< int >& action_counts() const { return m_action_counts; }
   [[nodiscard]] std::size_t players() const { return m_action_counts.size(); }

   [[nodiscard]] double at(std::size_t p, int i, int j) const { return m_values[index(p, i, j)]; }

   void set(std::size_t p, int i, int j, double value)
   {
      check(p, i, j);
      if(i == j) {
         throw InvalidArgument("deviation plan has no entry for i == j");
      }
      if(! (value >= 0.) || ! std::isfinite(value)) {
         throw InvalidArgument("deviation prices must be finite and nonnegative");
      }
      m_values[index(p, i, j)] = value;
   }

   /// Sum_j y^p_{i,j}.
   [[nodiscard]] double row_total(std::size_t p, int i) const
   {
      double total = 0.;
      for(int j = 0; j < m_action_counts[p]; ++j) {
         total += at(p, i, j);
      }
      return total;
   }

   [[nodiscard]] bool is_zero() const
   {
      return std::all_of(m_values.begin(), m_values.end(), [](double v) { return v == 0.; });
   }

   void check_compatible(const GameInstance& game) const
   {
      if(m_action_counts != game.action_counts()) {
         throw InvalidArgument("deviation plan does not match the game's action counts");
      }
   }

  private:
   [[nodiscard]] std::size_t index(std::size_t p, int i, int j) const
   {
      return m_offsets[p]
             + static_cast< std::size_t >(i) * static_cast< std::size_t >(m_action_counts[p])
             + static_cast< std::size_t >(j);
   }
   void check(std::size_t p, int i, int j) const
   {
      if(p >= players() || i < 0 || j < 0 || i >= m_action_counts[p] || j >= m_action_counts[p]) {
         throw InvalidArgument("deviation plan index out of range");
      }
   }

   std::vector< int > m_action_counts;
   std::vector< std::size_t > m_offsets;
   std::vector< double > m_values;
};

/// Prices y^p_j >= 0 on the unconditional-deviation rows (p, j).
class CoarseDeviationPlan {
  public:
   CoarseDeviationPlan() = default;
   explicit CoarseDeviationPlan(std::vector< int > action_counts)
       : m_action_counts(std::move(action_counts))
   {
      std::size_t off = 0;
      for(int m : m_action_counts) {
         m_offsets.push_back(off);
         off += static_cast< std::size_t >(m);
      }
      m_values.assign(off, 0.);
   }
   explicit CoarseDeviationPlan(const GameInstance& game)
       : CoarseDeviationPlan(game.action_counts())
   {
   }

   [[nodiscard]] const std::vector< int >& action_counts() const { return m_action_counts; }
   [[nodiscard]] std::size_t players() const { return m_action_counts.size(); }

   [[nodiscard]] double at(std::size_t p, int j) const
   {
      return m_values[m_offsets[p] + static_cast< std::size_t >(j)];
   }

   void set(std::size_t p, int j, double value)
   {
      if(p >= players() || j < 0 || j >= m_action_counts[p]) {
         throw InvalidArgument("coarse deviation plan index out of range");
      }
      if(! (value >= 0.) || ! std::isfinite(value)) {
         throw InvalidArgument("deviation prices must be finite and nonnegative");
      }
      m_values[m_offsets[p] + static_cast< std::size_t >(j)] = value;
   }

   /// True iff every player carries the same price vector.
   [[nodiscard]] bool symmetric() const
   {
      for(std::size_t p = 1; p < players(); ++p) {
         if(m_action_counts[p] != m_action_counts[0]) {
            return false;
         }
         for(int j = 0; j < m_action_counts[p]; ++j) {
            if(at(p, j) != at(0, j)) {
               return false;
            }
         }
      }
      return true;
   }

   void check_compatible(const GameInstance& game) const
   {
      if(m_action_counts != game.action_counts()) {
         throw InvalidArgument("coarse deviation plan does not match the game's action counts");
      }
   }

  private:
   std::vector< int > m_action_counts;
   std::vector< std::size_t > m_offsets;
   std::vector< double > m_values;
};

struct OracleAnswer {
   bool found = false;
   PureProfile witness;
   /// Exact maximum of the priced objective over all profiles.
   double value = -std::numeric_limits< double >::infinity();
};

inline constexpr double kDefaultPricingSlack = 1e-7;

// ---------------------------------------------------------------------------------------------
// Deviation-adjusted welfare
// ---------------------------------------------------------------------------------------------

/// sum_p [ theta_p u^p_s + sum_j y^p_{s_p,j} (u^p_s - u^p_{j s_-p}) ].
inline double weighted_dasw_value(
   const GameInstance& game,
   const DeviationPlan& y,
   std::span< const double > weights,
   std::span< const int > s)
{
   y.check_compatible(game);
   if(weights.size() != game.players()) {
      throw InvalidArgument("weight vector length does not match the player count");
   }
   game.validate(s);
   PureProfile dev(s.begin(), s.end());
   double total = 0.;
   for(std::size_t p = 0; p < game.players(); ++p) {
      const double base = game.raw_utility(p, s);
      double adjusted = weights[p] * base;
      for(int j = 0; j < game.actions(p); ++j) {
         const double price = y.at(p, s[p], j);
         if(j == s[p] || price == 0.) {
            continue;
         }
         dev[p] = j;
         adjusted += price * (base - game.raw_utility(p, dev));
      }
      dev[p] = s[p];
      total += adjusted;
   }
   return total;
}

inline double dasw_value(const GameInstance& game, const DeviationPlan& y, std::span< const int > s)
{
   const auto ones = uniform_weights(game.players());
   return weighted_dasw_value(game, y, ones, s);
}

inline double weighted_coarse_dasw_value(
   const GameInstance& game,
   const CoarseDeviationPlan& y,
   std::span< const double > weights,
   std::span< const int > s)
{
   y.check_compatible(game);
   if(weights.size() != game.players()) {
      throw InvalidArgument("weight vector length does not match the player count");
   }
   game.validate(s);
   PureProfile dev(s.begin(), s.end());
   double total = 0.;
   for(std::size_t p = 0; p < game.players(); ++p) {
      const double base = game.raw_utility(p, s);
      double adjusted = weights[p] * base;
      for(int j = 0; j < game.actions(p); ++j) {
         const double price = y.at(p, j);
         if(j == s[p] || price == 0.) {
            continue;
         }
         dev[p] = j;
         adjusted += price * (base - game.raw_utility(p, dev));
      }
      dev[p] = s[p];
      total += adjusted;
   }
   return total;
}

inline double coarse_dasw_value(
   const GameInstance& game,
   const CoarseDeviationPlan& y,
   std::span< const int > s)
{
   const auto ones = uniform_weights(game.players());
   return weighted_coarse_dasw_value(game, y, ones, s);
}

/// y'^p_{i,j} = y^p_j for every i != j.
inline DeviationPlan coarse_to_ce_plan(const CoarseDeviationPlan& y)
{
   DeviationPlan out(y.action_counts());
   for(std::size_t p = 0; p < y.players(); ++p) {
      const int m = y.action_counts()[p];
      for(int i = 0; i < m; ++i) {
         for(int j = 0; j < m; ++j) {
            if(i != j && y.at(p, j) != 0.) {
               out.set(p, i, j, y.at(p, j));
            }
         }
      }
   }
   return out;
}

// ---------------------------------------------------------------------------------------------
// Generic brute-force pricing
// ---------------------------------------------------------------------------------------------

namespace detail {

template < typename Value >
OracleAnswer argmax_profiles(
   const GameInstance& game,
   double threshold,
   double slack,
   std::uint64_t cap,
   Value&& value)
{
   OracleAnswer answer;
   for(const auto& s : enumerate_profiles(game, cap)) {
      const double v = value(s);
      if(v > answer.value) {
         answer.value = v;
         answer.witness = s;
      }
   }
   answer.found = answer.value > threshold + slack;
   return answer;
}

}  // namespace detail

/// Maximizes the weighted deviation-adjusted welfare over all profiles. Ties go to the
/// lexicographically first profile.
inline OracleAnswer oracle_bruteforce(
   const GameInstance& game,
   std::span< const double > weights,
   const DeviationPlan& y,
   double threshold,
   double slack = kDefaultPricingSlack,
   std::uint64_t cap = kDefaultProfileCap)
{
   y.check_compatible(game);
   return detail::argmax_profiles(game, threshold, slack, cap, [&](const PureProfile& s) {
      return weighted_dasw_value(game, y, weights, s);
   });
}

/// Coarse variant.
inline OracleAnswer oracle_bruteforce(
   const GameInstance& game,
   std::span< const double > weights,
   const CoarseDeviationPlan& y,
   double threshold,
   double slack = kDefaultPricingSlack,
   std::uint64_t cap = kDefaultProfileCap)
{
   y.check_compatible(game);
   return detail::argmax_profiles(game, threshold, slack, cap, [&](const PureProfile& s) {
      return weighted_coarse_dasw_value(game, y, weights, s);
   });
}

// ---------------------------------------------------------------------------------------------
// Tree polymatrix
// ---------------------------------------------------------------------------------------------

/// Polymatrix game whose social welfare equals the weighted deviation-adjusted welfare of the
/// input at every profile:
///   adj_pq[l, k] = (theta_p + Y_l) pq[l, k] - sum_j y^p_{l,j} pq[j, k],  Y_l = sum_j y^p_{l,j}.
inline PolymatrixGame polymatrix_adjust(
   const PolymatrixGame& game,
   std::span< const double > weights,
   const DeviationPlan& y)
{
   if(y.action_counts() != game.action_counts()) {
      throw InvalidArgument("deviation plan does not match the game's action counts");
   }
   if(weights.size() != game.players()) {
      throw InvalidArgument("weight vector length does not match the player count");
   }
   // mixing[p](l, j): row l of the adjusted matrix is mixing[p].row(l) * original
   std::vector< Eigen::MatrixXd > mixing;
   mixing.reserve(game.players());
   for(std::size_t p = 0; p < game.players(); ++p) {
      const int m = game.action_counts()[p];
      Eigen::MatrixXd mix = Eigen::MatrixXd::Zero(m, m);
      for(int l = 0; l < m; ++l) {
         mix(l, l) = weights[p] + y.row_total(p, l);
         for(int j = 0; j < m; ++j) {
            if(j != l) {
               mix(l, j) -= y.at(p, l, j);
            }
         }
      }
      mixing.push_back(std::move(mix));
   }
   std::vector< PolymatrixEdge > edges;
   edges.reserve(game.edges().size());
   for(const auto& e : game.edges()) {
      edges.push_back(
         {e.p,
          e.q,
          mixing[static_cast< std::size_t >(e.p)] * e.pq,
          mixing[static_cast< std::size_t >(e.q)] * e.qp});
   }
   return {game.action_counts(), std::move(edges)};
}

namespace detail {

/// Max-welfare DP over a forest, with payoffs scaled by `sign` (+1 max, -1 min of the original).
inline std::pair< PureProfile, double > forest_dp(const PolymatrixGame& game, double sign)
{
   if(! game.is_forest()) {
      throw UnsupportedStructure("polymatrix edge graph contains a cycle");
   }
   const std::size_t n = game.players();
   const auto& m = game.action_counts();

   // BFS order per component, rooted at the component's smallest player
   std::vector< int > parent(n, -1);
   std::vector< std::size_t > parent_edge(n, 0);
   std::vector< bool > visited(n, false);
   std::vector< std::size_t > order;
   std::vector< std::size_t > roots;
   order.reserve(n);
   for(std::size_t r = 0; r < n; ++r) {
      if(visited[r]) {
         continue;
      }
      roots.push_back(r);
      visited[r] = true;
      std::size_t head = order.size();
      order.push_back(r);
      while(head < order.size()) {
         const auto p = order[head++];
         for(auto k : game.incident_edges(p)) {
            const auto& e = game.edges()[k];
            const auto q = static_cast< std::size_t >(static_cast< int >(p) == e.p ? e.q : e.p);
            if(! visited[q]) {
               visited[q] = true;
               parent[q] = static_cast< int >(p);
               parent_edge[q] = k;
               order.push_back(q);
            }
         }
      }
   }

   // welfare[p][a]: best welfare contribution of p's subtree when p plays a
   std::vector< std::vector< double > > welfare(n);
   // choice[q][a]: q's best reply when its parent plays a
   std::vector< std::vector< int > > choice(n);
   for(std::size_t p = 0; p < n; ++p) {
      welfare[p].assign(static_cast< std::size_t >(m[p]), 0.);
   }
   for(auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto q = *it;
      if(parent[q] < 0) {
         continue;
      }
      const auto p = static_cast< std::size_t >(parent[q]);
      const auto k = parent_edge[q];
      choice[q].assign(static_cast< std::size_t >(m[p]), 0);
      for(int a = 0; a < m[p]; ++a) {
         double best = -std::numeric_limits< double >::infinity();
         int arg = 0;
         for(int b = 0; b < m[q]; ++b) {
            const double v = welfare[q][static_cast< std::size_t >(b)]
                             + sign * (game.edge_payoff(k, p, a, b) + game.edge_payoff(k, q, b, a));
            if(v > best) {
               best = v;
               arg = b;
            }
         }
         welfare[p][static_cast< std::size_t >(a)] += best;
         choice[q][static_cast< std::size_t >(a)] = arg;
      }
   }

   PureProfile s(n, 0);
   double total = 0.;
   for(auto r : roots) {
      double best = -std::numeric_limits< double >::infinity();
      int arg = 0;
      for(int a = 0; a < m[r]; ++a) {
         if(welfare[r][static_cast< std::size_t >(a)] > best) {
            best = welfare[r][static_cast< std::size_t >(a)];
            arg = a;
         }
      }
      s[r] = arg;
      total += best;
   }
   for(auto q : order) {
      if(parent[q] >= 0) {
         s[q] = choice[q][static_cast< std::size_t >(s[static_cast< std::size_t >(parent[q])])];
      }
   }
   return {std::move(s), sign * total};
}

}  // namespace detail

/// Optimal social welfare outcome of a forest polymatrix game by leaf-to-root message passing.
/// Ties go to the smallest action.
inline std::pair< PureProfile, double > tree_polymatrix_opt(
   const PolymatrixGame& game,
   Direction direction = Direction::max)
{
   return detail::forest_dp(game, direction == Direction::max ? 1. : -1.);
}

inline OracleAnswer oracle_tree_polymatrix(
   const PolymatrixGame& game,
   std::span< const double > weights,
   const DeviationPlan& y,
   double threshold,
   double slack = kDefaultPricingSlack)
{
   if(! game.is_forest()) {
      throw UnsupportedStructure("polymatrix edge graph contains a cycle");
   }
   auto [profile, value] = tree_polymatrix_opt(polymatrix_adjust(game, weights, y));
   return {value > threshold + slack, std::move(profile), value};
}

inline OracleAnswer oracle_tree_polymatrix(
   const PolymatrixGame& game,
   std::span< const double > weights,
   const CoarseDeviationPlan& y,
   double threshold,
   double slack = kDefaultPricingSlack)
{
   return oracle_tree_polymatrix(game, weights, coarse_to_ce_plan(y), threshold, slack);
}

// ---------------------------------------------------------------------------------------------
// Singleton congestion, player-symmetric coarse prices
// ---------------------------------------------------------------------------------------------

/// g_j(c) = sum_{a != j} c(a) f^a(c(a)) - (n - c(j)) f^j(c(j) + 1): n times the player-averaged
/// gain of the profiles in class c against the unconditional deviation to j.
inline double scg_deviation_gap(
   const SingletonCongestionGame& game,
   std::span< const int > counts,
   int j)
{
   const int n = static_cast< int >(game.players());
   double gap = 0.;
   for(std::size_t a = 0; a < counts.size(); ++a) {
      if(static_cast< int >(a) != j && counts[a] > 0) {
         gap += counts[a] * game.payoff(static_cast< int >(a), counts[a]);
      }
   }
   const int cj = counts[static_cast< std::size_t >(j)];
   if(cj < n) {
      gap -= (n - cj) * game.payoff(j, cj + 1);
   }
   return gap;
}

namespace detail {

/// Maximizes sum_a h_a(c(a)) over count vectors summing to n, where
///   h_a(c) = sign [ c f^a(c) (scale + sum_{j != a} y_j) - (n - c) f^a(c + 1) y_a ].
/// Returns the lexicographically smallest maximizer.
inline std::pair< CountVector, double > scg_dp(
   const SingletonCongestionGame& game,
   double scale,
   std::span< const double > y,
   double sign)
{
   const int n = static_cast< int >(game.players());
   const std::size_t k = game.actions();
   if(y.size() != k) {
      throw InvalidArgument("symmetric price vector needs one entry per action");
   }
   double y_total = 0.;
   for(double v : y) {
      if(! (v >= 0.) || ! std::isfinite(v)) {
         throw InvalidArgument("deviation prices must be finite and nonnegative");
      }
      y_total += v;
   }
   auto contribution = [&](std::size_t a, int c) {
      const int action = static_cast< int >(a);
      double h = 0.;
      if(c > 0) {
         h += c * game.payoff(action, c) * (scale + y_total - y[a]);
      }
      if(c < n) {
         h -= (n - c) * game.payoff(action, c + 1) * y[a];
      }
      return sign * h;
   };

   const double neg_inf = -std::numeric_limits< double >::infinity();
   // best[a][r]: max over actions a..k-1 holding exactly r players
   std::vector< std::vector< double > > best(k + 1, std::vector< double >(static_cast< std::size_t >(n) + 1, neg_inf));
   best[k][0] = 0.;
   for(std::size_t a = k; a-- > 0;) {
      for(int r = 0; r <= n; ++r) {
         double v = neg_inf;
         for(int c = 0; c <= r; ++c) {
            const double tail = best[a + 1][static_cast< std::size_t >(r - c)];
            if(tail == neg_inf) {
               continue;
            }
            v = std::max(v, contribution(a, c) + tail);
         }
         best[a][static_cast< std::size_t >(r)] = v;
      }
   }

   CountVector counts(k, 0);
   int remaining = n;
   for(std::size_t a = 0; a < k; ++a) {
      const double target = best[a][static_cast< std::size_t >(remaining)];
      for(int c = 0; c <= remaining; ++c) {
         const double tail = best[a + 1][static_cast< std::size_t >(remaining - c)];
         if(tail != neg_inf && contribution(a, c) + tail == target) {
            counts[a] = c;
            remaining -= c;
            break;
         }
      }
   }
   return {std::move(counts), sign * best[0][static_cast< std::size_t >(n)]};
}

}  // namespace detail

/// Optimizes the coarse deviation-adjusted welfare under player-symmetric prices y (one per
/// action) over count vectors in O(k n^2).
inline std::pair< CountVector, double > scg_coarse_opt(
   const SingletonCongestionGame& game,
   std::span< const double > y,
   Direction direction = Direction::max)
{
   return detail::scg_dp(game, 1., y, direction == Direction::max ? 1. : -1.);
}

/// Maximizes scale * sw(c) + sum_j y_j g_j(c); the pricing problem of the symmetric master.
inline std::pair< CountVector, double > scg_coarse_opt_scaled(
   const SingletonCongestionGame& game,
   double welfare_scale,
   std::span< const double > y)
{
   return detail::scg_dp(game, welfare_scale, y, 1.);
}

}  // namespace optce

#endif  // OPTCE_ORACLE_HPP
