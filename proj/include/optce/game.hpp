#ifndef OPTCE_GAME_HPP
#define OPTCE_GAME_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "optce/errors.hpp"

namespace optce {

/// One action index per player, 0-based.
using PureProfile = std::vector< int >;
/// Number of players on each action of a symmetric game; sums to the player count.
using CountVector = std::vector< int >;

inline constexpr std::uint64_t kDefaultProfileCap = 1'000'000;

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b)
{
   if(a != 0 && b > std::numeric_limits< std::uint64_t >::max() / a) {
      return std::numeric_limits< std::uint64_t >::max();
   }
   return a * b;
}

inline std::uint64_t profile_count(std::span< const int > action_counts)
{
   std::uint64_t total = 1;
   for(int m : action_counts) {
      total = saturating_mul(total, static_cast< std::uint64_t >(m));
   }
   return total;
}

inline void check_action_counts(std::span< const int > action_counts)
{
   if(action_counts.empty()) {
      throw InvalidArgument("a game needs at least one player");
   }
   for(int m : action_counts) {
      if(m < 1) {
         throw InvalidArgument("every player needs at least one action");
      }
   }
}

inline void check_finite(double value, const char* what)
{
   if(! std::isfinite(value)) {
      throw InvalidArgument(std::string("non-finite value in ") + what);
   }
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------------------------

/// Explicit utility tensor. Profiles are indexed mixed-radix with player 0 most significant.
class NormalFormGame {
  public:
   /// `utilities[idx * n + p]` is player p's payoff at the profile with mixed-radix index idx.
   NormalFormGame(std::vector< int > action_counts, std::vector< double > utilities)
       : m_action_counts(std::move(action_counts)), m_utilities(std::move(utilities))
   {
      detail::check_action_counts(m_action_counts);
      const auto profiles = detail::profile_count(m_action_counts);
      if(profiles > std::numeric_limits< std::size_t >::max() / m_action_counts.size()
         || m_utilities.size() != profiles * m_action_counts.size()) {
         throw InvalidArgument("normal-form utility tensor has the wrong length");
      }
      for(double u : m_utilities) {
         detail::check_finite(u, "normal-form utilities");
      }
   }

   [[nodiscard]] std::size_t players() const { return m_action_counts.size(); }
   [[nodiscard]] const std::vector< int >& action_counts() const { return m_action_counts; }
   [[nodiscard]] const std::vector< double >& utilities() const { return m_utilities; }

   [[nodiscard]] std::size_t profile_index(std::span< const int > s) const
   {
      std::size_t idx = 0;
      for(std::size_t p = 0; p < m_action_counts.size(); ++p) {
         idx = idx * static_cast< std::size_t >(m_action_counts[p]) + static_cast< std::size_t >(s[p]);
      }
      return idx;
   }

   [[nodiscard]] double utility(std::size_t p, std::span< const int > s) const
   {
      return m_utilities[profile_index(s) * players() + p];
   }

  private:
   std::vector< int > m_action_counts;
   std::vector< double > m_utilities;
};

/// A bilateral interaction between players p < q. `pq(a, b)` is p's payoff when p plays a and q
/// plays b; `qp(b, a)` is q's payoff.
struct PolymatrixEdge {
   int p;
   int q;
   Eigen::MatrixXd pq;
   Eigen::MatrixXd qp;
};

class PolymatrixGame {
  public:
   PolymatrixGame(std::vector< int > action_counts, std::vector< PolymatrixEdge > edges)
       : m_action_counts(std::move(action_counts)), m_edges(std::move(edges))
   {
      detail::check_action_counts(m_action_counts);
      const int n = static_cast< int >(m_action_counts.size());
      m_incident.assign(m_action_counts.size(), {});
      std::vector< std::pair< int, int > > seen;
      for(auto& e : m_edges) {
         if(e.p < 0 || e.q < 0 || e.p >= n || e.q >= n) {
            throw InvalidArgument("polymatrix edge references an unknown player");
         }
         if(e.p == e.q) {
            throw InvalidArgument("polymatrix self-edges are not allowed");
         }
         if(e.p > e.q) {
            std::swap(e.p, e.q);
            std::swap(e.pq, e.qp);
         }
         seen.emplace_back(e.p, e.q);
         const auto mp = m_action_counts[static_cast< std::size_t >(e.p)];
         const auto mq = m_action_counts[static_cast< std::size_t >(e.q)];
         if(e.pq.rows() != mp || e.pq.cols() != mq || e.qp.rows() != mq || e.qp.cols() != mp) {
            throw InvalidArgument("polymatrix edge matrix dimensions do not match action counts");
         }
         if(! e.pq.allFinite() || ! e.qp.allFinite()) {
            throw InvalidArgument("non-finite value in polymatrix edge matrix");
         }
      }
      std::sort(seen.begin(), seen.end());
      if(std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
         throw InvalidArgument("at most one polymatrix edge per player pair");
      }
      for(std::size_t k = 0; k < m_edges.size(); ++k) {
         m_incident[static_cast< std::size_t >(m_edges[k].p)].push_back(k);
         m_incident[static_cast< std::size_t >(m_edges[k].q)].push_back(k);
      }
   }

   [[nodiscard]] std::size_t players() const { return m_action_counts.size(); }
   [[nodiscard]] const std::vector< int >& action_counts() const { return m_action_counts; }
   [[nodiscard]] const std::vector< PolymatrixEdge >& edges() const { return m_edges; }
   [[nodiscard]] const std::vector< std::size_t >& incident_edges(std::size_t p) const
   {
      return m_incident[p];
   }

   /// Payoff player p receives along edge k when p plays a and the neighbour plays b.
   [[nodiscard]] double edge_payoff(std::size_t k, std::size_t p, int a, int b) const
   {
      const auto& e = m_edges[k];
      return static_cast< int >(p) == e.p ? e.pq(a, b) : e.qp(a, b);
   }

   [[nodiscard]] double utility(std::size_t p, std::span< const int > s) const
   {
      double total = 0.;
      for(auto k : m_incident[p]) {
         const auto& e = m_edges[k];
         const int other = static_cast< int >(p) == e.p ? e.q : e.p;
         total += edge_payoff(k, p, s[p], s[static_cast< std::size_t >(other)]);
      }
      return total;
   }

   /// True iff the edge graph has no cycle.
   [[nodiscard]] bool is_forest() const
   {
      std::vector< std::size_t > parent(players());
      std::iota(parent.begin(), parent.end(), std::size_t{0});
      auto find = [&](std::size_t x) {
         while(parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
         }
         return x;
      };
      for(const auto& e : m_edges) {
         auto a = find(static_cast< std::size_t >(e.p));
         auto b = find(static_cast< std::size_t >(e.q));
         if(a == b) {
            return false;
         }
         parent[a] = b;
      }
      return true;
   }

  private:
   std::vector< int > m_action_counts;
   std::vector< PolymatrixEdge > m_edges;
   std::vector< std::vector< std::size_t > > m_incident;
};

/// Symmetric game in which a player's payoff depends on her action and the number of players
/// sharing it.
class SingletonCongestionGame {
  public:
   /// `payoffs[a][c - 1]` is the per-user payoff on action a when c players chose it.
   SingletonCongestionGame(std::size_t players, std::vector< std::vector< double > > payoffs)
       : m_players(players), m_payoffs(std::move(payoffs))
   {
      if(m_players < 1) {
         throw InvalidArgument("a game needs at least one player");
      }
      if(m_payoffs.empty()) {
         throw InvalidArgument("a congestion game needs at least one action");
      }
      for(const auto& row : m_payoffs) {
         if(row.size() != m_players) {
            throw InvalidArgument("congestion payoff table needs one entry per possible count");
         }
         for(double f : row) {
            detail::check_finite(f, "congestion payoff table");
         }
      }
      m_action_counts.assign(m_players, static_cast< int >(m_payoffs.size()));
   }

   [[nodiscard]] std::size_t players() const { return m_players; }
   [[nodiscard]] std::size_t actions() const { return m_payoffs.size(); }
   [[nodiscard]] const std::vector< int >& action_counts() const { return m_action_counts; }
   [[nodiscard]] const std::vector< std::vector< double > >& payoffs() const { return m_payoffs; }

   /// f^a(count); count in [1, n].
   [[nodiscard]] double payoff(int action, int count) const
   {
      return m_payoffs[static_cast< std::size_t >(action)][static_cast< std::size_t >(count - 1)];
   }

   [[nodiscard]] double utility(std::size_t p, std::span< const int > s) const
   {
      const int a = s[p];
      const auto c = std::count(s.begin(), s.end(), a);
      return payoff(a, static_cast< int >(c));
   }

   /// Social welfare as a function of the counts alone.
   [[nodiscard]] double welfare(std::span< const int > counts) const
   {
      double total = 0.;
      for(std::size_t a = 0; a < counts.size(); ++a) {
         if(counts[a] > 0) {
            total += counts[a] * payoff(static_cast< int >(a), counts[a]);
         }
      }
      return total;
   }

  private:
   std::size_t m_players;
   std::vector< std::vector< double > > m_payoffs;
   std::vector< int > m_action_counts;
};

// ---------------------------------------------------------------------------------------------
// Uniform wrapper
// ---------------------------------------------------------------------------------------------

enum class Representation { normal_form, polymatrix, singleton_congestion };

class GameInstance {
  public:
   using variant_type = std::variant< NormalFormGame, PolymatrixGame, SingletonCongestionGame >;

   // NOLINTNEXTLINE(google-explicit-constructor)
   GameInstance(variant_type game) : m_game(std::move(game))
   {
      m_action_counts = std::visit([](const auto& g) { return g.action_counts(); }, m_game);
      m_profile_count = detail::profile_count(m_action_counts);
      for(int m : m_action_counts) {
         m_incentive_rows += static_cast< std::size_t >(m) * static_cast< std::size_t >(m);
         m_coarse_rows += static_cast< std::size_t >(m);
      }
      m_offsets.reserve(m_action_counts.size());
      m_coarse_offsets.reserve(m_action_counts.size());
      std::size_t off = 0, coff = 0;
      for(int m : m_action_counts) {
         m_offsets.push_back(off);
         m_coarse_offsets.push_back(coff);
         off += static_cast< std::size_t >(m) * static_cast< std::size_t >(m);
         coff += static_cast< std::size_t >(m);
      }
   }

   [[nodiscard]] const variant_type& variant() const { return m_game; }
   [[nodiscard]] Representation representation() const
   {
      return static_cast< Representation >(m_game.index());
   }
   template < typename T >
   [[nodiscard]] const T* as() const
   {
      return std::get_if< T >(&m_game);
   }

   [[nodiscard]] std::size_t players() const { return m_action_counts.size(); }
   [[nodiscard]] int actions(std::size_t p) const { return m_action_counts[p]; }
   [[nodiscard]] const std::vector< int >& action_counts() const { return m_action_counts; }
   /// Total number of pure profiles, saturating at UINT64_MAX.
   [[nodiscard]] std::uint64_t profile_count() const { return m_profile_count; }
   /// N = sum_p m_p^2.
   [[nodiscard]] std::size_t incentive_rows() const { return m_incentive_rows; }
   /// sum_p m_p.
   [[nodiscard]] std::size_t coarse_rows() const { return m_coarse_rows; }
   /// Flat index of the (p, i, j) incentive row.
   [[nodiscard]] std::size_t incentive_index(std::size_t p, int i, int j) const
   {
      return m_offsets[p] + static_cast< std::size_t >(i * m_action_counts[p] + j);
   }
   [[nodiscard]] std::size_t coarse_index(std::size_t p, int j) const
   {
      return m_coarse_offsets[p] + static_cast< std::size_t >(j);
   }

   void validate(std::span< const int > s) const
   {
      if(s.size() != players()) {
         throw InvalidArgument("profile length does not match the player count");
      }
      for(std::size_t p = 0; p < s.size(); ++p) {
         if(s[p] < 0 || s[p] >= m_action_counts[p]) {
            throw InvalidArgument("action index out of range for player " + std::to_string(p));
         }
      }
   }

   void validate_player(std::size_t p) const
   {
      if(p >= players()) {
         throw InvalidArgument("player index out of range");
      }
   }

   /// Unchecked utility query.
   [[nodiscard]] double raw_utility(std::size_t p, std::span< const int > s) const
   {
      return std::visit([&](const auto& g) { return g.utility(p, s); }, m_game);
   }

  private:
   variant_type m_game;
   std::vector< int > m_action_counts;
   std::uint64_t m_profile_count = 0;
   std::size_t m_incentive_rows = 0;
   std::size_t m_coarse_rows = 0;
   std::vector< std::size_t > m_offsets;
   std::vector< std::size_t > m_coarse_offsets;
};

inline double utility(const GameInstance& game, std::size_t p, std::span< const int > s)
{
   game.validate_player(p);
   game.validate(s);
   return game.raw_utility(p, s);
}

/// u^p at the profile where p switches to `action` and everyone else keeps s.
inline double deviation_utility(
   const GameInstance& game,
   std::size_t p,
   int action,
   std::span< const int > s)
{
   PureProfile dev(s.begin(), s.end());
   dev[p] = action;
   return game.raw_utility(p, dev);
}

inline double weighted_welfare(
   const GameInstance& game,
   std::span< const double > weights,
   std::span< const int > s)
{
   if(weights.size() != game.players()) {
      throw InvalidArgument("weight vector length does not match the player count");
   }
   game.validate(s);
   double total = 0.;
   for(std::size_t p = 0; p < game.players(); ++p) {
      total += weights[p] * game.raw_utility(p, s);
   }
   return total;
}

inline double social_welfare(const GameInstance& game, std::span< const int > s)
{
   const std::vector< double > ones(game.players(), 1.);
   return weighted_welfare(game, ones, s);
}

/// Smallest and largest utility any player can receive.
inline std::pair< double, double > utility_range(const GameInstance& game)
{
   struct Visitor {
      std::pair< double, double > operator()(const NormalFormGame& g) const
      {
         const auto [lo, hi] = std::minmax_element(g.utilities().begin(), g.utilities().end());
         return {*lo, *hi};
      }
      std::pair< double, double > operator()(const PolymatrixGame& g) const
      {
         double lo = std::numeric_limits< double >::infinity();
         double hi = -lo;
         for(std::size_t p = 0; p < g.players(); ++p) {
            double plo = 0., phi = 0.;
            for(auto k : g.incident_edges(p)) {
               const auto& e = g.edges()[k];
               const auto& mat = static_cast< int >(p) == e.p ? e.pq : e.qp;
               plo += mat.minCoeff();
               phi += mat.maxCoeff();
            }
            lo = std::min(lo, plo);
            hi = std::max(hi, phi);
         }
         return {lo, hi};
      }
      std::pair< double, double > operator()(const SingletonCongestionGame& g) const
      {
         double lo = std::numeric_limits< double >::infinity();
         double hi = -lo;
         for(const auto& row : g.payoffs()) {
            const auto [l, h] = std::minmax_element(row.begin(), row.end());
            lo = std::min(lo, *l);
            hi = std::max(hi, *h);
         }
         return {lo, hi};
      }
   };
   return std::visit(Visitor{}, game.variant());
}

// ---------------------------------------------------------------------------------------------
// Constraint columns
// ---------------------------------------------------------------------------------------------

struct CeEntry {
   std::size_t player;
   int from;
   int to;
   double value;

   bool operator==(const CeEntry&) const = default;
};

struct CceEntry {
   std::size_t player;
   int to;
   double value;

   bool operator==(const CceEntry&) const = default;
};

/// Nonzero-pattern of column U_s: entries (p, s_p, j) for j != s_p, ordered by (p, j).
inline std::vector< CeEntry > ce_column(const GameInstance& game, std::span< const int > s)
{
   game.validate(s);
   std::vector< CeEntry > column;
   PureProfile dev(s.begin(), s.end());
   for(std::size_t p = 0; p < game.players(); ++p) {
      const double base = game.raw_utility(p, s);
      for(int j = 0; j < game.actions(p); ++j) {
         if(j == s[p]) {
            continue;
         }
         dev[p] = j;
         column.push_back({p, s[p], j, base - game.raw_utility(p, dev)});
      }
      dev[p] = s[p];
   }
   return column;
}

/// Column C_s: entries (p, j) for every j, including the zero at j = s_p.
inline std::vector< CceEntry > cce_column(const GameInstance& game, std::span< const int > s)
{
   game.validate(s);
   std::vector< CceEntry > column;
   column.reserve(game.coarse_rows());
   PureProfile dev(s.begin(), s.end());
   for(std::size_t p = 0; p < game.players(); ++p) {
      const double base = game.raw_utility(p, s);
      for(int j = 0; j < game.actions(p); ++j) {
         if(j == s[p]) {
            column.push_back({p, j, 0.});
            continue;
         }
         dev[p] = j;
         column.push_back({p, j, base - game.raw_utility(p, dev)});
      }
      dev[p] = s[p];
   }
   return column;
}

// ---------------------------------------------------------------------------------------------
// Profile enumeration and counts
// ---------------------------------------------------------------------------------------------

/// Lexicographic (odometer) range over every pure profile of a game.
class ProfileRange {
  public:
   class iterator {
     public:
      using iterator_category = std::forward_iterator_tag;
      using value_type = PureProfile;
      using difference_type = std::ptrdiff_t;
      using pointer = const PureProfile*;
      using reference = const PureProfile&;

      iterator() = default;
      iterator(const std::vector< int >* radices, bool at_end)
          : m_radices(radices), m_current(radices->size(), 0), m_end(at_end)
      {
      }

      reference operator*() const { return m_current; }
      pointer operator->() const { return &m_current; }

      iterator& operator++()
      {
         for(std::size_t p = m_current.size(); p-- > 0;) {
            if(++m_current[p] < (*m_radices)[p]) {
               return *this;
            }
            m_current[p] = 0;
         }
         m_end = true;
         return *this;
      }
      iterator operator++(int)
      {
         auto copy = *this;
         ++*this;
         return copy;
      }

      bool operator==(const iterator& other) const
      {
         if(m_end || other.m_end) {
            return m_end == other.m_end;
         }
         return m_current == other.m_current;
      }

     private:
      const std::vector< int >* m_radices = nullptr;
      PureProfile m_current;
      bool m_end = true;
   };

   ProfileRange(std::vector< int > radices) : m_radices(std::move(radices)) {}

   [[nodiscard]] iterator begin() const { return {&m_radices, false}; }
   [[nodiscard]] iterator end() const { return {&m_radices, true}; }

  private:
   std::vector< int > m_radices;
};

inline ProfileRange enumerate_profiles(
   const GameInstance& game,
   std::uint64_t cap = kDefaultProfileCap)
{
   if(game.profile_count() > cap) {
      throw ResourceLimit(
         "profile enumeration over " + std::to_string(game.profile_count())
         + " profiles exceeds the cap of " + std::to_string(cap));
   }
   return ProfileRange(game.action_counts());
}

inline CountVector count_vector(std::span< const int > s, int actions)
{
   CountVector counts(static_cast< std::size_t >(actions), 0);
   for(int a : s) {
      if(a < 0 || a >= actions) {
         throw InvalidArgument("action index out of range in count_vector");
      }
      ++counts[static_cast< std::size_t >(a)];
   }
   return counts;
}

/// n! / prod_a c(a)!, the number of profiles inducing the count vector c.
inline double profiles_with_counts(std::span< const int > counts)
{
   // built up as a product of binomials to stay exact for moderate n
   double result = 1.;
   int placed = 0;
   for(int c : counts) {
      if(c < 0) {
         throw InvalidArgument("negative entry in count vector");
      }
      for(int k = 1; k <= c; ++k) {
         result = result * (placed + k) / k;
      }
      placed += c;
   }
   return std::round(result);
}

}  // namespace optce

#endif  // OPTCE_GAME_HPP
