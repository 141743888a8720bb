#ifndef OPTCE_COLGEN_HPP
#define OPTCE_COLGEN_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "optce/errors.hpp"
#include "optce/game.hpp"
#include "optce/lp.hpp"
#include "optce/oracle.hpp"

namespace optce {

enum class Concept { ce, cce, maxmin };

inline std::string to_string(Concept c)
{
   switch(c) {
      case Concept::ce: return "ce";
      case Concept::cce: return "cce";
      case Concept::maxmin: return "maxmin";
   }
   return "?";
}

inline std::string to_string(Direction d) { return d == Direction::max ? "max" : "min"; }

/// Linear objective sum_p weights_p E[u^p], maximized or minimized. Empty weights mean all-ones
/// (social welfare).
struct ObjectiveSpec {
   PlayerWeights weights;
   Direction direction = Direction::max;

   [[nodiscard]] PlayerWeights resolved(std::size_t players) const
   {
      if(weights.empty()) {
         return uniform_weights(players);
      }
      if(weights.size() != players) {
         throw InvalidArgument("objective weights need one entry per player");
      }
      for(double w : weights) {
         if(! std::isfinite(w)) {
            throw InvalidArgument("objective weights must be finite");
         }
      }
      return weights;
   }
};

struct CorrelatedDistribution {
   std::vector< std::pair< PureProfile, double > > support;
};

/// Player-symmetric distribution: each count class carries a probability that is spread
/// uniformly over the profiles inducing it.
struct ExchangeableDistribution {
   std::vector< std::pair< CountVector, double > > support;
};

struct SolveReport {
   Concept kind = Concept::ce;
   double value = 0.;
   std::variant< CorrelatedDistribution, ExchangeableDistribution > distribution;
   std::size_t iterations = 0;
   std::size_t oracle_calls = 0;
   double penalty = 0.;
   /// max(0, -min constraint value) over the concept's incentive rows.
   double max_violation = 0.;
   /// Lagrangian upper bound from the final prices minus the achieved value (max sense).
   double duality_gap = 0.;
   /// The doubling cap on M was exhausted and the run finished without slacks.
   bool penalty_fallback = false;

   [[nodiscard]] std::size_t support_size() const
   {
      return std::visit([](const auto& d) { return d.support.size(); }, distribution);
   }
};

struct SolverConfig {
   double pricing_slack = kDefaultPricingSlack;
   /// Feasibility tolerance of the master LP.
   double master_tolerance = 1e-8;
   /// Slack mass above which the penalty is doubled.
   double slack_tolerance = 1e-8;
   /// Cap on master solves; 0 means 10 (N + 1).
   std::size_t max_iterations = 0;
   int penalty_doublings = 6;
   std::uint64_t profile_cap = kDefaultProfileCap;
   std::size_t lp_nonzero_cap = 20'000;

   [[nodiscard]] lp::Options lp_options() const
   {
      lp::Options options;
      options.feasibility_tolerance = master_tolerance;
      options.nonzero_cap = lp_nonzero_cap;
      return options;
   }
};

/// Pricing oracle for CE-type masters: maximizes the weighted deviation-adjusted welfare.
using CePricer = std::function< OracleAnswer(
   std::span< const double > weights,
   const DeviationPlan& y,
   double threshold,
   double slack) >;
/// Pricing oracle for CCE masters.
using CcePricer = std::function< OracleAnswer(
   std::span< const double > weights,
   const CoarseDeviationPlan& y,
   double threshold,
   double slack) >;

// The returned pricers hold a reference to the game; it must outlive them.

inline CePricer bruteforce_pricer(const GameInstance& game, std::uint64_t cap = kDefaultProfileCap)
{
   return [&game, cap](std::span< const double > w, const DeviationPlan& y, double t, double eps) {
      return oracle_bruteforce(game, w, y, t, eps, cap);
   };
}

inline CcePricer bruteforce_coarse_pricer(
   const GameInstance& game,
   std::uint64_t cap = kDefaultProfileCap)
{
   return
      [&game, cap](std::span< const double > w, const CoarseDeviationPlan& y, double t, double eps) {
         return oracle_bruteforce(game, w, y, t, eps, cap);
      };
}

inline CePricer tree_pricer(const PolymatrixGame& game)
{
   if(! game.is_forest()) {
      throw UnsupportedStructure("tree oracle needs a forest polymatrix game");
   }
   return [&game](std::span< const double > w, const DeviationPlan& y, double t, double eps) {
      return oracle_tree_polymatrix(game, w, y, t, eps);
   };
}

/// Coarse prices are lifted to CE prices and handed to the tree oracle.
inline CcePricer tree_coarse_pricer(const PolymatrixGame& game)
{
   if(! game.is_forest()) {
      throw UnsupportedStructure("tree oracle needs a forest polymatrix game");
   }
   return [&game](std::span< const double > w, const CoarseDeviationPlan& y, double t, double eps) {
      return oracle_tree_polymatrix(game, w, y, t, eps);
   };
}

namespace detail {

template < typename Column >
struct Priced {
   bool found = false;
   Column witness;
   double value = 0.;
};

/// Everything the generic restricted-master loop needs to know about one concept.
template < typename Column >
struct MasterModel {
   std::size_t incentive_rows = 0;
   std::size_t players = 0;
   bool maxmin = false;
   /// Coefficients of a column on the incentive rows (constraint: coeffs . x >= 0).
   std::function< std::vector< double >(const Column&) > coefficients;
   /// Max-sense objective coefficient of a column (unused for max-min).
   std::function< double(const Column&) > objective;
   /// Per-player utilities of a column (max-min only).
   std::function< std::vector< double >(const Column&) > utilities;
   /// Pricing: weights, incentive-row prices, threshold.
   std::function< Priced< Column >(std::span< const double >, std::span< const double >, double) >
      price;
   PlayerWeights initial_weights;
   /// Scale used to normalize per-row constraint values when reporting violations.
   double violation_scale = 1.;
   std::size_t max_iterations = 0;
   double utility_spread = 0.;
   std::size_t penalty_rows = 0;
};

template < typename Column >
struct MasterResult {
   std::vector< std::pair< Column, double > > support;
   double value = 0.;  // max sense
   std::size_t iterations = 0;
   std::size_t oracle_calls = 0;
   double penalty = 0.;
   double max_violation = 0.;
   double duality_gap = 0.;
   bool penalty_fallback = false;
};

enum class Phase {
   /// big-M slacks on the incentive rows
   penalized,
   /// minimize the slacks, objective ignored
   feasibility,
   /// no slacks; requires a feasible column set
   exact,
};

/// Restricted master with penalized slacks on the incentive rows:
///   max  obj.x - M sum v      (or  r - M sum v  for max-min)
///   s.t. coeffs(r).x + v_r >= 0,   [u^p.x - r >= 0],   sum x = 1,   x, v >= 0.
/// If the slacks survive every doubling of M, the run finishes with a feasibility phase
/// followed by a slack-free master.
template < typename Column >
MasterResult< Column > run_column_generation(const MasterModel< Column >& model, const SolverConfig& cfg)
{
   const std::size_t rows = model.incentive_rows;
   const std::size_t players = model.maxmin ? model.players : 0;
   const double inf = std::numeric_limits< double >::infinity();

   std::vector< Column > columns;
   std::vector< std::vector< double > > column_coeffs;
   std::vector< double > column_objective;
   std::vector< std::vector< double > > column_utilities;
   auto add_column = [&](const Column& c) {
      columns.push_back(c);
      column_coeffs.push_back(model.coefficients(c));
      if(model.maxmin) {
         column_utilities.push_back(model.utilities(c));
      } else {
         column_objective.push_back(model.objective(c));
      }
   };

   MasterResult< Column > result;
   const std::vector< double > zero_prices(rows, 0.);
   {
      auto first = model.price(model.initial_weights, zero_prices, -inf);
      ++result.oracle_calls;
      add_column(first.witness);
   }

   double penalty = 1. + static_cast< double >(model.penalty_rows + 1) * model.utility_spread;
   const auto options = cfg.lp_options();
   lp::Solution solution;
   double last_bound = inf;
   double last_threshold = 0.;

   auto solve_master = [&](Phase phase) {
      if(result.iterations >= model.max_iterations) {
         throw Nonconvergence(
            "column generation exceeded " + std::to_string(model.max_iterations)
            + " master solves (" + std::to_string(columns.size())
            + " columns, last reduced value " + std::to_string(last_bound - last_threshold) + ")");
      }
      ++result.iterations;
      const std::size_t k = columns.size();
      const std::size_t slacks = phase == Phase::exact ? 0 : rows;
      const std::size_t vars = k + slacks + (model.maxmin ? 1 : 0);
      const std::size_t r_var = k + slacks;
      lp::Problem master;
      master.sense = lp::Sense::maximize;
      master.objective.assign(vars, 0.);
      master.lower.assign(vars, 0.);
      if(phase != Phase::feasibility) {
         for(std::size_t c = 0; c < k && ! model.maxmin; ++c) {
            master.objective[c] = column_objective[c];
         }
         if(model.maxmin) {
            master.objective[r_var] = 1.;
         }
      }
      for(std::size_t r = 0; r < slacks; ++r) {
         master.objective[k + r] = phase == Phase::penalized ? -penalty : -1.;
      }
      if(model.maxmin) {
         master.lower[r_var] = -inf;
      }
      for(std::size_t p = 0; p < players; ++p) {
         std::vector< double > row(vars, 0.);
         for(std::size_t c = 0; c < k; ++c) {
            row[c] = column_utilities[c][p];
         }
         row[r_var] = -1.;
         master.add_row(std::move(row), lp::Relation::greater_equal, 0.);
      }
      for(std::size_t r = 0; r < rows; ++r) {
         std::vector< double > row(vars, 0.);
         for(std::size_t c = 0; c < k; ++c) {
            row[c] = column_coeffs[c][r];
         }
         if(slacks > 0) {
            row[k + r] = 1.;
         }
         master.add_row(std::move(row), lp::Relation::greater_equal, 0.);
      }
      {
         std::vector< double > row(vars, 0.);
         std::fill(row.begin(), row.begin() + static_cast< std::ptrdiff_t >(k), 1.);
         master.add_row(std::move(row), lp::Relation::equal, 1.);
      }
      solution = lp::solve(master, options);
      if(solution.status != lp::Status::optimal) {
         throw Nonconvergence("restricted master LP did not solve to optimality");
      }
   };

   auto generate = [&](Phase phase) {
      while(true) {
         solve_master(phase);
         PlayerWeights weights = model.initial_weights;
         if(phase == Phase::feasibility) {
            std::fill(weights.begin(), weights.end(), 0.);
         } else if(model.maxmin) {
            double total = 0.;
            for(std::size_t p = 0; p < players; ++p) {
               weights[p] = std::max(0., -solution.duals[p]);
               total += weights[p];
            }
            if(total <= 0.) {
               weights = uniform_weights(players, 1. / static_cast< double >(players));
            } else {
               for(auto& w : weights) {
                  w /= total;
               }
            }
         }
         std::vector< double > prices(rows);
         for(std::size_t r = 0; r < rows; ++r) {
            prices[r] = std::max(0., -solution.duals[players + r]);
         }
         last_threshold = solution.duals[players + rows];

         auto priced = model.price(weights, prices, last_threshold);
         ++result.oracle_calls;
         last_bound = priced.value;
         const bool present =
            std::find(columns.begin(), columns.end(), priced.witness) != columns.end();
         if(! priced.found || present) {
            return;
         }
         add_column(priced.witness);
      }
   };

   auto largest_slack = [&] {
      double largest = 0.;
      for(std::size_t r = 0; r < rows; ++r) {
         largest = std::max(largest, solution.primal[columns.size() + r]);
      }
      return largest;
   };

   for(int doubling = 0;; ++doubling) {
      generate(Phase::penalized);
      if(largest_slack() <= cfg.slack_tolerance) {
         break;
      }
      if(doubling >= cfg.penalty_doublings) {
         generate(Phase::feasibility);
         if(const double left = largest_slack(); left > cfg.slack_tolerance) {
            throw PenaltyFailure(
               "incentive slacks remain positive (" + std::to_string(left)
               + ") with the objective switched off");
         }
         generate(Phase::exact);
         result.penalty_fallback = true;
         break;
      }
      penalty *= 2.;
   }

   // --- primal recovery -----------------------------------------------------------------------
   double mass = 0.;
   for(std::size_t c = 0; c < columns.size(); ++c) {
      const double x = solution.primal[c];
      if(x > 1e-13) {
         result.support.emplace_back(columns[c], x);
         mass += x;
      }
   }
   std::vector< double > row_values(rows, 0.);
   std::vector< double > player_values(players, 0.);
   double objective = 0.;
   for(auto& [column, x] : result.support) {
      x /= mass;
      const auto idx = static_cast< std::size_t >(
         std::find(columns.begin(), columns.end(), column) - columns.begin());
      for(std::size_t r = 0; r < rows; ++r) {
         row_values[r] += x * column_coeffs[idx][r];
      }
      if(model.maxmin) {
         for(std::size_t p = 0; p < players; ++p) {
            player_values[p] += x * column_utilities[idx][p];
         }
      } else {
         objective += x * column_objective[idx];
      }
   }
   if(model.maxmin) {
      objective = *std::min_element(player_values.begin(), player_values.end());
   }
   double worst = 0.;
   for(double v : row_values) {
      worst = std::min(worst, v / model.violation_scale);
   }
   result.value = objective;
   result.max_violation = -worst;
   result.penalty = penalty;
   result.duality_gap = last_bound - objective;
   return result;
}

inline std::vector< std::size_t > ce_row_layout(const GameInstance& game)
{
   // row k <-> (p, i, j) with i != j, in (p, i, j) order; value is the dense plan index
   std::vector< std::size_t > layout;
   for(std::size_t p = 0; p < game.players(); ++p) {
      for(int i = 0; i < game.actions(p); ++i) {
         for(int j = 0; j < game.actions(p); ++j) {
            if(i != j) {
               layout.push_back(game.incentive_index(p, i, j));
            }
         }
      }
   }
   return layout;
}

inline double default_spread(const GameInstance& game)
{
   const auto [lo, hi] = utility_range(game);
   return hi - lo;
}

inline std::size_t default_iterations(const GameInstance& game, const SolverConfig& cfg)
{
   return cfg.max_iterations > 0 ? cfg.max_iterations : 10 * (game.incentive_rows() + 1);
}

/// CE master over pure-profile columns; shared by the optimal and max-min solvers.
inline MasterModel< PureProfile > ce_model(
   const GameInstance& game,
   const PlayerWeights& weights,
   const CePricer& pricer,
   const SolverConfig& cfg)
{
   MasterModel< PureProfile > model;
   struct RowKey {
      std::size_t p;
      int i;
      int j;
   };
   std::vector< RowKey > keys;
   for(std::size_t p = 0; p < game.players(); ++p) {
      for(int i = 0; i < game.actions(p); ++i) {
         for(int j = 0; j < game.actions(p); ++j) {
            if(i != j) {
               keys.push_back({p, i, j});
            }
         }
      }
   }
   model.incentive_rows = keys.size();
   model.players = game.players();
   model.coefficients = [&game, keys](const PureProfile& s) {
      std::vector< double > coeffs(keys.size(), 0.);
      const auto column = ce_column(game, s);
      std::size_t r = 0;
      for(const auto& e : column) {
         while(! (keys[r].p == e.player && keys[r].i == e.from && keys[r].j == e.to)) {
            ++r;
         }
         coeffs[r] = e.value;
      }
      return coeffs;
   };
   model.objective = [&game, weights](const PureProfile& s) {
      return weighted_welfare(game, weights, s);
   };
   model.utilities = [&game](const PureProfile& s) {
      std::vector< double > u(game.players());
      for(std::size_t p = 0; p < game.players(); ++p) {
         u[p] = game.raw_utility(p, s);
      }
      return u;
   };
   const double slack = cfg.pricing_slack;
   model.price = [&game, keys, &pricer, slack](
                    std::span< const double > w,
                    std::span< const double > prices,
                    double t) {
      DeviationPlan y(game);
      for(std::size_t r = 0; r < keys.size(); ++r) {
         if(prices[r] > 0.) {
            y.set(keys[r].p, keys[r].i, keys[r].j, prices[r]);
         }
      }
      auto answer = pricer(w, y, t, slack);
      return Priced< PureProfile >{answer.found, std::move(answer.witness), answer.value};
   };
   model.initial_weights = weights;
   model.max_iterations = default_iterations(game, cfg);
   model.utility_spread = default_spread(game);
   model.penalty_rows = game.incentive_rows();
   return model;
}

template < typename Distribution, typename Column >
SolveReport finish_report(Concept kind, MasterResult< Column >&& result, double sign)
{
   SolveReport report;
   report.kind = kind;
   report.value = sign * result.value;
   report.iterations = result.iterations;
   report.oracle_calls = result.oracle_calls;
   report.penalty = result.penalty;
   report.max_violation = result.max_violation;
   report.duality_gap = result.duality_gap;
   report.penalty_fallback = result.penalty_fallback;
   Distribution dist;
   dist.support = std::move(result.support);
   report.distribution = std::move(dist);
   return report;
}

inline PlayerWeights signed_weights(const GameInstance& game, const ObjectiveSpec& objective)
{
   auto w = objective.resolved(game.players());
   if(objective.direction == Direction::min) {
      for(auto& x : w) {
         x = -x;
      }
   }
   return w;
}

}  // namespace detail

/// Optimal CE by column generation. Minimization runs as maximization of the negated weights.
inline SolveReport solve_optimal_ce(
   const GameInstance& game,
   const ObjectiveSpec& objective,
   const CePricer& pricer,
   const SolverConfig& cfg = {})
{
   const auto weights = detail::signed_weights(game, objective);
   auto model = detail::ce_model(game, weights, pricer, cfg);
   const double sign = objective.direction == Direction::max ? 1. : -1.;
   return detail::finish_report< CorrelatedDistribution >(Concept::ce, detail::run_column_generation(model, cfg), sign);
}

/// Max-min welfare CE: the pricing weights are the duals of the per-player rows.
inline SolveReport solve_maxmin_ce(
   const GameInstance& game,
   const CePricer& pricer,
   const SolverConfig& cfg = {})
{
   const auto n = game.players();
   auto model =
      detail::ce_model(game, uniform_weights(n, 1. / static_cast< double >(n)), pricer, cfg);
   model.maxmin = true;
   return detail::finish_report< CorrelatedDistribution >(Concept::maxmin, detail::run_column_generation(model, cfg), 1.);
}

inline SolveReport solve_optimal_cce(
   const GameInstance& game,
   const ObjectiveSpec& objective,
   const CcePricer& pricer,
   const SolverConfig& cfg = {})
{
   const auto weights = detail::signed_weights(game, objective);
   detail::MasterModel< PureProfile > model;
   model.incentive_rows = game.coarse_rows();
   model.players = game.players();
   model.coefficients = [&game](const PureProfile& s) {
      std::vector< double > coeffs(game.coarse_rows(), 0.);
      for(const auto& e : cce_column(game, s)) {
         coeffs[game.coarse_index(e.player, e.to)] = e.value;
      }
      return coeffs;
   };
   model.objective = [&game, weights](const PureProfile& s) {
      return weighted_welfare(game, weights, s);
   };
   const double slack = cfg.pricing_slack;
   model.price = [&game, &pricer, slack](
                    std::span< const double > w,
                    std::span< const double > prices,
                    double t) {
      CoarseDeviationPlan y(game);
      for(std::size_t p = 0; p < game.players(); ++p) {
         for(int j = 0; j < game.actions(p); ++j) {
            const double v = prices[game.coarse_index(p, j)];
            if(v > 0.) {
               y.set(p, j, v);
            }
         }
      }
      auto answer = pricer(w, y, t, slack);
      return detail::Priced< PureProfile >{answer.found, std::move(answer.witness), answer.value};
   };
   model.initial_weights = weights;
   model.max_iterations = detail::default_iterations(game, cfg);
   model.utility_spread = detail::default_spread(game);
   model.penalty_rows = game.incentive_rows();
   const double sign = objective.direction == Direction::max ? 1. : -1.;
   return detail::finish_report< CorrelatedDistribution >(Concept::cce, detail::run_column_generation(model, cfg), sign);
}

/// Optimal CCE of a singleton congestion game over exchangeable distributions. One master row
/// per action (the player-averaged deviation gain g_j(c)/n); pricing by the count-vector DP.
/// The objective weights must be identical across players.
inline SolveReport solve_scg_cce_symmetric(
   const GameInstance& game,
   const ObjectiveSpec& objective,
   const SolverConfig& cfg = {})
{
   const auto* scg = game.as< SingletonCongestionGame >();
   if(scg == nullptr) {
      throw InvalidArgument("symmetric solver needs a singleton congestion game");
   }
   const auto weights = objective.resolved(game.players());
   if(std::any_of(weights.begin(), weights.end(), [&](double w) { return w != weights[0]; })) {
      throw InvalidArgument("symmetric solver needs identical weights for every player");
   }
   const double sign = objective.direction == Direction::max ? 1. : -1.;
   // sum_p w E[u^p] = w E[sw]
   const double scale = sign * weights[0];
   const std::size_t k = scg->actions();

   detail::MasterModel< CountVector > model;
   model.incentive_rows = k;
   model.players = game.players();
   model.coefficients = [scg, k](const CountVector& c) {
      std::vector< double > g(k);
      for(std::size_t j = 0; j < k; ++j) {
         g[j] = scg_deviation_gap(*scg, c, static_cast< int >(j));
      }
      return g;
   };
   model.objective = [scg, scale](const CountVector& c) { return scale * scg->welfare(c); };
   const double slack = cfg.pricing_slack;
   // the welfare scale travels as the (common) pricing weight so that the feasibility phase
   // can switch it off
   model.price = [scg, slack](
                    std::span< const double > w,
                    std::span< const double > prices,
                    double t) {
      auto [counts, value] = scg_coarse_opt_scaled(*scg, w[0], prices);
      return detail::Priced< CountVector >{value > t + slack, std::move(counts), value};
   };
   model.initial_weights = uniform_weights(game.players(), scale);
   model.violation_scale = static_cast< double >(game.players());
   model.max_iterations = detail::default_iterations(game, cfg);
   model.utility_spread = detail::default_spread(game);
   model.penalty_rows = game.incentive_rows();
   return detail::finish_report< ExchangeableDistribution >(Concept::cce, detail::run_column_generation(model, cfg), sign);
}

/// The full LP over every pure profile, solved directly. Verification route for the column
/// generation solvers.
inline SolveReport solve_full_lp(
   const GameInstance& game,
   const ObjectiveSpec& objective,
   Concept kind,
   const SolverConfig& cfg = {})
{
   const auto weights = objective.resolved(game.players());
   std::vector< PureProfile > profiles;
   for(const auto& s : enumerate_profiles(game, cfg.profile_cap)) {
      profiles.push_back(s);
   }
   const std::size_t m = profiles.size();
   const std::size_t n = game.players();
   const bool maxmin = kind == Concept::maxmin;
   const std::size_t vars = m + (maxmin ? 1 : 0);

   lp::Problem problem;
   problem.sense = (maxmin || objective.direction == Direction::max) ? lp::Sense::maximize
                                                                      : lp::Sense::minimize;
   problem.objective.assign(vars, 0.);
   problem.lower.assign(vars, 0.);
   if(maxmin) {
      problem.objective[m] = 1.;
      problem.lower[m] = -lp::kInf;
   } else {
      for(std::size_t c = 0; c < m; ++c) {
         problem.objective[c] = weighted_welfare(game, weights, profiles[c]);
      }
   }

   // incentive rows straight from the definitions
   std::vector< std::vector< double > > rows;
   if(kind == Concept::cce) {
      rows.assign(game.coarse_rows(), std::vector< double >(vars, 0.));
      for(std::size_t c = 0; c < m; ++c) {
         for(std::size_t p = 0; p < n; ++p) {
            for(int j = 0; j < game.actions(p); ++j) {
               rows[game.coarse_index(p, j)][c] =
                  game.raw_utility(p, profiles[c]) - deviation_utility(game, p, j, profiles[c]);
            }
         }
      }
   } else {
      const auto layout = detail::ce_row_layout(game);
      std::vector< std::size_t > position(game.incentive_rows(), 0);
      for(std::size_t r = 0; r < layout.size(); ++r) {
         position[layout[r]] = r;
      }
      rows.assign(layout.size(), std::vector< double >(vars, 0.));
      for(std::size_t c = 0; c < m; ++c) {
         const auto& s = profiles[c];
         for(std::size_t p = 0; p < n; ++p) {
            for(int j = 0; j < game.actions(p); ++j) {
               if(j != s[p]) {
                  rows[position[game.incentive_index(p, s[p], j)]][c] =
                     game.raw_utility(p, s) - deviation_utility(game, p, j, s);
               }
            }
         }
      }
   }
   if(maxmin) {
      for(std::size_t p = 0; p < n; ++p) {
         std::vector< double > row(vars, 0.);
         for(std::size_t c = 0; c < m; ++c) {
            row[c] = game.raw_utility(p, profiles[c]);
         }
         row[m] = -1.;
         problem.add_row(std::move(row), lp::Relation::greater_equal, 0.);
      }
   }
   const std::size_t incentive = rows.size();
   for(auto& row : rows) {
      problem.add_row(std::move(row), lp::Relation::greater_equal, 0.);
   }
   {
      std::vector< double > row(vars, 0.);
      std::fill(row.begin(), row.begin() + static_cast< std::ptrdiff_t >(m), 1.);
      problem.add_row(std::move(row), lp::Relation::equal, 1.);
   }

   const auto solution = lp::solve(problem, cfg.lp_options());
   if(solution.status != lp::Status::optimal) {
      throw Nonconvergence("full LP did not solve to optimality");
   }

   SolveReport report;
   report.kind = kind;
   CorrelatedDistribution dist;
   double mass = 0.;
   for(std::size_t c = 0; c < m; ++c) {
      if(solution.primal[c] > 1e-13) {
         dist.support.emplace_back(profiles[c], solution.primal[c]);
         mass += solution.primal[c];
      }
   }
   std::vector< double > expected(n, 0.);
   double value = 0.;
   for(auto& [s, x] : dist.support) {
      x /= mass;
      for(std::size_t p = 0; p < n; ++p) {
         expected[p] += x * game.raw_utility(p, s);
      }
      value += x * weighted_welfare(game, weights, s);
   }
   report.value = maxmin ? *std::min_element(expected.begin(), expected.end()) : value;
   double worst = 0.;
   const std::size_t first_incentive = maxmin ? n : 0;
   for(std::size_t r = 0; r < incentive; ++r) {
      double v = 0.;
      for(std::size_t c = 0; c < m; ++c) {
         v += problem.rows[first_incentive + r].coefficients[c] * solution.primal[c] / mass;
      }
      worst = std::min(worst, v);
   }
   report.max_violation = -worst;
   report.distribution = std::move(dist);
   return report;
}

}  // namespace optce

#endif  // OPTCE_COLGEN_HPP
