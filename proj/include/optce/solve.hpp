#ifndef OPTCE_SOLVE_HPP
#define OPTCE_SOLVE_HPP

#include <algorithm>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "optce/colgen.hpp"
#include "optce/errors.hpp"
#include "optce/game.hpp"
#include "optce/oracle.hpp"

namespace optce {

enum class Method { colgen, full };
enum class OracleChoice { automatic, bruteforce, tree, scg_symmetric };

inline std::string to_string(Method m) { return m == Method::colgen ? "colgen" : "full"; }

inline std::string to_string(OracleChoice o)
{
   switch(o) {
      case OracleChoice::automatic: return "auto";
      case OracleChoice::bruteforce: return "bruteforce";
      case OracleChoice::tree: return "tree";
      case OracleChoice::scg_symmetric: return "scg-symmetric";
   }
   return "?";
}

inline bool has_uniform_weights(const GameInstance& game, const ObjectiveSpec& objective)
{
   const auto w = objective.resolved(game.players());
   return std::all_of(w.begin(), w.end(), [&](double x) { return x == w[0]; });
}

/// Resolves `automatic` for a concrete run: tree DP for forest polymatrix games, the symmetric
/// solver for congestion-game CCE with identical weights, brute force otherwise.
inline OracleChoice resolve_oracle(
   const GameInstance& game,
   Concept kind,
   const ObjectiveSpec& objective,
   OracleChoice requested)
{
   if(requested != OracleChoice::automatic) {
      return requested;
   }
   if(const auto* pm = game.as< PolymatrixGame >(); pm != nullptr && pm->is_forest()) {
      return OracleChoice::tree;
   }
   if(game.as< SingletonCongestionGame >() != nullptr && kind == Concept::cce
      && has_uniform_weights(game, objective)) {
      return OracleChoice::scg_symmetric;
   }
   return OracleChoice::bruteforce;
}

inline SolveReport solve(
   const GameInstance& game,
   Concept kind,
   const ObjectiveSpec& objective,
   Method method,
   OracleChoice oracle,
   const SolverConfig& cfg = {})
{
   if(method == Method::full) {
      return solve_full_lp(game, objective, kind, cfg);
   }
   const auto choice = resolve_oracle(game, kind, objective, oracle);
   if(choice == OracleChoice::scg_symmetric) {
      if(kind != Concept::cce) {
         throw InvalidArgument("the symmetric congestion solver only handles cce");
      }
      return solve_scg_cce_symmetric(game, objective, cfg);
   }
   const PolymatrixGame* pm = nullptr;
   if(choice == OracleChoice::tree) {
      pm = game.as< PolymatrixGame >();
      if(pm == nullptr) {
         throw InvalidArgument("the tree oracle needs a polymatrix game");
      }
   }
   switch(kind) {
      case Concept::ce:
         return solve_optimal_ce(
            game,
            objective,
            pm ? tree_pricer(*pm) : bruteforce_pricer(game, cfg.profile_cap),
            cfg);
      case Concept::maxmin:
         return solve_maxmin_ce(
            game, pm ? tree_pricer(*pm) : bruteforce_pricer(game, cfg.profile_cap), cfg);
      case Concept::cce:
         return solve_optimal_cce(
            game,
            objective,
            pm ? tree_coarse_pricer(*pm) : bruteforce_coarse_pricer(game, cfg.profile_cap),
            cfg);
   }
   throw InvalidArgument("unknown concept");
}

/// Best (or worst) pure outcome of the linear objective: the pricing oracle at zero prices.
inline std::pair< PureProfile, double > optimal_outcome(
   const GameInstance& game,
   const ObjectiveSpec& objective,
   std::uint64_t cap = kDefaultProfileCap)
{
   auto weights = objective.resolved(game.players());
   const double sign = objective.direction == Direction::max ? 1. : -1.;
   for(auto& w : weights) {
      w *= sign;
   }
   const DeviationPlan zero(game);
   const double inf = std::numeric_limits< double >::infinity();
   OracleAnswer answer;
   if(const auto* pm = game.as< PolymatrixGame >(); pm != nullptr && pm->is_forest()) {
      answer = oracle_tree_polymatrix(*pm, weights, zero, -inf);
   } else if(const auto* scg = game.as< SingletonCongestionGame >();
             scg != nullptr && has_uniform_weights(game, objective)) {
      const std::vector< double > no_prices(scg->actions(), 0.);
      auto [counts, value] = scg_coarse_opt_scaled(*scg, weights[0], no_prices);
      for(std::size_t a = 0; a < counts.size(); ++a) {
         answer.witness.insert(
            answer.witness.end(), static_cast< std::size_t >(counts[a]), static_cast< int >(a));
      }
      answer.value = value;
   } else {
      answer = oracle_bruteforce(game, weights, zero, -inf, 0., cap);
   }
   return {std::move(answer.witness), sign * answer.value};
}

/// Best-outcome social welfare over worst-equilibrium social welfare.
inline double price_of_anarchy(
   const GameInstance& game,
   Concept kind,
   Method method = Method::colgen,
   OracleChoice oracle = OracleChoice::automatic,
   const SolverConfig& cfg = {})
{
   if(kind == Concept::maxmin) {
      throw InvalidArgument("price of anarchy is defined for ce or cce");
   }
   const double best = optimal_outcome(game, {}, cfg.profile_cap).second;
   const double worst =
      solve(game, kind, ObjectiveSpec{{}, Direction::min}, method, oracle, cfg).value;
   if(! (worst > 0.)) {
      throw UndefinedRatio(
         "worst equilibrium welfare is " + std::to_string(worst) + "; the ratio is undefined");
   }
   return best / worst;
}

}  // namespace optce

#endif  // OPTCE_SOLVE_HPP
