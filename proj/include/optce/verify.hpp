#ifndef OPTCE_VERIFY_HPP
#define OPTCE_VERIFY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "optce/colgen.hpp"
#include "optce/errors.hpp"
#include "optce/game.hpp"

namespace optce {

inline constexpr std::uint64_t kDefaultExpansionCap = 100'000;

/// Constraint values recomputed from the game representation. Never built from solver state.
struct VerificationReport {
   /// |sum of probabilities - 1|.
   double probability_residual = 0.;
   /// min over (p, i, j), i != j, of sum_{s: s_p = i} x_s (u^p_s - u^p_{j s_-p}), taken over the
   /// rows whose recommendation i has positive probability (the others are identically 0);
   /// 0 if there are none.
   double min_ce_value = 0.;
   /// min over (p, j) of sum_s x_s (u^p_s - u^p_{j s_-p}).
   double min_cce_value = 0.;
   /// Indexed by GameInstance::incentive_index; the i == j entries stay 0.
   std::vector< double > ce_values;
   /// Indexed by GameInstance::coarse_index.
   std::vector< double > cce_values;
   std::vector< double > expected_utilities;
   /// sum_p weights_p E[u^p] with the supplied weights (all-ones by default).
   double objective = 0.;
};

inline void validate_distribution(const GameInstance& game, const CorrelatedDistribution& dist)
{
   std::vector< PureProfile > seen;
   seen.reserve(dist.support.size());
   for(const auto& [s, x] : dist.support) {
      game.validate(s);
      if(! std::isfinite(x) || x < 0.) {
         throw InvalidArgument("distribution has a negative or non-finite probability");
      }
      seen.push_back(s);
   }
   std::sort(seen.begin(), seen.end());
   if(std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
      throw InvalidArgument("distribution lists a profile twice");
   }
}

inline std::vector< double > expected_utilities(
   const GameInstance& game,
   const CorrelatedDistribution& dist)
{
   validate_distribution(game, dist);
   std::vector< double > out(game.players(), 0.);
   for(const auto& [s, x] : dist.support) {
      for(std::size_t p = 0; p < game.players(); ++p) {
         out[p] += x * game.raw_utility(p, s);
      }
   }
   return out;
}

namespace detail {

inline VerificationReport verify_distribution(
   const GameInstance& game,
   const CorrelatedDistribution& dist,
   std::span< const double > weights)
{
   validate_distribution(game, dist);
   const std::size_t n = game.players();
   VerificationReport report;
   report.ce_values.assign(game.incentive_rows(), 0.);
   report.cce_values.assign(game.coarse_rows(), 0.);
   report.expected_utilities.assign(n, 0.);
   double mass = 0.;
   std::vector< std::vector< bool > > recommended(n);
   for(std::size_t p = 0; p < n; ++p) {
      recommended[p].assign(static_cast< std::size_t >(game.actions(p)), false);
   }
   PureProfile dev;
   for(const auto& [s, x] : dist.support) {
      mass += x;
      dev = s;
      for(std::size_t p = 0; p < n; ++p) {
         if(x > 0.) {
            recommended[p][static_cast< std::size_t >(s[p])] = true;
         }
         const double u = game.raw_utility(p, s);
         report.expected_utilities[p] += x * u;
         for(int j = 0; j < game.actions(p); ++j) {
            if(j == s[p]) {
               continue;
            }
            dev[p] = j;
            const double gain = x * (u - game.raw_utility(p, dev));
            report.ce_values[game.incentive_index(p, s[p], j)] += gain;
            report.cce_values[game.coarse_index(p, j)] += gain;
         }
         dev[p] = s[p];
      }
   }
   report.probability_residual = std::abs(mass - 1.);
   bool any_row = false;
   double min_ce = 0.;
   for(std::size_t p = 0; p < n; ++p) {
      for(int i = 0; i < game.actions(p); ++i) {
         if(! recommended[p][static_cast< std::size_t >(i)]) {
            continue;
         }
         for(int j = 0; j < game.actions(p); ++j) {
            if(i == j) {
               continue;
            }
            const double v = report.ce_values[game.incentive_index(p, i, j)];
            min_ce = any_row ? std::min(min_ce, v) : v;
            any_row = true;
         }
      }
   }
   report.min_ce_value = min_ce;
   report.min_cce_value = *std::min_element(report.cce_values.begin(), report.cce_values.end());
   for(std::size_t p = 0; p < n; ++p) {
      report.objective += weights[p] * report.expected_utilities[p];
   }
   return report;
}

}  // namespace detail

/// Correlated-equilibrium residuals of `dist`. The report also carries the coarse values.
inline VerificationReport check_ce(
   const GameInstance& game,
   const CorrelatedDistribution& dist,
   const PlayerWeights& weights = {})
{
   const auto w = weights.empty() ? uniform_weights(game.players()) : weights;
   if(w.size() != game.players()) {
      throw InvalidArgument("weight vector length does not match the player count");
   }
   return detail::verify_distribution(game, dist, w);
}

/// Coarse correlated-equilibrium residuals of `dist`; same report as check_ce.
inline VerificationReport check_cce(
   const GameInstance& game,
   const CorrelatedDistribution& dist,
   const PlayerWeights& weights = {})
{
   return check_ce(game, dist, weights);
}

/// Spreads each count class's probability uniformly over the n!/prod c(a)! profiles inducing it.
inline CorrelatedDistribution expand_exchangeable(
   const GameInstance& game,
   const ExchangeableDistribution& xc,
   std::uint64_t cap = kDefaultExpansionCap)
{
   const auto* scg = game.as< SingletonCongestionGame >();
   const std::size_t n = game.players();
   const int k = game.actions(0);
   if(scg == nullptr) {
      for(std::size_t p = 1; p < n; ++p) {
         if(game.actions(p) != k) {
            throw InvalidArgument("exchangeable expansion needs a common action set");
         }
      }
   }
   double total = 0.;
   for(const auto& [c, x] : xc.support) {
      if(c.size() != static_cast< std::size_t >(k)) {
         throw InvalidArgument("count vector length does not match the action count");
      }
      int sum = 0;
      for(int v : c) {
         if(v < 0) {
            throw InvalidArgument("negative entry in count vector");
         }
         sum += v;
      }
      if(sum != static_cast< int >(n)) {
         throw InvalidArgument("count vector does not sum to the player count");
      }
      if(! std::isfinite(x) || x < 0.) {
         throw InvalidArgument("exchangeable distribution has a negative probability");
      }
      total += profiles_with_counts(c);
   }
   if(total > static_cast< double >(cap)) {
      throw ResourceLimit("exchangeable expansion exceeds the profile cap");
   }

   CorrelatedDistribution out;
   for(const auto& [c, x] : xc.support) {
      PureProfile s;
      s.reserve(n);
      for(int a = 0; a < k; ++a) {
         s.insert(s.end(), static_cast< std::size_t >(c[static_cast< std::size_t >(a)]), a);
      }
      const double share = x / profiles_with_counts(c);
      do {
         out.support.emplace_back(s, share);
      } while(std::next_permutation(s.begin(), s.end()));
   }
   std::sort(out.support.begin(), out.support.end());
   return out;
}

}  // namespace optce

#endif  // OPTCE_VERIFY_HPP
