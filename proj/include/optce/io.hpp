#ifndef OPTCE_IO_HPP
#define OPTCE_IO_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "optce/colgen.hpp"
#include "optce/errors.hpp"
#include "optce/game.hpp"
#include "optce/solve.hpp"
#include "optce/verify.hpp"

namespace optce::io {

using json = nlohmann::json;

/// Rounds to 12 significant digits so serialized numbers are short and stable.
inline double round12(double x)
{
   if(! std::isfinite(x)) {
      return x;
   }
   char buffer[32];
   std::snprintf(buffer, sizeof buffer, "%.12g", x);
   const double r = std::strtod(buffer, nullptr);
   return r == 0. ? 0. : r;
}

inline json number_array(std::span< const double > values)
{
   json out = json::array();
   for(double v : values) {
      out.push_back(round12(v));
   }
   return out;
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------------------------
// Games
// ---------------------------------------------------------------------------------------------

namespace detail {

template < typename T >
T require(const json& j, const char* key)
{
   if(! j.contains(key)) {
      throw ParseError(std::string("missing field \"") + key + "\"");
   }
   try {
      return j.at(key).get< T >();
   } catch(const json::exception& e) {
      throw ParseError(std::string("field \"") + key + "\" has the wrong type: " + e.what());
   }
}

inline Eigen::MatrixXd matrix_from(const json& j, const char* key)
{
   const auto rows = require< std::vector< std::vector< double > > >(j, key);
   const auto r = static_cast< Eigen::Index >(rows.size());
   const auto c = rows.empty() ? Eigen::Index{0} : static_cast< Eigen::Index >(rows[0].size());
   Eigen::MatrixXd m(r, c);
   for(Eigen::Index i = 0; i < r; ++i) {
      if(static_cast< Eigen::Index >(rows[static_cast< std::size_t >(i)].size()) != c) {
         throw ParseError(std::string("ragged matrix in \"") + key + "\"");
      }
      for(Eigen::Index k = 0; k < c; ++k) {
         m(i, k) = rows[static_cast< std::size_t >(i)][static_cast< std::size_t >(k)];
      }
   }
   return m;
}

inline json matrix_to(const Eigen::MatrixXd& m)
{
   json out = json::array();
   for(Eigen::Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for(Eigen::Index k = 0; k < m.cols(); ++k) {
         row.push_back(round12(m(i, k)));
      }
      out.push_back(std::move(row));
   }
   return out;
}

}  // namespace detail

inline GameInstance game_from_json(const json& j)
{
   using detail::require;
   if(! j.is_object()) {
      throw ParseError("game file must hold a JSON object");
   }
   const auto type = require< std::string >(j, "type");
   const auto players = require< int >(j, "players");
   const auto actions = require< std::vector< int > >(j, "actions");
   if(players < 1 || actions.size() != static_cast< std::size_t >(players)) {
      throw ParseError("\"actions\" needs one entry per player");
   }
   try {
      if(type == "normal_form") {
         const auto rows = require< std::vector< std::vector< double > > >(j, "utilities");
         std::vector< double > flat;
         flat.reserve(rows.size() * actions.size());
         for(const auto& row : rows) {
            if(row.size() != actions.size()) {
               throw ParseError("each utility row needs one entry per player");
            }
            flat.insert(flat.end(), row.begin(), row.end());
         }
         return GameInstance(NormalFormGame(actions, std::move(flat)));
      }
      if(type == "polymatrix") {
         std::vector< PolymatrixEdge > edges;
         if(! j.contains("edges") || ! j.at("edges").is_array()) {
            throw ParseError("missing array field \"edges\"");
         }
         for(const auto& e : j.at("edges")) {
            edges.push_back(
               {require< int >(e, "p"),
                require< int >(e, "q"),
                detail::matrix_from(e, "A_pq"),
                detail::matrix_from(e, "A_qp")});
         }
         return GameInstance(PolymatrixGame(actions, std::move(edges)));
      }
      if(type == "singleton_congestion") {
         const auto f = require< std::vector< std::vector< double > > >(j, "f");
         for(int m : actions) {
            if(m != static_cast< int >(f.size())) {
               throw ParseError("every player of a congestion game shares the action set of \"f\"");
            }
         }
         return GameInstance(SingletonCongestionGame(static_cast< std::size_t >(players), f));
      }
   } catch(const InvalidArgument& e) {
      throw ParseError(e.what());
   }
   throw ParseError("unknown game type \"" + type + "\"");
}

inline json game_to_json(const GameInstance& game)
{
   json j;
   j["players"] = game.players();
   j["actions"] = game.action_counts();
   if(const auto* nf = game.as< NormalFormGame >()) {
      j["type"] = "normal_form";
      json rows = json::array();
      const auto n = game.players();
      for(std::size_t idx = 0; idx * n < nf->utilities().size(); ++idx) {
         rows.push_back(
            number_array(std::span< const double >(nf->utilities()).subspan(idx * n, n)));
      }
      j["utilities"] = std::move(rows);
   } else if(const auto* pm = game.as< PolymatrixGame >()) {
      j["type"] = "polymatrix";
      json edges = json::array();
      for(const auto& e : pm->edges()) {
         json edge;
         edge["p"] = e.p;
         edge["q"] = e.q;
         edge["A_pq"] = detail::matrix_to(e.pq);
         edge["A_qp"] = detail::matrix_to(e.qp);
         edges.push_back(std::move(edge));
      }
      j["edges"] = std::move(edges);
   } else if(const auto* scg = game.as< SingletonCongestionGame >()) {
      j["type"] = "singleton_congestion";
      json f = json::array();
      for(const auto& row : scg->payoffs()) {
         f.push_back(number_array(row));
      }
      j["f"] = std::move(f);
   }
   return j;
}

inline json read_json_file(const std::string& path)
{
   std::ifstream in(path);
   if(! in) {
      throw ParseError("cannot open " + path);
   }
   try {
      return json::parse(in);
   } catch(const json::parse_error& e) {
      throw ParseError(path + ": " + e.what());
   }
}

inline GameInstance load_game(const std::string& path) { return game_from_json(read_json_file(path)); }

// ---------------------------------------------------------------------------------------------
// Solutions and verification reports
// ---------------------------------------------------------------------------------------------

inline json report_to_json(const VerificationReport& r)
{
   json j;
   j["probability_residual"] = round12(r.probability_residual);
   j["min_ce_value"] = round12(r.min_ce_value);
   j["min_cce_value"] = round12(r.min_cce_value);
   j["expected_utilities"] = number_array(r.expected_utilities);
   j["objective"] = round12(r.objective);
   return j;
}

struct SolutionMeta {
   ObjectiveSpec objective;
   Method method = Method::colgen;
   OracleChoice oracle = OracleChoice::automatic;
};

inline json solution_to_json(const GameInstance& game, const SolveReport& report, const SolutionMeta& meta)
{
   json j;
   j["concept"] = to_string(report.kind);
   json objective;
   objective["direction"] = to_string(meta.objective.direction);
   objective["weights"] = number_array(meta.objective.resolved(game.players()));
   j["objective"] = std::move(objective);
   j["value"] = round12(report.value);
   json support = json::array();
   std::visit(
      [&](const auto& dist) {
         auto sorted = dist.support;
         std::sort(sorted.begin(), sorted.end());
         for(const auto& [key, x] : sorted) {
            json entry;
            if constexpr(std::is_same_v< std::decay_t< decltype(dist) >, CorrelatedDistribution >) {
               entry["profile"] = key;
            } else {
               entry["counts"] = key;
            }
            entry["p"] = round12(x);
            support.push_back(std::move(entry));
         }
      },
      report.distribution);
   j["support"] = std::move(support);
   json rep;
   rep["iterations"] = report.iterations;
   rep["oracle_calls"] = report.oracle_calls;
   rep["max_violation"] = round12(report.max_violation);
   rep["duality_gap"] = round12(report.duality_gap);
   rep["penalty"] = round12(report.penalty);
   rep["penalty_fallback"] = report.penalty_fallback;
   rep["support_size"] = report.support_size();
   rep["method"] = to_string(meta.method);
   rep["oracle"] = to_string(meta.oracle);
   j["report"] = std::move(rep);
   return j;
}

/// A solution file read back for verification.
struct LoadedSolution {
   Concept kind = Concept::ce;
   ObjectiveSpec objective;
   double value = 0.;
   std::variant< CorrelatedDistribution, ExchangeableDistribution > distribution;
};

inline Concept parse_concept(const std::string& s)
{
   if(s == "ce") {
      return Concept::ce;
   }
   if(s == "cce") {
      return Concept::cce;
   }
   if(s == "maxmin") {
      return Concept::maxmin;
   }
   throw ParseError("unknown concept \"" + s + "\"");
}

inline LoadedSolution solution_from_json(const json& j)
{
   using detail::require;
   LoadedSolution out;
   out.kind = parse_concept(require< std::string >(j, "concept"));
   out.value = require< double >(j, "value");
   if(j.contains("objective")) {
      const auto& obj = j.at("objective");
      out.objective.weights = require< std::vector< double > >(obj, "weights");
      const auto direction = require< std::string >(obj, "direction");
      if(direction != "max" && direction != "min") {
         throw ParseError("unknown direction \"" + direction + "\"");
      }
      out.objective.direction = direction == "min" ? Direction::min : Direction::max;
   }
   if(! j.contains("support") || ! j.at("support").is_array()) {
      throw ParseError("missing array field \"support\"");
   }
   const auto& support = j.at("support");
   const bool counts = ! support.empty() && support.front().contains("counts");
   if(counts) {
      ExchangeableDistribution dist;
      for(const auto& e : support) {
         dist.support.emplace_back(require< std::vector< int > >(e, "counts"), require< double >(e, "p"));
      }
      out.distribution = std::move(dist);
   } else {
      CorrelatedDistribution dist;
      for(const auto& e : support) {
         dist.support.emplace_back(require< std::vector< int > >(e, "profile"), require< double >(e, "p"));
      }
      out.distribution = std::move(dist);
   }
   return out;
}

}  // namespace optce::io

#endif  // OPTCE_IO_HPP
