// Command-line front end: solve, verify, poa, gen.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "optce/optce.hpp"

namespace {

using optce::io::json;

enum ExitCode {
   kOk = 0,
   kFailed = 1,
   kParse = 2,
   kNonconvergence = 3,
   kResourceLimit = 4,
   kUndefinedRatio = 5,
};

struct RunConfig {
   std::string kind = "ce";
   std::string direction = "max";
   std::vector< double > weights;
   std::string method = "colgen";
   std::string oracle = "auto";
   double tol = optce::kDefaultPricingSlack;
   double master_tol = 1e-8;
   std::size_t max_iters = 0;
   int penalty_doublings = 6;
   std::uint64_t profile_cap = optce::kDefaultProfileCap;
   std::size_t lp_nonzero_cap = 20'000;
   std::string out;

   [[nodiscard]] optce::SolverConfig solver() const
   {
      optce::SolverConfig cfg;
      cfg.pricing_slack = tol;
      cfg.master_tolerance = master_tol;
      cfg.max_iterations = max_iters;
      cfg.penalty_doublings = penalty_doublings;
      cfg.profile_cap = profile_cap;
      cfg.lp_nonzero_cap = lp_nonzero_cap;
      return cfg;
   }
};

const std::map< std::string, optce::Method > kMethods{
   {"colgen", optce::Method::colgen},
   {"full", optce::Method::full}};
const std::map< std::string, optce::OracleChoice > kOracles{
   {"auto", optce::OracleChoice::automatic},
   {"bruteforce", optce::OracleChoice::bruteforce},
   {"tree", optce::OracleChoice::tree},
   {"scg-symmetric", optce::OracleChoice::scg_symmetric}};

void emit(const std::string& text, const std::string& out)
{
   if(out.empty()) {
      std::cout << text;
      return;
   }
   std::ofstream file(out, std::ios::binary);
   if(! file) {
      throw optce::ParseError("cannot write " + out);
   }
   file << text;
}

void add_solver_flags(CLI::App* cmd, RunConfig& rc)
{
   cmd->add_option("--tol", rc.tol, "pricing slack and verification tolerance")
      ->check(CLI::PositiveNumber);
   cmd->add_option("--master-tol", rc.master_tol, "master LP feasibility tolerance")
      ->check(CLI::PositiveNumber);
   cmd->add_option("--max-iters", rc.max_iters, "column generation iteration cap (0: 10(N+1))");
   cmd->add_option("--penalty-doublings", rc.penalty_doublings, "big-M doubling cap")
      ->check(CLI::NonNegativeNumber);
   cmd->add_option("--profile-cap", rc.profile_cap, "profile enumeration cap")
      ->check(CLI::PositiveNumber);
   cmd->add_option("--lp-cap", rc.lp_nonzero_cap, "LP nonzero cap")->check(CLI::PositiveNumber);
   cmd->add_option("--method", rc.method, "colgen or full")
      ->check(CLI::IsMember({"colgen", "full"}));
   cmd->add_option("--oracle", rc.oracle, "auto, bruteforce, tree or scg-symmetric")
      ->check(CLI::IsMember({"auto", "bruteforce", "tree", "scg-symmetric"}));
}

/// Verification of a distribution against its concept, optionally expanding count classes.
std::pair< optce::VerificationReport, bool > verify_solution(
   const optce::GameInstance& game,
   optce::Concept kind,
   const optce::ObjectiveSpec& objective,
   const std::variant< optce::CorrelatedDistribution, optce::ExchangeableDistribution >& dist,
   double tol)
{
   const auto explicit_dist = std::holds_alternative< optce::CorrelatedDistribution >(dist)
                                 ? std::get< optce::CorrelatedDistribution >(dist)
                                 : optce::expand_exchangeable(
                                    game, std::get< optce::ExchangeableDistribution >(dist));
   auto report = optce::check_ce(game, explicit_dist, objective.resolved(game.players()));
   const double min_value =
      kind == optce::Concept::cce ? report.min_cce_value : report.min_ce_value;
   const bool ok = report.probability_residual <= 1e-9 && min_value >= -tol;
   return {std::move(report), ok};
}

int cmd_solve(const std::string& game_file, const RunConfig& rc)
{
   const auto game = optce::io::load_game(game_file);
   const auto kind = optce::io::parse_concept(rc.kind);
   optce::ObjectiveSpec objective{
      rc.weights, rc.direction == "min" ? optce::Direction::min : optce::Direction::max};
   const auto method = kMethods.at(rc.method);
   const auto oracle = optce::resolve_oracle(game, kind, objective, kOracles.at(rc.oracle));
   const auto report = optce::solve(game, kind, objective, method, oracle, rc.solver());
   auto j = optce::io::solution_to_json(game, report, {objective, method, oracle});
   try {
      const auto [verification, ok] =
         verify_solution(game, kind, objective, report.distribution, rc.tol);
      j["verification"] = optce::io::report_to_json(verification);
      j["verification"]["passed"] = ok;
   } catch(const optce::ResourceLimit&) {
      // expansion too large; the count-space certificate in "report" stands
   }
   emit(optce::io::dump(j), rc.out);
   return kOk;
}

int cmd_verify(const std::string& game_file, const std::string& solution_file, double tol, const std::string& out)
{
   const auto game = optce::io::load_game(game_file);
   const auto solution = optce::io::solution_from_json(optce::io::read_json_file(solution_file));
   const auto [report, ok] =
      verify_solution(game, solution.kind, solution.objective, solution.distribution, tol);
   double claimed = solution.value;
   double recomputed = report.objective;
   if(solution.kind == optce::Concept::maxmin) {
      recomputed = *std::min_element(report.expected_utilities.begin(), report.expected_utilities.end());
   }
   const bool value_ok = std::abs(claimed - recomputed) <= 1e-6 * (1. + std::abs(claimed));
   auto j = optce::io::report_to_json(report);
   j["concept"] = optce::to_string(solution.kind);
   j["claimed_value"] = optce::io::round12(claimed);
   j["passed"] = ok && value_ok;
   emit(optce::io::dump(j), out);
   return ok && value_ok ? kOk : kFailed;
}

int cmd_poa(const std::string& game_file, const RunConfig& rc)
{
   const auto game = optce::io::load_game(game_file);
   const auto kind = optce::io::parse_concept(rc.kind);
   const double ratio = optce::price_of_anarchy(
      game, kind, kMethods.at(rc.method), kOracles.at(rc.oracle), rc.solver());
   json j;
   j["concept"] = optce::to_string(kind);
   j["best_outcome_welfare"] = optce::io::round12(optce::optimal_outcome(game, {}, rc.profile_cap).second);
   j["price_of_anarchy"] = optce::io::round12(ratio);
   emit(optce::io::dump(j), rc.out);
   return kOk;
}

int cmd_gen(const std::string& kind, std::uint64_t seed, int players, int actions, const std::string& out)
{
   const std::vector< int > counts(static_cast< std::size_t >(players), actions);
   std::optional< optce::GameInstance > game;
   if(kind == "normal-form") {
      game = optce::gen::normal_form(counts, seed);
   } else if(kind == "tree-polymatrix") {
      game = optce::gen::tree_polymatrix(counts, seed);
   } else {
      game = optce::gen::singleton_congestion(
         static_cast< std::size_t >(players), static_cast< std::size_t >(actions), seed);
   }
   emit(optce::io::dump(optce::io::game_to_json(*game)), out);
   return kOk;
}

}  // namespace

int main(int argc, char** argv)
{
   CLI::App app{"optimal correlated and coarse correlated equilibria by column generation"};
   app.require_subcommand(1);

   RunConfig rc;
   std::string game_file;
   std::string solution_file;

   auto* solve = app.add_subcommand("solve", "compute an optimal ce, cce or max-min ce");
   solve->add_option("game", game_file, "game JSON file")->required();
   solve->add_option("--concept", rc.kind, "ce, cce or maxmin")
      ->check(CLI::IsMember({"ce", "cce", "maxmin"}));
   solve->add_option("--direction", rc.direction, "max or min")
      ->check(CLI::IsMember({"max", "min"}));
   solve->add_option("--weights", rc.weights, "per-player objective weights")->delimiter(',');
   solve->add_option("--out", rc.out, "write the solution here instead of stdout");
   std::uint64_t unused_seed = 0;
   solve->add_option("--seed", unused_seed, "accepted for symmetry with gen; solves are deterministic");
   add_solver_flags(solve, rc);

   auto* verify = app.add_subcommand("verify", "check a solution file against its game");
   verify->add_option("game", game_file, "game JSON file")->required();
   verify->add_option("solution", solution_file, "solution JSON file")->required();
   verify->add_option("--tol", rc.tol, "constraint tolerance")->check(CLI::PositiveNumber);
   verify->add_option("--out", rc.out, "write the report here instead of stdout");

   auto* poa = app.add_subcommand("poa", "price of anarchy against the worst equilibrium");
   poa->add_option("game", game_file, "game JSON file")->required();
   poa->add_option("--concept", rc.kind, "ce or cce")->check(CLI::IsMember({"ce", "cce"}));
   poa->add_option("--out", rc.out, "write the result here instead of stdout");
   add_solver_flags(poa, rc);

   auto* gen = app.add_subcommand("gen", "emit a seeded random game");
   std::string kind = "normal-form";
   std::uint64_t seed = 0;
   int players = 3;
   int actions = 2;
   gen->add_option("--kind", kind, "normal-form, tree-polymatrix or singleton-congestion")
      ->check(CLI::IsMember({"normal-form", "tree-polymatrix", "singleton-congestion"}));
   gen->add_option("--seed", seed, "random seed");
   gen->add_option("--players", players, "player count")->check(CLI::PositiveNumber);
   gen->add_option("--actions", actions, "actions per player")->check(CLI::PositiveNumber);
   gen->add_option("--out", rc.out, "write the game here instead of stdout");

   try {
      app.parse(argc, argv);
   } catch(const CLI::ParseError& e) {
      const int code = app.exit(e);
      return code == 0 ? kOk : kParse;
   }

   try {
      if(*solve) {
         return cmd_solve(game_file, rc);
      }
      if(*verify) {
         return cmd_verify(game_file, solution_file, rc.tol, rc.out);
      }
      if(*poa) {
         return cmd_poa(game_file, rc);
      }
      return cmd_gen(kind, seed, players, actions, rc.out);
   } catch(const optce::ParseError& e) {
      std::cerr << "parse error: " << e.what() << "\n";
      return kParse;
   } catch(const optce::InvalidArgument& e) {
      std::cerr << "invalid argument: " << e.what() << "\n";
      return kParse;
   } catch(const optce::Nonconvergence& e) {
      std::cerr << "nonconvergence: " << e.what() << "\n";
      return kNonconvergence;
   } catch(const optce::ResourceLimit& e) {
      std::cerr << "resource limit: " << e.what() << "\n";
      return kResourceLimit;
   } catch(const optce::UndefinedRatio& e) {
      std::cerr << "undefined ratio: " << e.what() << "\n";
      return kUndefinedRatio;
   } catch(const optce::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kFailed;
   }
}
