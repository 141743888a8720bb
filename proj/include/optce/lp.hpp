#ifndef OPTCE_LP_HPP
#define OPTCE_LP_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "optce/errors.hpp"

namespace optce::lp {

inline constexpr double kInf = std::numeric_limits< double >::infinity();

enum class Sense { maximize, minimize };
enum class Relation { less_equal, greater_equal, equal };
enum class Status { optimal, infeasible, unbounded };

struct Row {
   std::vector< double > coefficients;
   Relation relation = Relation::less_equal;
   double rhs = 0.;
};

/// Dense LP: optimize objective^T x subject to rows and lower <= x <= upper.
struct Problem {
   Sense sense = Sense::maximize;
   std::vector< double > objective;
   std::vector< Row > rows;
   /// Empty means every lower bound is 0; -kInf marks a free direction.
   std::vector< double > lower;
   /// Empty means no upper bounds.
   std::vector< double > upper;

   [[nodiscard]] std::size_t variables() const { return objective.size(); }

   void add_row(std::vector< double > coefficients, Relation relation, double rhs)
   {
      rows.push_back({std::move(coefficients), relation, rhs});
   }
};

struct Solution {
   Status status = Status::infeasible;
   std::vector< double > primal;
   /// Sensitivity of the optimal objective to each row's right-hand side. For a maximization,
   /// <= rows have nonnegative and >= rows nonpositive duals.
   std::vector< double > duals;
   double objective = 0.;
   /// Per original variable: part of the final basis.
   std::vector< bool > basic;
   std::size_t pivots = 0;
};

struct Options {
   double pivot_tolerance = 1e-10;
   double feasibility_tolerance = 1e-8;
   double optimality_tolerance = 1e-9;
   std::size_t nonzero_cap = 20'000;
   std::size_t max_pivots = 2'000'000;
};

namespace detail {

/// How an original variable maps onto nonnegative internal columns.
struct VariableMap {
   double shift = 0.;
   double sign = 1.;
   std::size_t column = 0;
   /// Second column (negative part) for free variables.
   std::ptrdiff_t negative_column = -1;
};

class Tableau {
  public:
   Tableau(std::size_t rows, std::size_t cols)
       : m_rows(rows), m_cols(cols), m_data((rows + 1) * (cols + 1), 0.)
   {
   }

   double& at(std::size_t r, std::size_t c) { return m_data[r * (m_cols + 1) + c]; }
   [[nodiscard]] double at(std::size_t r, std::size_t c) const
   {
      return m_data[r * (m_cols + 1) + c];
   }
   double& rhs(std::size_t r) { return at(r, m_cols); }
   /// The reduced-cost row lives at index m_rows.
   double& cost(std::size_t c) { return at(m_rows, c); }

   void pivot(std::size_t pr, std::size_t pc)
   {
      const double inv = 1. / at(pr, pc);
      for(std::size_t c = 0; c <= m_cols; ++c) {
         at(pr, c) *= inv;
      }
      at(pr, pc) = 1.;
      for(std::size_t r = 0; r <= m_rows; ++r) {
         if(r == pr) {
            continue;
         }
         const double factor = at(r, pc);
         if(factor == 0.) {
            continue;
         }
         for(std::size_t c = 0; c <= m_cols; ++c) {
            at(r, c) -= factor * at(pr, c);
         }
         at(r, pc) = 0.;
      }
   }

  private:
   std::size_t m_rows;
   std::size_t m_cols;
   std::vector< double > m_data;
};

}  // namespace detail

/// Two-phase tableau simplex with Bland's rule. The final basis is re-solved from the original
/// data so primal and dual values carry no accumulated pivoting error.
inline Solution solve(const Problem& problem, const Options& options = {})
{
   using detail::VariableMap;
   const std::size_t n = problem.variables();
   std::size_t nonzeros = 0;
   for(const auto& row : problem.rows) {
      if(row.coefficients.size() != n) {
         throw InvalidArgument("LP row length does not match the variable count");
      }
      for(double a : row.coefficients) {
         if(! std::isfinite(a)) {
            throw InvalidArgument("non-finite LP coefficient");
         }
         nonzeros += a != 0. ? 1 : 0;
      }
      if(! std::isfinite(row.rhs)) {
         throw InvalidArgument("non-finite LP right-hand side");
      }
   }
   if(nonzeros > options.nonzero_cap) {
      throw ResourceLimit(
         "LP has " + std::to_string(nonzeros) + " nonzeros, cap is "
         + std::to_string(options.nonzero_cap));
   }
   if((! problem.lower.empty() && problem.lower.size() != n)
      || (! problem.upper.empty() && problem.upper.size() != n)) {
      throw InvalidArgument("LP bound vectors have the wrong length");
   }

   // --- map variables onto nonnegative columns --------------------------------------------
   std::vector< VariableMap > maps(n);
   std::vector< std::pair< std::size_t, double > > bound_rows;  // (column, width)
   std::size_t structural = 0;
   for(std::size_t j = 0; j < n; ++j) {
      const double lo = problem.lower.empty() ? 0. : problem.lower[j];
      const double up = problem.upper.empty() ? kInf : problem.upper[j];
      if(lo > up) {
         throw InvalidArgument("LP variable has lower bound above upper bound");
      }
      auto& map = maps[j];
      map.column = structural++;
      if(std::isfinite(lo)) {
         map.shift = lo;
         if(std::isfinite(up)) {
            bound_rows.emplace_back(map.column, up - lo);
         }
      } else if(std::isfinite(up)) {
         map.shift = up;
         map.sign = -1.;
      } else {
         map.negative_column = static_cast< std::ptrdiff_t >(structural++);
      }
   }

   const std::size_t rows = problem.rows.size() + bound_rows.size();
   std::size_t slacks = 0;
   for(const auto& row : problem.rows) {
      slacks += row.relation == Relation::equal ? 0 : 1;
   }
   slacks += bound_rows.size();
   const std::size_t art_begin = structural + slacks;
   const std::size_t cols = art_begin + rows;

   // standardized A (rows x cols) and b, every row an equality with b >= 0
   Eigen::MatrixXd a_std = Eigen::MatrixXd::Zero(static_cast< Eigen::Index >(rows), static_cast< Eigen::Index >(cols));
   Eigen::VectorXd b_std(static_cast< Eigen::Index >(rows));
   std::vector< double > flip(rows, 1.);
   {
      std::size_t slack = structural;
      for(std::size_t i = 0; i < problem.rows.size(); ++i) {
         const auto& row = problem.rows[i];
         const auto r = static_cast< Eigen::Index >(i);
         double rhs = row.rhs;
         for(std::size_t j = 0; j < n; ++j) {
            const double a = row.coefficients[j];
            if(a == 0.) {
               continue;
            }
            rhs -= a * maps[j].shift;
            a_std(r, static_cast< Eigen::Index >(maps[j].column)) += a * maps[j].sign;
            if(maps[j].negative_column >= 0) {
               a_std(r, maps[j].negative_column) -= a;
            }
         }
         if(row.relation == Relation::less_equal) {
            a_std(r, static_cast< Eigen::Index >(slack++)) = 1.;
         } else if(row.relation == Relation::greater_equal) {
            a_std(r, static_cast< Eigen::Index >(slack++)) = -1.;
         }
         b_std(r) = rhs;
      }
      for(std::size_t k = 0; k < bound_rows.size(); ++k) {
         const auto r = static_cast< Eigen::Index >(problem.rows.size() + k);
         a_std(r, static_cast< Eigen::Index >(bound_rows[k].first)) = 1.;
         a_std(r, static_cast< Eigen::Index >(slack++)) = 1.;
         b_std(r) = bound_rows[k].second;
      }
      for(std::size_t i = 0; i < rows; ++i) {
         const auto r = static_cast< Eigen::Index >(i);
         if(b_std(r) < 0.) {
            flip[i] = -1.;
            a_std.row(r) *= -1.;
            b_std(r) *= -1.;
         }
         a_std(r, static_cast< Eigen::Index >(art_begin + i)) = 1.;
      }
   }

   // internal costs (always maximize)
   const double sense_sign = problem.sense == Sense::maximize ? 1. : -1.;
   std::vector< double > cost(cols, 0.);
   for(std::size_t j = 0; j < n; ++j) {
      const double c = sense_sign * problem.objective[j];
      cost[maps[j].column] += c * maps[j].sign;
      if(maps[j].negative_column >= 0) {
         cost[static_cast< std::size_t >(maps[j].negative_column)] -= c;
      }
   }

   detail::Tableau tab(rows, cols);
   for(std::size_t i = 0; i < rows; ++i) {
      for(std::size_t c = 0; c < cols; ++c) {
         tab.at(i, c) = a_std(static_cast< Eigen::Index >(i), static_cast< Eigen::Index >(c));
      }
      tab.rhs(i) = b_std(static_cast< Eigen::Index >(i));
   }
   std::vector< std::size_t > basis(rows);
   for(std::size_t i = 0; i < rows; ++i) {
      basis[i] = art_begin + i;
   }

   Solution solution;
   auto load_costs = [&](const std::vector< double >& c) {
      for(std::size_t col = 0; col <= cols; ++col) {
         double reduced = col < cols ? c[col] : 0.;
         for(std::size_t i = 0; i < rows; ++i) {
            reduced -= c[basis[i]] * tab.at(i, col);
         }
         tab.cost(col) = reduced;
      }
   };
   // rebuild B^-1 [A | b] for the current basis from the original data
   auto refactor = [&](const std::vector< double >& c) {
      const auto r = static_cast< Eigen::Index >(rows);
      if(r == 0) {
         load_costs(c);
         return;
      }
      Eigen::MatrixXd basis_matrix(r, r);
      for(std::size_t i = 0; i < rows; ++i) {
         basis_matrix.col(static_cast< Eigen::Index >(i)) =
            a_std.col(static_cast< Eigen::Index >(basis[i]));
      }
      const Eigen::PartialPivLU< Eigen::MatrixXd > lu(basis_matrix);
      const Eigen::MatrixXd body = lu.solve(a_std);
      const Eigen::VectorXd values = lu.solve(b_std);
      for(std::size_t i = 0; i < rows; ++i) {
         for(std::size_t col = 0; col < cols; ++col) {
            tab.at(i, col) = body(static_cast< Eigen::Index >(i), static_cast< Eigen::Index >(col));
         }
         tab.at(i, basis[i]) = 1.;
         tab.rhs(i) = values(static_cast< Eigen::Index >(i));
      }
      load_costs(c);
   };
   constexpr std::size_t kRefactorEvery = 50;
   // returns false when unbounded
   auto run = [&](const std::vector< double >& c, std::size_t allowed_cols) {
      std::size_t since_refactor = 0;
      std::size_t degenerate_run = 0;
      const std::size_t bland_after = 50 + rows;
      bool confirmed = false;
      while(true) {
         std::size_t entering = cols;
         for(std::size_t col = 0; col < allowed_cols; ++col) {
            if(tab.cost(col) > options.optimality_tolerance) {
               entering = col;
               break;
            }
         }
         if(entering == cols) {
            // only stop on a basis whose optimality survives a fresh factorization
            if(confirmed || since_refactor == 0) {
               return true;
            }
            refactor(c);
            since_refactor = 0;
            confirmed = true;
            continue;
         }
         confirmed = false;
         // Harris ratio test: the bound allows a feasibility-tolerance overshoot, and among the
         // rows within it the largest pivot wins. A long degenerate stretch switches to Bland's
         // smallest-index choice among exact ties until progress resumes.
         double bound = kInf;
         for(std::size_t i = 0; i < rows; ++i) {
            const double a = tab.at(i, entering);
            if(a > options.pivot_tolerance) {
               bound = std::min(bound, (std::max(tab.rhs(i), 0.) + options.feasibility_tolerance) / a);
            }
         }
         if(bound == kInf) {
            return false;
         }
         const bool bland = degenerate_run > bland_after;
         std::size_t leaving = rows;
         double min_ratio = kInf;
         for(std::size_t i = 0; i < rows; ++i) {
            const double a = tab.at(i, entering);
            if(a > options.pivot_tolerance) {
               min_ratio = std::min(min_ratio, std::max(tab.rhs(i), 0.) / a);
            }
         }
         auto tied = [&](std::size_t i) {
            const double a = tab.at(i, entering);
            return a > options.pivot_tolerance
                   && std::max(tab.rhs(i), 0.) / a <= min_ratio + 1e-12 * (1. + min_ratio);
         };
         double largest_tied = 0.;
         for(std::size_t i = 0; i < rows; ++i) {
            if(tied(i)) {
               largest_tied = std::max(largest_tied, tab.at(i, entering));
            }
         }
         for(std::size_t i = 0; i < rows; ++i) {
            const double a = tab.at(i, entering);
            if(a <= options.pivot_tolerance) {
               continue;
            }
            if(bland) {
               // smallest basic index among ties, skipping pivots far below the best one
               if(tied(i) && a >= 1e-3 * largest_tied
                  && (leaving == rows || basis[i] < basis[leaving])) {
                  leaving = i;
               }
            } else if(std::max(tab.rhs(i), 0.) / a <= bound
                      && (leaving == rows || a > tab.at(leaving, entering))) {
               leaving = i;
            }
         }
         const double step = std::max(tab.rhs(leaving), 0.) / tab.at(leaving, entering);
         degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;
         tab.pivot(leaving, entering);
         basis[leaving] = entering;
         if(++solution.pivots > options.max_pivots) {
            throw Nonconvergence("simplex pivot limit exceeded");
         }
         if(++since_refactor >= kRefactorEvery) {
            refactor(c);
            since_refactor = 0;
         }
      }
   };

   // --- phase 1 ----------------------------------------------------------------------------
   std::vector< double > phase1(cols, 0.);
   for(std::size_t i = 0; i < rows; ++i) {
      phase1[art_begin + i] = -1.;
   }
   load_costs(phase1);
   run(phase1, cols);
   double infeasibility = 0.;
   for(std::size_t i = 0; i < rows; ++i) {
      if(basis[i] >= art_begin) {
         infeasibility += std::max(tab.rhs(i), 0.);
      }
   }
   const double b_scale = rows == 0 ? 0. : b_std.cwiseAbs().maxCoeff();
   if(infeasibility > options.feasibility_tolerance * (1. + b_scale)) {
      solution.status = Status::infeasible;
      return solution;
   }
   // drive remaining artificials out on the largest available pivot
   for(std::size_t i = 0; i < rows; ++i) {
      if(basis[i] < art_begin) {
         continue;
      }
      std::size_t best = cols;
      double best_abs = 1e-7;
      for(std::size_t c = 0; c < art_begin; ++c) {
         if(std::abs(tab.at(i, c)) > best_abs) {
            best_abs = std::abs(tab.at(i, c));
            best = c;
         }
      }
      if(best < cols) {
         tab.pivot(i, best);
         basis[i] = best;
         ++solution.pivots;
      }
   }

   // --- phase 2 ----------------------------------------------------------------------------
   refactor(cost);
   if(! run(cost, art_begin)) {
      solution.status = Status::unbounded;
      return solution;
   }

   // --- re-solve the final basis from the original data ------------------------------------
   const auto r = static_cast< Eigen::Index >(rows);
   Eigen::MatrixXd basis_matrix(r, r);
   Eigen::VectorXd basis_cost(r);
   for(std::size_t i = 0; i < rows; ++i) {
      basis_matrix.col(static_cast< Eigen::Index >(i)) = a_std.col(static_cast< Eigen::Index >(basis[i]));
      basis_cost(static_cast< Eigen::Index >(i)) = cost[basis[i]];
   }
   std::vector< double > internal(cols, 0.);
   Eigen::VectorXd prices = Eigen::VectorXd::Zero(r);
   if(rows > 0) {
      const Eigen::PartialPivLU< Eigen::MatrixXd > lu(basis_matrix);
      const Eigen::VectorXd x_basis = lu.solve(b_std);
      prices = lu.transpose().solve(basis_cost);
      const bool refined_ok = x_basis.allFinite() && prices.allFinite()
                              && (basis_matrix * x_basis - b_std).cwiseAbs().maxCoeff()
                                    <= options.feasibility_tolerance * (1. + b_scale);
      for(std::size_t i = 0; i < rows; ++i) {
         const double tableau_value = tab.rhs(i);
         double v = refined_ok ? x_basis(static_cast< Eigen::Index >(i)) : tableau_value;
         internal[basis[i]] = std::max(v, 0.);
      }
      if(! refined_ok) {
         // fall back to tableau prices: pi = c_B B^-1 = -(reduced cost of artificial columns)
         for(std::size_t i = 0; i < rows; ++i) {
            prices(static_cast< Eigen::Index >(i)) = -tab.cost(art_begin + i);
         }
      }
   }

   solution.status = Status::optimal;
   solution.primal.assign(n, 0.);
   solution.basic.assign(n, false);
   std::vector< bool > in_basis(cols, false);
   for(auto b : basis) {
      in_basis[b] = true;
   }
   for(std::size_t j = 0; j < n; ++j) {
      const auto& map = maps[j];
      double x = map.shift + map.sign * internal[map.column];
      bool basic = in_basis[map.column];
      if(map.negative_column >= 0) {
         x -= internal[static_cast< std::size_t >(map.negative_column)];
         basic = basic || in_basis[static_cast< std::size_t >(map.negative_column)];
      }
      solution.primal[j] = x;
      solution.basic[j] = basic;
   }
   solution.duals.assign(problem.rows.size(), 0.);
   for(std::size_t i = 0; i < problem.rows.size(); ++i) {
      solution.duals[i] = sense_sign * flip[i] * prices(static_cast< Eigen::Index >(i));
   }
   double objective = 0.;
   for(std::size_t j = 0; j < n; ++j) {
      objective += problem.objective[j] * solution.primal[j];
   }
   solution.objective = objective;
   return solution;
}

}  // namespace optce::lp

#endif  // OPTCE_LP_HPP
