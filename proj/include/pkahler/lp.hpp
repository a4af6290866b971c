#pragma once

#include <string>
#include <vector>

namespace pkahler::lp {

enum class Sense { LE, EQ, GE };

struct Row {
  std::vector<double> a;
  Sense sense = Sense::GE;
  double b = 0;
};

// minimize c.x subject to the rows; x_j >= 0 unless free[j].
struct Problem {
  int nvars = 0;
  std::vector<double> c;
  std::vector<bool> free;
  std::vector<Row> rows;
};

enum class Outcome { Optimal, Infeasible, Unbounded, IterationLimit };
const char* to_string(Outcome o);

struct Solution {
  Outcome outcome = Outcome::IterationLimit;
  double value = 0;
  std::vector<double> x;
  // Row multipliers y at the optimum: c - A^T y is >= 0 on nonnegative variables and 0
  // on free ones.
  std::vector<double> duals;
  long pivots = 0;
};

// Dense two-phase simplex. Dantzig pricing, falling back to Bland's rule after a run
// of degenerate pivots.
Solution solve(const Problem& prob, long max_pivots = 200000, double eps = 1e-9);

}  // namespace pkahler::lp
