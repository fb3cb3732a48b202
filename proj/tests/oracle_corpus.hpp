#pragma once

// Twelve small Java methods with every metric input counted by hand.
// Expected reals are derived from these counts with the formulas written
// out independently in oracle_metrics() below.

#include <cmath>
#include <string>
#include <vector>

namespace oracle {

struct HandCounts {
  const char* name;
  std::string source;
  int lc;
  std::vector<int> indent_units;
  int ma;
  int nbd;
  int ml;
  int fo;
  int n1, n2, N1, N2;
  std::vector<int> widths;
  std::vector<int> identifiers;
  std::vector<int> parentheses;
};

inline const std::vector<HandCounts>& corpus() {
  static const std::vector<HandCounts> methods = {
      {"empty", "void f() {}", 1, {0}, 1, 1, 0, 0, 0, 1, 0, 1, {11}, {1}, {2}},
      {"identity", "int id(int x) { return x; }", 1, {0}, 1, 1, 0, 0, 0, 2, 0, 3, {27}, {3}, {2}},
      {"guarded_call", "void f() { if (a < b) g(); }", 1, {0}, 2, 2, 3, 1, 1, 4, 1, 4, {28}, {4}, {6}},
      {"while_and", "void f() { while (i < n && ok) { h(i); h(n); } }", 1, {0}, 3, 2, 4, 2, 2, 5,
       2, 8, {48}, {8}, {8}},
      {"sum_loop",
       "int sum(int[] xs) {\n    int total = 0;\n\n    for (int x : xs) {\n        total += x;\n"
       "    }\n    return total;\n}",
       7, {0, 1, 1, 2, 1, 1, 0}, 2, 2, 1, 0, 3, 5, 3, 9, {19, 18, 22, 19, 5, 17, 1},
       {2, 1, 2, 2, 0, 1, 0}, {2, 0, 2, 0, 0, 0, 0}},
      {"commented",
       "/** Doc. */\nboolean isPos(int v) {\n    // check sign\n    return v > 0;\n}", 3, {0, 1, 0},
       1, 1, 0, 0, 1, 3, 1, 4, {22, 17, 1}, {2, 1, 0}, {2, 0, 0}},
      {"switch_cases",
       "String name(int k) {\n    switch (k) {\n        case 1: return \"one\";\n"
       "        case 2: return \"two\";\n        case 3: return \"three\";\n"
       "        default: return \"many\";\n    }\n}",
       8, {0, 1, 2, 2, 2, 2, 1, 0}, 4, 2, 4, 0, 1, 10, 4, 11, {20, 16, 29, 29, 31, 31, 5, 1},
       {3, 1, 0, 0, 0, 0, 0, 0}, {2, 2, 0, 0, 0, 0, 0, 0}},
      {"recursive_ternary", "int fact(int n) { return n <= 1 ? 1 : n * fact(n - 1); }", 1, {0}, 2,
       1, 2, 1, 5, 3, 5, 9, {56}, {6}, {4}},
      {"nested_fill",
       "void fill(int[][] m, int v) {\n  if (m != null) {\n    for (int i = 0; i < m.length; i++) {\n"
       "      Arrays.fill(m[i], v);\n    }\n  }\n}",
       7, {0, 1, 2, 3, 2, 1, 0}, 3, 3, 4, 1, 5, 8, 6, 16, {29, 18, 40, 27, 5, 3, 1},
       {3, 1, 5, 5, 0, 0, 0}, {2, 2, 2, 2, 0, 0, 0}},
      {"do_while",
       "void drain(Queue<Task> q) {\n    do {\n        q.poll().run();\n"
       "    } while (!q.isEmpty() || busy);\n}",
       5, {0, 1, 2, 1, 0}, 3, 2, 2, 3, 5, 8, 7, 10, {27, 8, 23, 35, 1}, {4, 0, 3, 3, 0},
       {2, 0, 4, 4, 0}},
      {"try_catch",
       "int parse(String s) {\n    try {\n        return Integer.parseInt(s.trim());\n"
       "    } catch (NumberFormatException e) {\n        return -1;\n    }\n}",
       7, {0, 1, 2, 1, 2, 1, 0}, 2, 2, 0, 2, 2, 9, 3, 10, {21, 9, 42, 39, 18, 5, 1},
       {3, 0, 4, 2, 0, 0, 0}, {2, 0, 4, 2, 0, 0, 0}},
      {"else_if",
       "int sign(int a, int b) {\n    if (a > 0 && b > 0) return 1;\n    else if (a < 0) return -1;\n"
       "    return 0;\n}",
       5, {0, 1, 1, 1, 0}, 4, 2, 5, 0, 4, 5, 5, 12, {24, 33, 30, 13, 1}, {3, 2, 1, 0, 0},
       {2, 2, 2, 0, 0}},
  };
  return methods;
}

struct Expected {
  double lc, pi, ma, nbd, ml, d, mi, fo, r, e;
};

inline double mean(const std::vector<int>& v) {
  double s = 0;
  for (int x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

inline Expected oracle_metrics(const HandCounts& h) {
  Expected x{};
  x.lc = h.lc;
  x.pi = h.indent_units.size() <= 1 ? 0.0 : mean(h.indent_units);
  x.ma = h.ma;
  x.nbd = h.nbd;
  x.ml = h.ml;
  x.fo = h.fo;
  const double n = h.n1 + h.n2;
  const double N = h.N1 + h.N2;
  const double volume = n > 0 ? N * std::log2(n) : 0.0;
  x.d = h.n2 > 0 ? (h.n1 / 2.0) * (static_cast<double>(h.N2) / h.n2) : 0.0;
  x.e = x.d * volume;
  x.mi = 171.0 - 0.23 * h.ma - 16.2 * std::log(static_cast<double>(h.lc)) -
         (volume > 0 ? 5.2 * std::log(volume) : 0.0);
  int widest = 0;
  for (int w : h.widths) widest = std::max(widest, w);
  const double z = 2.0 - 0.03 * mean(h.widths) - 0.25 * mean(h.identifiers) - 0.01 * widest -
                   0.4 * mean(h.indent_units) - 0.3 * mean(h.parentheses);
  x.r = 1.0 / (1.0 + std::exp(-z));
  return x;
}

}  // namespace oracle
