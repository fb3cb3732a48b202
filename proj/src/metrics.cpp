#include "sevpred/metrics.hpp"

#include <numeric>
#include <set>

namespace sevpred {

int lines_of_code(const MethodShape& shape) { return shape.logical_lines; }

int mccabe(const MethodShape& shape) { return 1 + shape.decision_points; }

int mcclure(const MethodShape& shape) {
  int comparisons = 0;
  std::set<std::string> variables;
  for (const Predicate& p : shape.predicates) {
    comparisons += p.comparison_count;
    variables.insert(p.control_variables.begin(), p.control_variables.end());
  }
  return comparisons + static_cast<int>(variables.size());
}

int nested_block_depth(const MethodShape& shape) { return shape.max_nesting_depth; }

double proxy_indentation(const MethodShape& shape) {
  const auto& units = shape.indent_per_line;
  if (units.size() <= 1) return 0.0;
  const double total = std::accumulate(units.begin(), units.end(), 0.0);
  return total / static_cast<double>(units.size());
}

int fan_out(const MethodShape& shape) {
  int total = 0;
  for (const auto& [callee, count] : shape.call_sites) total += count;
  return total;
}

Halstead halstead(const HalsteadCounts& counts) {
  Halstead h;
  h.n1 = counts.distinct_operators;
  h.n2 = counts.distinct_operands;
  h.N1 = counts.total_operators;
  h.N2 = counts.total_operands;
  const int vocabulary = h.n1 + h.n2;
  if (vocabulary <= 0) {
    h.degenerate = true;
    return h;
  }
  h.volume = static_cast<double>(h.N1 + h.N2) * std::log2(static_cast<double>(vocabulary));
  if (h.n2 == 0) {
    h.degenerate = true;
    return h;
  }
  h.difficulty = (static_cast<double>(h.n1) / 2.0) *
                 (static_cast<double>(h.N2) / static_cast<double>(h.n2));
  h.effort = h.difficulty * h.volume;
  return h;
}

double maintainability_index(double volume, int mccabe_value, int lines) {
  double mi = 171.0 - 0.23 * mccabe_value - 16.2 * std::log(static_cast<double>(lines));
  if (volume > 0.0) mi -= 5.2 * std::log(volume);
  return mi;
}

namespace {

double mean_of(const std::vector<int>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace

double readability(const MethodShape& shape) {
  const ReadabilityWeights& w = readability_weights;
  const int widest = shape.line_widths.empty()
                         ? 0
                         : *std::max_element(shape.line_widths.begin(), shape.line_widths.end());
  const double z = w.bias + w.mean_width * mean_of(shape.line_widths) +
                   w.mean_identifiers * mean_of(shape.identifiers_per_line) +
                   w.max_width * widest + w.mean_indent * mean_of(shape.indent_per_line) +
                   w.mean_parentheses * mean_of(shape.parentheses_per_line);
  return 1.0 / (1.0 + std::exp(-z));
}

MetricsVector metrics_vector(const MethodShape& shape) {
  const Halstead h = halstead(shape);
  const int lc = lines_of_code(shape);
  const int ma = mccabe(shape);
  MetricsVector v;
  v(kLC) = lc;
  v(kPI) = proxy_indentation(shape);
  v(kMA) = ma;
  v(kNBD) = nested_block_depth(shape);
  v(kML) = mcclure(shape);
  v(kD) = h.difficulty;
  v(kMI) = maintainability_index(h.volume, ma, lc);
  v(kFO) = fan_out(shape);
  v(kR) = readability(shape);
  v(kE) = h.effort;
  return v;
}

MetricsVector measure_source(std::string_view source) {
  const std::string clean = strip_comments(source);
  return metrics_vector(parse_method(clean));
}

}  // namespace sevpred
