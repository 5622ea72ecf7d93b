#include "bell/generators.hpp"

#include <cmath>
#include <random>

namespace bell {

BellFunctional chsh() {
  BellFunctional t(Scenario(2, 2, 2, 2));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) t(x, y, a, b) = ((a + b + x * y) % 2 == 0) ? 1.0 : -1.0;
  return t;
}

std::vector<int> magic_square_row(int a) {
  const int b0 = (a >> 1) & 1, b1 = a & 1;
  return {b0, b1, b0 ^ b1};
}

std::vector<int> magic_square_column(int b) {
  const int b0 = (b >> 1) & 1, b1 = b & 1;
  return {b0, b1, 1 ^ b0 ^ b1};
}

BellFunctional magic_square() {
  BellFunctional t(Scenario(3, 3, 4, 4));
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
          t(x, y, a, b) = magic_square_row(a)[y] == magic_square_column(b)[x] ? 1.0 / 9.0 : 0.0;
  return t;
}

BellFunctional nonlocal_game(const Scenario& s, const std::vector<double>& win,
                             const std::vector<double>& input_distribution) {
  if (win.size() != s.size()) throw InvalidObject("win table has " + std::to_string(win.size()) + " entries, expected " + std::to_string(s.size()));
  const std::size_t pairs = static_cast<std::size_t>(s.inputs_a) * s.inputs_b;
  if (input_distribution.size() != pairs)
    throw InvalidObject("input distribution has " + std::to_string(input_distribution.size()) + " entries, expected " + std::to_string(pairs));
  double total = 0.0;
  for (double w : input_distribution) {
    if (!std::isfinite(w) || w < 0.0) throw InvalidObject("input distribution must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > kFeasibilityTol) throw InvalidObject("input distribution sums to " + std::to_string(total) + ", not 1");
  for (double w : win)
    if (w != 0.0 && w != 1.0) throw InvalidObject("win table entries must be 0 or 1");
  BellFunctional t(s);
  for (int x = 0; x < s.inputs_a; ++x)
    for (int y = 0; y < s.inputs_b; ++y)
      for (int a = 0; a < s.outputs_a; ++a)
        for (int b = 0; b < s.outputs_b; ++b)
          t(x, y, a, b) = input_distribution[static_cast<std::size_t>(x) * s.inputs_b + y] * win[s.index(x, y, a, b)];
  return t;
}

BellFunctional random_functional(const Scenario& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> c(s.size());
  for (double& v : c) v = normal(rng);
  return BellFunctional(s, std::move(c));
}

BellFunctional correlation_functional(int inputs_a, int inputs_b, const std::vector<double>& c) {
  if (c.size() != static_cast<std::size_t>(inputs_a) * inputs_b)
    throw InvalidObject("correlation matrix must have inputs_a * inputs_b entries");
  BellFunctional t(Scenario(inputs_a, inputs_b, 2, 2));
  for (int x = 0; x < inputs_a; ++x)
    for (int y = 0; y < inputs_b; ++y)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) t(x, y, a, b) = c[static_cast<std::size_t>(x) * inputs_b + y] * ((a + b) % 2 == 0 ? 1.0 : -1.0);
  return t;
}

}  // namespace bell
