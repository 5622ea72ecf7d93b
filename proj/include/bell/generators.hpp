#pragma once

#include <cstdint>
#include <vector>

#include "bell/scenario.hpp"

namespace bell {

/// T[x][y][a][b] = (-1)^(a + b + x*y), two inputs and outputs per party.
BellFunctional chsh();

/// Magic-square game: Alice gets a row, Bob a column of a 3x3 grid of bits.
/// Alice answers a row with even parity, Bob a column with odd parity; each
/// answer is indexed by its two free bits, answer k = (bit0, bit1) =
/// (k >> 1, k & 1) and the third bit fixed by parity. They win when they
/// agree on the shared cell. Coefficients are (1/9) * win.
BellFunctional magic_square();

/// Row bits (3) of Alice's answer `a`; column bits of Bob's answer `b`.
std::vector<int> magic_square_row(int a);
std::vector<int> magic_square_column(int b);

/// Nonlocal game: coeffs = input_distribution[x][y] * win[x][y][a][b].
/// `win` entries must be 0 or 1 and the distribution nonnegative summing to 1;
/// otherwise InvalidObject.
BellFunctional nonlocal_game(const Scenario& s, const std::vector<double>& win,
                             const std::vector<double>& input_distribution);

/// I.i.d. standard Gaussian coefficients from a seeded mt19937_64.
BellFunctional random_functional(const Scenario& s, std::uint64_t seed);

/// Correlation-type functional: T[x][y][a][b] = c[x][y] (-1)^(a+b).
BellFunctional correlation_functional(int inputs_a, int inputs_b, const std::vector<double>& c);

}  // namespace bell
