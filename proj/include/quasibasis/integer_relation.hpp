#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace quasibasis {

// LLL reduction (delta = 0.99) of the rows of an integer-valued basis held in
// long double. Rows are reduced in place.
void lll_reduce(std::vector<std::vector<long double>>& basis, long double delta = 0.99L);

// Probes x for a small integer relation sum c_i x_i ~ 0 by reducing the lattice
// spanned by rows (e_i, scale * x_i). Returns the relation when one with
// max |c_i| <= coefficient_bound vanishes to within working precision.
// A miss is evidence, not proof, of rational independence.
std::optional<std::vector<long long>> find_integer_relation(std::span<const double> x,
                                                            long long coefficient_bound = 1000000);

}  // namespace quasibasis
