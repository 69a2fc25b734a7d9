#pragma once

#include <cstdint>
#include <vector>

#include "quasibasis/geometry.hpp"

namespace quasibasis {

// Parameters of the lifted lattice in R^{d+1}. Build through make_params or
// default_params so the independence probe runs.
struct CutProjectParams {
    int d = 0;
    int k = 0;
    Vec alpha;
    Vec beta;
};

// Validates dimensions and runs the rational-independence probe on
// {1, alpha_1..alpha_d} and {beta_1..beta_d, 1 + beta.alpha}.
// Throws IndependenceHeuristicFailed when a small integer relation turns up.
CutProjectParams make_params(int k, Vec alpha, Vec beta);

// alpha_i = frac(sqrt(p_i)) over the first d primes; beta from the next d
// primes with a seeded perturbation, scaled to norm at most 1/4.
CutProjectParams default_params(int d, int k, std::uint64_t seed);

// Bypasses the independence probe. Degenerate choices (beta = 0, rational
// alpha) are useful as test fixtures and negative controls.
CutProjectParams unchecked_params(int k, Vec alpha, Vec beta);

// Columns generate the lattice and its dual in R^d x R. Column j < d is the
// image of (e_j, 0), column d the image of (0, 1).
struct GammaGenerators {
    Mat gamma_basis;
    Mat gamma_star_basis;
};

GammaGenerators gamma_generators(const CutProjectParams& params);

// Lattice point of the lifted lattice for integer coordinates (m, n).
Vec gamma_point(const CutProjectParams& params, const IVec& m, long long n);
Vec gamma_star_point(const CutProjectParams& params, const IVec& m, long long n);

struct QuasicrystalPoint {
    Vec point;
    IVec m;
    long long n;
};

// Model set of the lifted lattice with window [0, k), restricted to a box.
struct QuasicrystalPoints {
    std::vector<QuasicrystalPoint> points;
    Box window;
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    // True when distinct preimages projected onto the same point (beta = 0).
    bool degenerate = false;
};

// Points p1(gamma) with p2(gamma) in [0, k) inside the closed window, sorted
// lexicographically. Throws WindowTooSmall when nothing falls in the window.
QuasicrystalPoints generate_lambda(const CutProjectParams& params, const Box& window);

// Symmetric window [-radius, radius]^d.
Box centered_window(int d, double radius);

struct BlockEntry {
    long long j;
    double lambda;
    long long n;
    double delta;
};

// Enumeration of the dual model set in blocks of k, indexed so block n holds
// j = kn+1 .. k(n+1). Within a block the values ascend.
struct BlockEnumeration {
    int k = 0;
    long long n_first = 0;
    long long n_last = -1;
    std::vector<BlockEntry> entries;

    std::size_t block_count() const { return static_cast<std::size_t>(n_last - n_first + 1); }
    // Entries of block n, as an index range into `entries`.
    std::size_t block_offset(long long n) const { return static_cast<std::size_t>((n - n_first) * k); }

    // Builds an enumeration from a sequence lambda_j, j = k*n_first + 1, ...;
    // the sequence length must be a multiple of k. Values keep their order.
    static BlockEnumeration from_sequence(int k, long long n_first, const std::vector<double>& lambdas);
};

// For each |n| <= n_range collects S_n = S cap (n alpha + Z^d) by exact
// membership. The region must already be normalized to Z^d and translated
// off the orbit. Throws BlockCardinalityViolation when |S_n| != k.
BlockEnumeration generate_lambda_star(const CutProjectParams& params, const Region& region,
                                      long long n_range);

// Smallest gap between consecutive values after sorting. Needs two entries.
double separation_gap(const BlockEnumeration& enumeration);
double separation_gap(std::vector<double> values);

// Points per unit volume. Throws WindowTooSmall for an empty point set.
double density_estimate(const QuasicrystalPoints& points);

}  // namespace quasibasis
