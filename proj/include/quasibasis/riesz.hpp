#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quasibasis/geometry.hpp"

namespace quasibasis {

using CMat = Eigen::MatrixXcd;

// Fourier transform of a box indicator, integral of exp(-2 pi i <xi, x>) over
// the box. Uses the sinc form with a series branch for |xi_i| < 1e-6 and the
// exact limit for |xi_i| < 1e-12.
std::complex<double> ft_box(const Box& box, const Vec& xi);

// Closed form for box unions; midpoint quadrature (rel. tol 1e-6) for
// indicator regions.
std::complex<double> ft_region(const Region& region, const Vec& xi);

// Truncated Gram matrix of an exponential system.
struct GramMatrix {
    CMat entries;
    // Expected diagonal value: measure of the region, or k on [0, k).
    double diagonal = 0.0;

    std::size_t order() const { return static_cast<std::size_t>(entries.rows()); }
};

// G(j, l) = ft_region(region, lambda_l - lambda_j). Duplicates throw
// DuplicateFrequency unless allowed (negative controls).
GramMatrix gram_dd(const std::vector<Vec>& frequencies, const Region& region,
                   bool allow_duplicates = false);

// G(j, l) = integral over [0, k) of exp(2 pi i (lambda_l - lambda_j) x).
GramMatrix gram_1d(const std::vector<double>& frequencies, int k, bool allow_duplicates = false);

struct FrameReport {
    // "gram" (Riesz-sequence bounds) or "frame_operator" (completeness-sensitive).
    std::string kind = "gram";
    std::string method;
    std::size_t order = 0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    // lambda_max / lambda_min, infinite when lambda_min <= 1e-13.
    double condition = 0.0;
};

// Dense Hermitian solver up to this order, Lanczos above it.
inline constexpr std::size_t kDenseEigenLimit = 512;

struct ExtremeEigenvalues {
    double min = 0.0;
    double max = 0.0;
    int iterations = 0;
};

// Lanczos with full reorthogonalization. Stops once both extreme Ritz values
// have residual below rel_tol * |A|. Throws EigensolverNotConverged.
ExtremeEigenvalues lanczos_extremes(const CMat& a, double rel_tol = 1e-10, int max_iterations = 0);

FrameReport frame_bounds(const CMat& hermitian);
FrameReport frame_bounds(const GramMatrix& gram);

// Spectrum of the truncated frame operator sum_lambda <., e_lambda> e_lambda,
// compressed to the orthonormal test functions exp(2 pi i <p / L, x>) / sqrt(vol)
// of each box whose frequency p / L lies in `band`. Unlike the Gram matrix,
// this sees missing frequencies.
FrameReport frame_operator_bounds(const std::vector<Vec>& frequencies, const BoxUnionRegion& region,
                                  const Box& band);

enum class ControlKind { none, delete_fraction, duplicate, perturb };

struct FrequencyControl {
    ControlKind kind = ControlKind::none;
    double amount = 0.0;
    std::uint64_t seed = 0;
};

std::string to_string(ControlKind kind);
ControlKind control_from_string(const std::string& name);

// delete_fraction removes round(amount * size) seeded picks; duplicate
// overwrites the last entry with the middle one; perturb adds amount * U[0,1)
// to every coordinate.
std::vector<double> apply_control(std::vector<double> values, const FrequencyControl& control);
std::vector<Vec> apply_control(std::vector<Vec> points, const FrequencyControl& control);

// `order` consecutive entries around the middle of a sorted list. Slices of
// increasing order are nested.
std::vector<double> centered_slice(const std::vector<double>& sorted, std::size_t order);

// The `order` points nearest the origin (ties broken lexicographically).
std::vector<Vec> centered_slice(const std::vector<Vec>& points, std::size_t order);

struct TrendRow {
    std::size_t order = 0;
    FrameReport gram;
    std::optional<FrameReport> completeness;
};

struct TrendReport {
    std::string side;
    std::vector<TrendRow> rows;
    // Worst Gram condition number over the first one.
    double stability_ratio = 0.0;
};

// Frequencies on [0, k): Gram and frame-operator spectra per order. The test
// band is the middle half of each slice's frequency range.
TrendReport riesz_trend_1d(const std::vector<double>& sorted_values, int k,
                           const std::vector<std::size_t>& orders, const FrequencyControl& control = {});

// Frequencies in R^d over the region: Gram spectra per order.
TrendReport riesz_trend_dd(const std::vector<Vec>& points, const Region& region,
                           const std::vector<std::size_t>& orders, const FrequencyControl& control = {},
                           const std::string& side = "dd");

struct DualityReport {
    std::size_t order = 0;
    FrameReport one_d;
    FrameReport multi_d;
    bool both_conditioned = false;
    std::string diagnosis;
};

// Same order on both sides of the duality: the dual model set on [0, k) and
// the model set on the region.
DualityReport duality_cross_check(const std::vector<double>& sorted_values, int k,
                                  const std::vector<Vec>& points, const Region& region, std::size_t order,
                                  const FrequencyControl& control = {});

// Condition numbers above this count as ill-conditioned in the duality check.
inline constexpr double kConditionCeiling = 1e8;

}  // namespace quasibasis
