#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace quasibasis {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

// Distance below which a point counts as sitting on a region boundary.
inline constexpr double kBoundaryTolerance = 1e-9;

enum class Membership { outside, inside, boundary };

// Half-open axis-aligned box [lo, hi).
struct Box {
    Vec lo;
    Vec hi;

    int dim() const { return static_cast<int>(lo.size()); }
    double volume() const;
    Vec centroid() const { return 0.5 * (lo + hi); }
    bool contains(const Vec& x) const;
    Membership classify(const Vec& x, double tol) const;
};

// Finite disjoint union of half-open boxes. Every quantity on this type is exact.
class BoxUnionRegion {
public:
    // Throws InvalidInput on empty input, dimension mismatch, lo >= hi or overlap.
    explicit BoxUnionRegion(std::vector<Box> boxes);
    BoxUnionRegion(std::vector<Box> boxes, Vec translation_offset);

    int dim() const { return boxes_.front().dim(); }
    const std::vector<Box>& boxes() const { return boxes_; }
    // Sum of all translations applied since construction.
    const Vec& translation_offset() const { return offset_; }

    double measure() const;
    double bounding_radius() const;
    Box bbox() const;

    bool contains(const Vec& x) const;
    Membership classify(const Vec& x, double tol = kBoundaryTolerance) const;

    BoxUnionRegion translated(const Vec& t) const;

private:
    std::vector<Box> boxes_;
    Vec offset_;
};

// Domain known only through a membership oracle. Checks on it are sampled,
// never certified. Riemann measurability is the caller's assertion.
class IndicatorRegion {
public:
    using Oracle = std::function<Membership(const Vec&)>;

    IndicatorRegion(Oracle oracle, Box bbox, std::optional<double> declared_measure = {});

    int dim() const { return bbox_.dim(); }
    const Box& bbox() const { return bbox_; }
    const std::optional<double>& declared_measure() const { return declared_measure_; }

    // Always outside for points outside the bounding box.
    Membership classify(const Vec& x) const;

    IndicatorRegion translated(const Vec& t) const;

private:
    Oracle oracle_;
    Box bbox_;
    std::optional<double> declared_measure_;
};

// Either kind of domain behind one interface.
class Region {
public:
    Region(BoxUnionRegion r) : impl_(std::move(r)) {}
    Region(IndicatorRegion r) : impl_(std::move(r)) {}

    int dim() const;
    Box bbox() const;
    Membership classify(const Vec& x, double tol = kBoundaryTolerance) const;
    double bounding_radius() const;
    // Exact for box unions; declared value or quadrature for indicator regions.
    double measure() const;
    Region translated(const Vec& t) const;

    bool is_exact() const { return std::holds_alternative<BoxUnionRegion>(impl_); }
    const BoxUnionRegion* boxes() const { return std::get_if<BoxUnionRegion>(&impl_); }
    const IndicatorRegion* indicator() const { return std::get_if<IndicatorRegion>(&impl_); }

private:
    std::variant<BoxUnionRegion, IndicatorRegion> impl_;
};

// Image of Z^d under an invertible matrix whose columns are the generators.
class Lattice {
public:
    explicit Lattice(Mat basis);
    static Lattice integer(int d) { return Lattice(Mat::Identity(d, d)); }

    int dim() const { return static_cast<int>(basis_.rows()); }
    const Mat& basis() const { return basis_; }
    // Transpose-inverse of the basis; generates the dual lattice.
    const Mat& dual_basis() const { return dual_; }
    const Mat& inverse() const { return inverse_; }
    double determinant() const { return det_; }
    bool is_diagonal() const;

private:
    Mat basis_;
    Mat inverse_;
    Mat dual_;
    double det_;
};

// Number of lattice translates of the region covering x, or nullopt when x is
// within tol of a translated boundary.
std::optional<int> cover_count(const Region& region, const Lattice& lattice, const Vec& x,
                               double tol = kBoundaryTolerance);

// Sum over lattice points of 1_S(x - lambda). Throws BoundaryHit near boundaries.
int multiplicity(const Region& region, const Lattice& lattice, const Vec& x,
                 double tol = kBoundaryTolerance);

struct TilingFailure {
    Vec point;
    int multiplicity;
};

struct TilingReport {
    int expected_k = 0;
    // Set only when every non-boundary sample saw the same multiplicity.
    std::optional<int> k_observed;
    std::size_t samples_tested = 0;
    std::size_t boundary_hits = 0;
    // Samples whose multiplicity differs from expected_k; `failures` keeps the
    // first kMaxRecordedFailures of them.
    std::size_t failure_count = 0;
    std::vector<TilingFailure> failures;

    static constexpr std::size_t kMaxRecordedFailures = 100;

    bool passed() const { return k_observed && *k_observed == expected_k && failure_count == 0; }
};

// Samples a seeded, generically offset fundamental domain of the lattice and
// counts multiplicities at each sample.
TilingReport verify_multitiling(const Region& region, const Lattice& lattice, int expected_k,
                                std::size_t sample_count, std::uint64_t seed);

// Same, for a multiset union of pieces (overlapping translates modelled as
// separate pieces); multiplicities add across pieces.
TilingReport verify_multitiling(std::span<const Region> pieces, const Lattice& lattice,
                                int expected_k, std::size_t sample_count, std::uint64_t seed);

struct NormalizedProblem {
    // A^{-1} applied to the input region; k-tiles Z^d when the input k-tiles A Z^d.
    Region region;
    // A^{-T}: maps a frequency set for the normalized region to one for the input.
    Mat pullback;
};

// Box unions stay box unions under diagonal lattices; anything else becomes an
// indicator region composed with the lattice basis.
NormalizedProblem normalize_to_integer_lattice(const Region& region, const Lattice& lattice);

struct TranslationResult {
    Region region;
    Vec shift;
    int attempts = 0;
};

// Shifts the region so every orbit point r*alpha, |r| <= r_range, stays at
// least tol away from the boundary of every integer translate.
// Throws TranslationFailed (message carries the attempt log) after 64 tries.
TranslationResult generic_translate(const Region& region, const Vec& alpha, long long r_range,
                                    std::uint64_t seed, double tol = kBoundaryTolerance);

inline constexpr int kMaxTranslationAttempts = 64;

// Midpoint-grid integral of f over an indicator region, refined until the
// relative change drops below rel_tol. Boundary cells weigh one half.
std::complex<double> integrate_indicator(const IndicatorRegion& region,
                                         const std::function<std::complex<double>(const Vec&)>& f,
                                         double rel_tol = 1e-6);

// Calls fn for every integer vector m with lo <= m <= hi componentwise.
void for_each_integer_point(const IVec& lo, const IVec& hi, const std::function<void(const IVec&)>& fn);

}  // namespace quasibasis
