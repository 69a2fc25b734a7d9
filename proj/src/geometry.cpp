#include "quasibasis/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quasibasis/errors.hpp"
#include "quasibasis/parallel.hpp"
#include "quasibasis/random.hpp"

namespace quasibasis {

double Box::volume() const { return (hi - lo).prod(); }

bool Box::contains(const Vec& x) const {
    for (int i = 0; i < dim(); ++i)
        if (!(x[i] >= lo[i] && x[i] < hi[i])) return false;
    return true;
}

Membership Box::classify(const Vec& x, double tol) const {
    bool interior = true;
    for (int i = 0; i < dim(); ++i) {
        if (x[i] < lo[i] - tol || x[i] >= hi[i] + tol) return Membership::outside;
        if (x[i] < lo[i] + tol || x[i] >= hi[i] - tol) interior = false;
    }
    return interior ? Membership::inside : Membership::boundary;
}

namespace {

void validate_box(const Box& b, int d) {
    if (b.lo.size() != d || b.hi.size() != d)
        throw InvalidInput("box dimension mismatch");
    for (int i = 0; i < d; ++i) {
        if (!std::isfinite(b.lo[i]) || !std::isfinite(b.hi[i]))
            throw InvalidInput("box corners must be finite");
        if (!(b.lo[i] < b.hi[i])) throw InvalidInput("box requires lo < hi in every axis");
    }
}

bool boxes_overlap(const Box& a, const Box& b) {
    for (int i = 0; i < a.dim(); ++i)
        if (!(a.lo[i] < b.hi[i] && b.lo[i] < a.hi[i])) return false;
    return true;
}

Box corners_bbox(const Box& box, const Mat& map) {
    const int d = box.dim();
    Vec lo = Vec::Constant(d, std::numeric_limits<double>::infinity());
    Vec hi = -lo;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
        Vec corner(d);
        for (int i = 0; i < d; ++i) corner[i] = (mask >> i) & 1u ? box.hi[i] : box.lo[i];
        Vec image = map * corner;
        lo = lo.cwiseMin(image);
        hi = hi.cwiseMax(image);
    }
    return {lo, hi};
}

}  // namespace

BoxUnionRegion::BoxUnionRegion(std::vector<Box> boxes)
    : BoxUnionRegion(std::move(boxes), Vec()) {}

BoxUnionRegion::BoxUnionRegion(std::vector<Box> boxes, Vec translation_offset)
    : boxes_(std::move(boxes)), offset_(std::move(translation_offset)) {
    if (boxes_.empty()) throw InvalidInput("region needs at least one box");
    const int d = boxes_.front().dim();
    if (d < 1) throw InvalidInput("region dimension must be at least 1");
    for (const auto& b : boxes_) validate_box(b, d);
    for (std::size_t i = 0; i < boxes_.size(); ++i)
        for (std::size_t j = i + 1; j < boxes_.size(); ++j)
            if (boxes_overlap(boxes_[i], boxes_[j]))
                throw InvalidInput("boxes " + std::to_string(i) + " and " + std::to_string(j) +
                                   " overlap");
    if (offset_.size() == 0) offset_ = Vec::Zero(d);
    if (offset_.size() != d) throw InvalidInput("translation offset dimension mismatch");
}

double BoxUnionRegion::measure() const {
    double total = 0.0;
    for (const auto& b : boxes_) total += b.volume();
    return total;
}

double BoxUnionRegion::bounding_radius() const {
    double r2 = 0.0;
    for (const auto& b : boxes_) {
        double s = 0.0;
        for (int i = 0; i < dim(); ++i) {
            double c = std::max(std::abs(b.lo[i]), std::abs(b.hi[i]));
            s += c * c;
        }
        r2 = std::max(r2, s);
    }
    return std::sqrt(r2);
}

Box BoxUnionRegion::bbox() const {
    Box out = boxes_.front();
    for (const auto& b : boxes_) {
        out.lo = out.lo.cwiseMin(b.lo);
        out.hi = out.hi.cwiseMax(b.hi);
    }
    return out;
}

bool BoxUnionRegion::contains(const Vec& x) const {
    return std::any_of(boxes_.begin(), boxes_.end(), [&](const Box& b) { return b.contains(x); });
}

Membership BoxUnionRegion::classify(const Vec& x, double tol) const {
    Membership result = Membership::outside;
    for (const auto& b : boxes_) {
        Membership m = b.classify(x, tol);
        if (m == Membership::boundary) return m;
        if (m == Membership::inside) result = m;
    }
    return result;
}

BoxUnionRegion BoxUnionRegion::translated(const Vec& t) const {
    std::vector<Box> moved;
    moved.reserve(boxes_.size());
    for (const auto& b : boxes_) moved.push_back({b.lo + t, b.hi + t});
    return BoxUnionRegion(std::move(moved), offset_ + t);
}

IndicatorRegion::IndicatorRegion(Oracle oracle, Box bbox, std::optional<double> declared_measure)
    : oracle_(std::move(oracle)), bbox_(std::move(bbox)), declared_measure_(declared_measure) {
    if (!oracle_) throw InvalidInput("indicator region needs a membership oracle");
    validate_box(bbox_, bbox_.dim());
}

Membership IndicatorRegion::classify(const Vec& x) const {
    for (int i = 0; i < dim(); ++i)
        if (x[i] < bbox_.lo[i] || x[i] > bbox_.hi[i]) return Membership::outside;
    return oracle_(x);
}

IndicatorRegion IndicatorRegion::translated(const Vec& t) const {
    auto inner = oracle_;
    return IndicatorRegion([inner, t](const Vec& x) { return inner(x - t); },
                           Box{bbox_.lo + t, bbox_.hi + t}, declared_measure_);
}

int Region::dim() const {
    return std::visit([](const auto& r) { return r.dim(); }, impl_);
}

Box Region::bbox() const {
    return std::visit([](const auto& r) -> Box { return r.bbox(); }, impl_);
}

Membership Region::classify(const Vec& x, double tol) const {
    if (const auto* b = boxes()) return b->classify(x, tol);
    return indicator()->classify(x);
}

double Region::bounding_radius() const {
    if (const auto* b = boxes()) return b->bounding_radius();
    const Box bb = indicator()->bbox();
    return bb.lo.cwiseAbs().cwiseMax(bb.hi.cwiseAbs()).norm();
}

double Region::measure() const {
    if (const auto* b = boxes()) return b->measure();
    const auto* ind = indicator();
    if (ind->declared_measure()) return *ind->declared_measure();
    return integrate_indicator(*ind, [](const Vec&) { return std::complex<double>(1.0); }).real();
}

Region Region::translated(const Vec& t) const {
    return std::visit([&](const auto& r) { return Region(r.translated(t)); }, impl_);
}

Lattice::Lattice(Mat basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() < 1)
        throw InvalidInput("lattice basis must be a non-empty square matrix");
    if (!basis_.allFinite()) throw InvalidInput("lattice basis must be finite");
    det_ = basis_.determinant();
    double scale = std::pow(basis_.cwiseAbs().maxCoeff(), static_cast<double>(basis_.rows()));
    if (!(std::abs(det_) > 1e-12 * scale)) throw SingularLattice("lattice basis is singular");
    inverse_ = basis_.inverse();
    dual_ = inverse_.transpose();
}

bool Lattice::is_diagonal() const {
    for (int i = 0; i < dim(); ++i)
        for (int j = 0; j < dim(); ++j)
            if (i != j && basis_(i, j) != 0.0) return false;
    return true;
}

void for_each_integer_point(const IVec& lo, const IVec& hi, const std::function<void(const IVec&)>& fn) {
    const auto d = lo.size();
    for (Eigen::Index i = 0; i < d; ++i)
        if (lo[i] > hi[i]) return;
    IVec m = lo;
    while (true) {
        fn(m);
        Eigen::Index i = 0;
        for (; i < d; ++i) {
            if (m[i] < hi[i]) {
                ++m[i];
                break;
            }
            m[i] = lo[i];
        }
        if (i == d) return;
    }
}

std::optional<int> cover_count(const Region& region, const Lattice& lattice, const Vec& x, double tol) {
    // x - A m must land in the (tol-padded) bounding box.
    const Box bb = region.bbox();
    const Vec pad = Vec::Constant(region.dim(), tol);
    const Box shifted{x - bb.hi - pad, x - bb.lo + pad};
    const Box range = corners_bbox(shifted, lattice.inverse());
    IVec lo(region.dim()), hi(region.dim());
    for (int i = 0; i < region.dim(); ++i) {
        lo[i] = static_cast<long long>(std::floor(range.lo[i]));
        hi[i] = static_cast<long long>(std::ceil(range.hi[i]));
    }
    int count = 0;
    bool hit_boundary = false;
    for_each_integer_point(lo, hi, [&](const IVec& m) {
        if (hit_boundary) return;
        const Vec y = x - lattice.basis() * m.cast<double>();
        switch (region.classify(y, tol)) {
            case Membership::inside: ++count; break;
            case Membership::boundary: hit_boundary = true; break;
            case Membership::outside: break;
        }
    });
    if (hit_boundary) return std::nullopt;
    return count;
}

int multiplicity(const Region& region, const Lattice& lattice, const Vec& x, double tol) {
    auto c = cover_count(region, lattice, x, tol);
    if (!c) {
        std::ostringstream os;
        os << "point (" << x.transpose() << ") lies on a translated boundary";
        throw BoundaryHit(os.str());
    }
    return *c;
}

TilingReport verify_multitiling(const Region& region, const Lattice& lattice, int expected_k,
                                std::size_t sample_count, std::uint64_t seed) {
    return verify_multitiling(std::span<const Region>(&region, 1), lattice, expected_k,
                              sample_count, seed);
}

TilingReport verify_multitiling(std::span<const Region> pieces, const Lattice& lattice,
                                int expected_k, std::size_t sample_count, std::uint64_t seed) {
    if (sample_count < 1) throw InvalidInput("sample_count must be at least 1");
    if (pieces.empty()) throw InvalidInput("no region pieces given");
    const int d = lattice.dim();
    for (const auto& p : pieces)
        if (p.dim() != d) throw InvalidInput("region and lattice dimensions differ");

    UniformSource rng(seed);
    Vec offset(d);
    for (int i = 0; i < d; ++i) offset[i] = rng.next();
    std::vector<Vec> samples(sample_count);
    for (auto& s : samples) {
        Vec u(d);
        for (int i = 0; i < d; ++i) u[i] = rng.next();
        s = lattice.basis() * (u + offset);
    }

    std::vector<std::optional<int>> counts(sample_count);
    parallel_for(sample_count, [&](std::size_t idx) {
        int total = 0;
        for (const auto& p : pieces) {
            auto c = cover_count(p, lattice, samples[idx]);
            if (!c) return;
            total += *c;
        }
        counts[idx] = total;
    });

    TilingReport report;
    report.expected_k = expected_k;
    report.samples_tested = sample_count;
    std::optional<int> seen;
    bool consistent = true;
    for (std::size_t idx = 0; idx < sample_count; ++idx) {
        if (!counts[idx]) {
            ++report.boundary_hits;
            continue;
        }
        int c = *counts[idx];
        if (!seen) seen = c;
        else if (*seen != c) consistent = false;
        if (c != expected_k) {
            ++report.failure_count;
            if (report.failures.size() < TilingReport::kMaxRecordedFailures)
                report.failures.push_back({samples[idx], c});
        }
    }
    if (consistent && seen) report.k_observed = seen;
    return report;
}

NormalizedProblem normalize_to_integer_lattice(const Region& region, const Lattice& lattice) {
    if (region.dim() != lattice.dim()) throw InvalidInput("region and lattice dimensions differ");
    const Mat& a = lattice.basis();
    const Mat pullback = lattice.dual_basis();
    const auto* boxes = region.boxes();
    if (boxes && lattice.is_diagonal()) {
        std::vector<Box> mapped;
        for (const auto& b : boxes->boxes()) {
            Vec lo(b.dim()), hi(b.dim());
            for (int i = 0; i < b.dim(); ++i) {
                // A negative scale flips the half-open side; that is a null set.
                double p = b.lo[i] / a(i, i), q = b.hi[i] / a(i, i);
                lo[i] = std::min(p, q);
                hi[i] = std::max(p, q);
            }
            mapped.push_back({lo, hi});
        }
        return {Region(BoxUnionRegion(std::move(mapped))), pullback};
    }
    std::optional<double> measure;
    if (boxes || region.indicator()->declared_measure())
        measure = region.measure() / std::abs(lattice.determinant());
    const Box bb = corners_bbox(region.bbox(), lattice.inverse());
    Region source = region;
    IndicatorRegion mapped([source, a](const Vec& y) { return source.classify(a * y); }, bb, measure);
    return {Region(std::move(mapped)), pullback};
}

TranslationResult generic_translate(const Region& region, const Vec& alpha, long long r_range,
                                    std::uint64_t seed, double tol) {
    const int d = region.dim();
    if (alpha.size() != d) throw InvalidInput("alpha dimension differs from region dimension");
    const Lattice integers = Lattice::integer(d);
    UniformSource rng(seed);
    std::ostringstream log;
    for (int attempt = 1; attempt <= kMaxTranslationAttempts; ++attempt) {
        Vec t(d);
        for (int i = 0; i < d; ++i) t[i] = rng.next();
        const Region moved = region.translated(t);
        long long bad_r = 0;
        bool clear = true;
        for (long long r = -r_range; r <= r_range && clear; ++r) {
            if (!cover_count(moved, integers, static_cast<double>(r) * alpha, tol)) {
                clear = false;
                bad_r = r;
            }
        }
        if (clear) return {moved, t, attempt};
        log << "attempt " << attempt << ": shift (" << t.transpose() << ") hits boundary at r=" << bad_r
            << "\n";
    }
    throw TranslationFailed("no boundary-free shift found after " +
                            std::to_string(kMaxTranslationAttempts) + " attempts\n" + log.str());
}

std::complex<double> integrate_indicator(const IndicatorRegion& region,
                                         const std::function<std::complex<double>(const Vec&)>& f,
                                         double rel_tol) {
    const int d = region.dim();
    const Box& bb = region.bbox();
    const Vec width = bb.hi - bb.lo;
    constexpr double kMaxPoints = 1 << 24;
    // Nested symmetric grids can agree by accident, so two successive
    // refinements must both settle.
    std::optional<std::complex<double>> previous;
    int settled = 0;
    for (long long n = 8;; n *= 2) {
        if (std::pow(static_cast<double>(n), d) > kMaxPoints)
            throw QuadratureNotConverged("indicator quadrature did not reach relative tolerance " +
                                         std::to_string(rel_tol));
        const Vec h = width / static_cast<double>(n);
        std::complex<double> sum = 0.0;
        double abs_sum = 0.0;
        for_each_integer_point(IVec::Zero(d), IVec::Constant(d, n - 1), [&](const IVec& cell) {
            Vec x = bb.lo + (cell.cast<double>().array() + 0.5).matrix().cwiseProduct(h);
            double w;
            switch (region.classify(x)) {
                case Membership::inside: w = 1.0; break;
                case Membership::boundary: w = 0.5; break;
                default: return;
            }
            std::complex<double> v = f(x);
            sum += w * v;
            abs_sum += w * std::abs(v);
        });
        const double cell = h.prod();
        sum *= cell;
        abs_sum *= cell;
        if (previous && std::abs(sum - *previous) <= rel_tol * std::max(abs_sum, 1e-300)) {
            if (++settled == 2) return sum;
        } else {
            settled = 0;
        }
        previous = sum;
    }
}

}  // namespace quasibasis
