#include "quasibasis/avdonin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace quasibasis {

namespace {

std::vector<long double> block_prefix(const BlockEnumeration& e) {
    std::vector<long double> prefix(e.block_count() + 1, 0.0L);
    for (std::size_t b = 0; b < e.block_count(); ++b) {
        long double s = 0.0L;
        for (int i = 0; i < e.k; ++i) s += e.entries[b * e.k + i].delta;
        prefix[b + 1] = prefix[b] + s;
    }
    return prefix;
}

std::vector<long double> entry_prefix(const BlockEnumeration& e) {
    std::vector<long double> prefix(e.entries.size() + 1, 0.0L);
    for (std::size_t i = 0; i < e.entries.size(); ++i) prefix[i + 1] = prefix[i] + e.entries[i].delta;
    return prefix;
}

// sup over starts s in [length, total - 2 length] of |(P[s+length]-P[s])/scale - target|.
double sliding_sup(const std::vector<long double>& prefix, long long length, long double scale,
                   long double target) {
    const long long total = static_cast<long long>(prefix.size()) - 1;
    const long long windows = total - 3 * length + 1;
    if (length < 1) throw InvalidInput("window length must be at least 1");
    if (windows < kMinWindows)
        throw EnumerationTooShort("window of length " + std::to_string(length) + " leaves " +
                                  std::to_string(std::max(0LL, windows)) + " windows, need " +
                                  std::to_string(kMinWindows));
    long double sup = 0.0L;
    for (long long s = length; s <= total - 2 * length; ++s)
        sup = std::max(sup, std::fabs((prefix[s + length] - prefix[s]) / scale - target));
    return static_cast<double>(sup);
}

}  // namespace

double phi(const Vec& x, const Region& region, const Vec& beta) {
    const int d = region.dim();
    const Box bb = region.bbox();
    IVec lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        lo[i] = static_cast<long long>(std::floor(bb.lo[i] - x[i])) - 1;
        hi[i] = static_cast<long long>(std::ceil(bb.hi[i] - x[i])) + 1;
    }
    double sum = 0.0;
    bool boundary = false;
    for_each_integer_point(lo, hi, [&](const IVec& m) {
        const Vec y = x + m.cast<double>();
        switch (region.classify(y)) {
            case Membership::inside: sum += y.dot(beta); break;
            case Membership::boundary: boundary = true; break;
            case Membership::outside: break;
        }
    });
    if (boundary) throw BoundaryHit("phi evaluated on a translated region boundary");
    return sum;
}

double block_sum_identity_check(const BlockEnumeration& enumeration, const Region& region,
                                const CutProjectParams& params, long long r_range) {
    if (-r_range < enumeration.n_first || r_range > enumeration.n_last)
        throw EnumerationTooShort("enumeration does not cover blocks |r| <= " + std::to_string(r_range));
    const double shift = 0.5 * (params.k + 1);
    double worst = 0.0;
    for (long long r = -r_range; r <= r_range; ++r) {
        const std::size_t off = enumeration.block_offset(r);
        double lhs = 0.0;
        for (int i = 0; i < enumeration.k; ++i) lhs += enumeration.entries[off + i].delta;
        const double rhs = phi(params.alpha * static_cast<double>(r), region, params.beta) - shift;
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return worst;
}

double torus_integral_phi(const Region& region, const Vec& beta) {
    if (const auto* boxes = region.boxes()) {
        double total = 0.0;
        for (const auto& b : boxes->boxes()) total += b.volume() * b.centroid().dot(beta);
        return total;
    }
    return integrate_indicator(*region.indicator(),
                               [&](const Vec& x) { return std::complex<double>(x.dot(beta)); })
        .real();
}

double constant_c(const Region& region, const Vec& beta, int k) {
    if (k < 1) throw InvalidInput("multiplicity k must be at least 1");
    return torus_integral_phi(region, beta) / k - (k + 1.0) / (2.0 * k);
}

double window_deviation(const BlockEnumeration& enumeration, double c, long long N) {
    return sliding_sup(block_prefix(enumeration), N, static_cast<long double>(N),
                       static_cast<long double>(c) * enumeration.k);
}

double unaligned_window_sup(const BlockEnumeration& enumeration, double c, long long length) {
    return sliding_sup(entry_prefix(enumeration), length, static_cast<long double>(length), c);
}

long long required_n_range(const std::vector<long long>& grid) {
    long long largest = 1;
    for (long long n : grid) largest = std::max(largest, n);
    // 2 n_range + 1 blocks must hold 3N + kMinWindows - 1 of them.
    return (3 * largest + kMinWindows - 1) / 2 + 1;
}

AvdoninReport evaluate_conditions(const BlockEnumeration& enumeration, const AvdoninInputs& inputs) {
    AvdoninReport report;
    report.k = enumeration.k;
    report.c = inputs.c;
    report.delta_bound = inputs.delta_bound;
    report.threshold = 1.0 / (4.0 * enumeration.k);
    report.gap = separation_gap(enumeration);
    for (const auto& e : enumeration.entries) report.delta_sup = std::max(report.delta_sup, std::abs(e.delta));

    std::vector<long long> grid = inputs.grid;
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (long long N : grid) {
        DeviationRow row;
        row.N = N;
        try {
            row.deviation = window_deviation(enumeration, inputs.c, N);
            row.unaligned_sup = unaligned_window_sup(enumeration, inputs.c, N * enumeration.k);
        } catch (const EnumerationTooShort&) {
            report.skipped_N.push_back(N);
            continue;
        }
        row.passes = row.deviation < report.threshold;
        if (row.passes && !report.smallest_passing_N) report.smallest_passing_N = N;
        report.deviations.push_back(row);
    }
    return report;
}

AvdoninReport check_conditions(const BlockEnumeration& enumeration, const AvdoninInputs& inputs) {
    AvdoninReport report = evaluate_conditions(enumeration, inputs);
    if (!report.condition_a())
        throw ConditionAFailed("condition (a) failed: sequence is not separated", report);
    if (!report.condition_b()) {
        std::ostringstream os;
        os << "condition (b) failed: sup|delta| = " << report.delta_sup << " exceeds " << report.delta_bound;
        throw ConditionBFailed(os.str(), report);
    }
    if (!report.condition_c())
        throw ConditionCNotObserved("condition (c) not observed on the window grid", report);
    return report;
}

AvdoninReport check_conditions(const BlockEnumeration& enumeration, const Region& region,
                               const CutProjectParams& params, const std::vector<long long>& grid) {
    if (enumeration.k != params.k) throw InvalidInput("enumeration and params disagree on k");
    AvdoninInputs inputs;
    inputs.c = constant_c(region, params.beta, params.k);
    inputs.delta_bound = region.bounding_radius() * params.beta.norm() + 1.0;
    inputs.grid = grid;
    return check_conditions(enumeration, inputs);
}

bool kadec_check(const BlockEnumeration& enumeration, int k) {
    if (enumeration.entries.empty()) throw InvalidInput("empty enumeration");
    long double mean = 0.0L;
    for (const auto& e : enumeration.entries) mean += e.delta;
    mean /= static_cast<long double>(enumeration.entries.size());
    long double sup = 0.0L;
    for (const auto& e : enumeration.entries) sup = std::max(sup, std::fabs(e.delta - mean));
    return sup < 1.0L / (4.0L * k);
}

}  // namespace quasibasis
