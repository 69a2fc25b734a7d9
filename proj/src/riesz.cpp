#include "quasibasis/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "quasibasis/errors.hpp"
#include "quasibasis/parallel.hpp"
#include "quasibasis/random.hpp"

namespace quasibasis {

namespace {

using cdouble = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// Integral of exp(-2 pi i xi x) over [lo, hi).
cdouble ft_interval(double lo, double hi, double xi) {
    const double length = hi - lo;
    const double axi = std::abs(xi);
    if (axi < 1e-12) return length;
    const cdouble phase = std::polar(1.0, -kPi * xi * (lo + hi));
    const double z = kPi * xi * length;
    const double sinc = axi < 1e-6 ? 1.0 - z * z / 6.0 : std::sin(z) / z;
    return length * sinc * phase;
}

FrameReport make_report(std::string kind, std::string method, std::size_t order, double lo, double hi) {
    FrameReport r;
    r.kind = std::move(kind);
    r.method = std::move(method);
    r.order = order;
    r.lambda_min = std::max(0.0, lo);
    r.lambda_max = std::max(r.lambda_min, hi);
    r.condition = r.lambda_min <= 1e-13 ? std::numeric_limits<double>::infinity()
                                        : r.lambda_max / r.lambda_min;
    return r;
}

}  // namespace

cdouble ft_box(const Box& box, const Vec& xi) {
    cdouble value = 1.0;
    for (int i = 0; i < box.dim(); ++i) value *= ft_interval(box.lo[i], box.hi[i], xi[i]);
    return value;
}

cdouble ft_region(const Region& region, const Vec& xi) {
    if (xi.size() != region.dim()) throw InvalidInput("frequency dimension differs from region");
    if (const auto* boxes = region.boxes()) {
        cdouble sum = 0.0;
        for (const auto& b : boxes->boxes()) sum += ft_box(b, xi);
        return sum;
    }
    return integrate_indicator(*region.indicator(), [&](const Vec& x) {
        return std::polar(1.0, -2.0 * kPi * xi.dot(x));
    });
}

GramMatrix gram_dd(const std::vector<Vec>& frequencies, const Region& region, bool allow_duplicates) {
    const std::size_t n = frequencies.size();
    if (n == 0) throw InvalidInput("gram matrix needs at least one frequency");
    GramMatrix g;
    g.diagonal = region.measure();
    g.entries.resize(n, n);
    parallel_for(n, [&](std::size_t j) {
        for (std::size_t l = j; l < n; ++l) {
            const Vec diff = frequencies[l] - frequencies[j];
            if (l != j && !allow_duplicates && diff.cwiseAbs().maxCoeff() == 0.0)
                throw DuplicateFrequency("frequencies " + std::to_string(j) + " and " + std::to_string(l) +
                                         " coincide");
            g.entries(j, l) = ft_region(region, diff);
        }
    });
    for (std::size_t j = 0; j < n; ++j) {
        g.entries(j, j) = g.entries(j, j).real();
        for (std::size_t l = j + 1; l < n; ++l) g.entries(l, j) = std::conj(g.entries(j, l));
    }
    return g;
}

GramMatrix gram_1d(const std::vector<double>& frequencies, int k, bool allow_duplicates) {
    const std::size_t n = frequencies.size();
    if (n == 0) throw InvalidInput("gram matrix needs at least one frequency");
    if (k < 1) throw InvalidInput("multiplicity k must be at least 1");
    GramMatrix g;
    g.diagonal = k;
    g.entries.resize(n, n);
    parallel_for(n, [&](std::size_t j) {
        for (std::size_t l = j; l < n; ++l) {
            const double diff = frequencies[l] - frequencies[j];
            if (l != j && !allow_duplicates && diff == 0.0)
                throw DuplicateFrequency("frequencies " + std::to_string(j) + " and " + std::to_string(l) +
                                         " coincide");
            // Integral of exp(+2 pi i diff x) over [0, k).
            g.entries(j, l) = ft_interval(0.0, k, -diff);
        }
    });
    for (std::size_t j = 0; j < n; ++j) {
        g.entries(j, j) = g.entries(j, j).real();
        for (std::size_t l = j + 1; l < n; ++l) g.entries(l, j) = std::conj(g.entries(j, l));
    }
    return g;
}

ExtremeEigenvalues lanczos_extremes(const CMat& a, double rel_tol, int max_iterations) {
    const Eigen::Index n = a.rows();
    if (n == 0 || a.cols() != n) throw InvalidInput("lanczos needs a non-empty square matrix");
    if (max_iterations <= 0) max_iterations = static_cast<int>(n);
    const double scale = std::max(a.cwiseAbs().rowwise().sum().maxCoeff(), 1e-300);

    UniformSource rng(0x5eed);
    Eigen::VectorXcd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = cdouble(rng.next(-1.0, 1.0), rng.next(-1.0, 1.0));
    v.normalize();

    CMat basis(n, std::min<Eigen::Index>(n, max_iterations));
    std::vector<double> alpha, beta;
    for (int it = 0; it < basis.cols(); ++it) {
        basis.col(it) = v;
        Eigen::VectorXcd w = a * v;
        alpha.push_back((v.adjoint() * w)(0).real());
        // Full reorthogonalization, applied twice.
        for (int pass = 0; pass < 2; ++pass) {
            auto q = basis.leftCols(it + 1);
            w -= q * (q.adjoint() * w);
        }
        const double b = w.norm();

        const int m = it + 1;
        Mat t = Mat::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Mat> ritz(t);
        const auto& theta = ritz.eigenvalues();
        const auto& s = ritz.eigenvectors();
        const double res_lo = std::abs(b * s(m - 1, 0));
        const double res_hi = std::abs(b * s(m - 1, m - 1));
        const bool exhausted = b <= 1e-14 * scale || m == n;
        if (exhausted || (res_lo <= rel_tol * scale && res_hi <= rel_tol * scale && m >= 2))
            return {theta[0], theta[m - 1], m};
        beta.push_back(b);
        v = w / b;
    }
    throw EigensolverNotConverged("lanczos did not converge in " + std::to_string(max_iterations) +
                                  " iterations");
}

FrameReport frame_bounds(const CMat& hermitian) {
    const std::size_t n = static_cast<std::size_t>(hermitian.rows());
    if (n == 0) throw InvalidInput("empty matrix");
    if (n <= kDenseEigenLimit) {
        Eigen::SelfAdjointEigenSolver<CMat> solver(hermitian, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) throw EigensolverNotConverged("dense Hermitian solver failed");
        const auto& ev = solver.eigenvalues();
        return make_report("gram", "dense", n, ev[0], ev[ev.size() - 1]);
    }
    ExtremeEigenvalues ex = lanczos_extremes(hermitian);
    return make_report("gram", "lanczos", n, ex.min, ex.max);
}

FrameReport frame_bounds(const GramMatrix& gram) { return frame_bounds(gram.entries); }

FrameReport frame_operator_bounds(const std::vector<Vec>& frequencies, const BoxUnionRegion& region,
                                  const Box& band) {
    const int d = region.dim();
    if (band.dim() != d) throw InvalidInput("band dimension differs from region");
    struct TestFunction {
        const Box* box;
        Vec freq;
        double norm;
    };
    std::vector<TestFunction> tests;
    for (const auto& b : region.boxes()) {
        const Vec side = b.hi - b.lo;
        IVec lo(d), hi(d);
        for (int i = 0; i < d; ++i) {
            lo[i] = static_cast<long long>(std::ceil(band.lo[i] * side[i]));
            hi[i] = static_cast<long long>(std::floor(band.hi[i] * side[i]));
        }
        for_each_integer_point(lo, hi, [&](const IVec& p) {
            tests.push_back({&b, p.cast<double>().cwiseQuotient(side), 1.0 / std::sqrt(b.volume())});
        });
    }
    if (tests.empty()) throw InvalidInput("frequency band contains no test functions");
    CMat coeffs(tests.size(), frequencies.size());
    parallel_for(tests.size(), [&](std::size_t p) {
        for (std::size_t l = 0; l < frequencies.size(); ++l)
            coeffs(p, l) = tests[p].norm * ft_box(*tests[p].box, frequencies[l] - tests[p].freq);
    });
    CMat frame = coeffs * coeffs.adjoint();
    FrameReport r = frame_bounds(frame);
    r.kind = "frame_operator";
    return r;
}

std::string to_string(ControlKind kind) {
    switch (kind) {
        case ControlKind::none: return "none";
        case ControlKind::delete_fraction: return "delete_fraction";
        case ControlKind::duplicate: return "duplicate";
        case ControlKind::perturb: return "perturb";
    }
    return "none";
}

ControlKind control_from_string(const std::string& name) {
    if (name == "none") return ControlKind::none;
    if (name == "delete_fraction") return ControlKind::delete_fraction;
    if (name == "duplicate") return ControlKind::duplicate;
    if (name == "perturb") return ControlKind::perturb;
    throw InvalidInput("unknown control '" + name + "'");
}

namespace {

template <typename T>
std::vector<T> delete_seeded(std::vector<T> items, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction >= 1.0) throw InvalidInput("delete fraction must lie in [0, 1)");
    const std::size_t remove = static_cast<std::size_t>(std::llround(fraction * items.size()));
    std::vector<std::size_t> idx(items.size());
    std::iota(idx.begin(), idx.end(), 0);
    UniformSource rng(seed);
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[static_cast<std::size_t>(rng.next() * i)]);
    std::vector<bool> drop(items.size(), false);
    for (std::size_t i = 0; i < remove; ++i) drop[idx[i]] = true;
    std::vector<T> kept;
    for (std::size_t i = 0; i < items.size(); ++i)
        if (!drop[i]) kept.push_back(std::move(items[i]));
    return kept;
}

}  // namespace

std::vector<double> apply_control(std::vector<double> values, const FrequencyControl& control) {
    switch (control.kind) {
        case ControlKind::none: return values;
        case ControlKind::delete_fraction: return delete_seeded(std::move(values), control.amount, control.seed);
        case ControlKind::duplicate:
            if (values.size() >= 2) values.back() = values[values.size() / 2];
            return values;
        case ControlKind::perturb: {
            UniformSource rng(control.seed);
            for (auto& v : values) v += control.amount * rng.next();
            return values;
        }
    }
    return values;
}

std::vector<Vec> apply_control(std::vector<Vec> points, const FrequencyControl& control) {
    switch (control.kind) {
        case ControlKind::none: return points;
        case ControlKind::delete_fraction: return delete_seeded(std::move(points), control.amount, control.seed);
        case ControlKind::duplicate:
            if (points.size() >= 2) points.back() = points[points.size() / 2];
            return points;
        case ControlKind::perturb: {
            UniformSource rng(control.seed);
            for (auto& p : points)
                for (Eigen::Index i = 0; i < p.size(); ++i) p[i] += control.amount * rng.next();
            return points;
        }
    }
    return points;
}

std::vector<double> centered_slice(const std::vector<double>& sorted, std::size_t order) {
    if (order == 0 || order > sorted.size())
        throw InvalidInput("slice order " + std::to_string(order) + " exceeds " + std::to_string(sorted.size()) +
                           " available frequencies");
    const std::size_t start = sorted.size() / 2 - std::min(sorted.size() / 2, order / 2);
    const std::size_t first = std::min(start, sorted.size() - order);
    return {sorted.begin() + first, sorted.begin() + first + order};
}

std::vector<Vec> centered_slice(const std::vector<Vec>& points, std::size_t order) {
    if (order == 0 || order > points.size())
        throw InvalidInput("slice order " + std::to_string(order) + " exceeds " + std::to_string(points.size()) +
                           " available points");
    std::vector<std::size_t> idx(points.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return points[a].squaredNorm() < points[b].squaredNorm();
    });
    std::vector<Vec> out;
    out.reserve(order);
    for (std::size_t i = 0; i < order; ++i) out.push_back(points[idx[i]]);
    return out;
}

namespace {

void finish_trend(TrendReport& report) {
    if (report.rows.empty()) return;
    double first = report.rows.front().gram.condition, worst = first;
    for (const auto& r : report.rows) worst = std::max(worst, r.gram.condition);
    report.stability_ratio = worst / first;
}

FrameReport completeness_1d(const std::vector<double>& slice, int k) {
    auto [lo_it, hi_it] = std::minmax_element(slice.begin(), slice.end());
    const double mid = 0.5 * (*lo_it + *hi_it);
    const double quarter = 0.25 * (*hi_it - *lo_it);
    const BoxUnionRegion interval({Box{Vec::Constant(1, 0.0), Vec::Constant(1, static_cast<double>(k))}});
    std::vector<Vec> freqs;
    freqs.reserve(slice.size());
    for (double v : slice) freqs.push_back(Vec::Constant(1, v));
    return frame_operator_bounds(freqs, interval,
                                 Box{Vec::Constant(1, mid - quarter), Vec::Constant(1, mid + quarter)});
}

}  // namespace

TrendReport riesz_trend_1d(const std::vector<double>& sorted_values, int k,
                           const std::vector<std::size_t>& orders, const FrequencyControl& control) {
    TrendReport report;
    report.side = "1d";
    const bool dup = control.kind == ControlKind::duplicate;
    for (std::size_t order : orders) {
        const std::vector<double> slice = apply_control(centered_slice(sorted_values, order), control);
        TrendRow row;
        row.order = order;
        row.gram = frame_bounds(gram_1d(slice, k, dup));
        row.completeness = completeness_1d(slice, k);
        report.rows.push_back(row);
    }
    finish_trend(report);
    return report;
}

TrendReport riesz_trend_dd(const std::vector<Vec>& points, const Region& region,
                           const std::vector<std::size_t>& orders, const FrequencyControl& control,
                           const std::string& side) {
    TrendReport report;
    report.side = side;
    const bool dup = control.kind == ControlKind::duplicate;
    for (std::size_t order : orders) {
        const std::vector<Vec> slice = apply_control(centered_slice(points, order), control);
        TrendRow row;
        row.order = order;
        row.gram = frame_bounds(gram_dd(slice, region, dup));
        report.rows.push_back(row);
    }
    finish_trend(report);
    return report;
}

DualityReport duality_cross_check(const std::vector<double>& sorted_values, int k,
                                  const std::vector<Vec>& points, const Region& region, std::size_t order,
                                  const FrequencyControl& control) {
    const bool dup = control.kind == ControlKind::duplicate;
    DualityReport out;
    out.order = order;
    out.one_d = frame_bounds(gram_1d(apply_control(centered_slice(sorted_values, order), control), k, dup));
    out.multi_d = frame_bounds(gram_dd(apply_control(centered_slice(points, order), control), region, dup));
    const bool ok_1d = out.one_d.condition < kConditionCeiling;
    const bool ok_dd = out.multi_d.condition < kConditionCeiling;
    out.both_conditioned = ok_1d && ok_dd;
    if (out.both_conditioned) out.diagnosis = "both sides conditioned";
    else if (!ok_1d && !ok_dd) out.diagnosis = "both sides ill-conditioned";
    else if (!ok_1d) out.diagnosis = "interval side ill-conditioned";
    else out.diagnosis = "region side ill-conditioned";
    return out;
}

}  // namespace quasibasis
