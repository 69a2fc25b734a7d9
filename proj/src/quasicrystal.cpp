#include "quasibasis/quasicrystal.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "quasibasis/errors.hpp"
#include "quasibasis/integer_relation.hpp"
#include "quasibasis/parallel.hpp"
#include "quasibasis/random.hpp"

namespace quasibasis {

namespace {

std::vector<int> first_primes(int count) {
    std::vector<int> primes;
    for (int c = 2; static_cast<int>(primes.size()) < count; ++c) {
        bool prime = true;
        for (int p : primes) {
            if (p * p > c) break;
            if (c % p == 0) {
                prime = false;
                break;
            }
        }
        if (prime) primes.push_back(c);
    }
    return primes;
}

double frac(double x) { return x - std::floor(x); }

std::string describe(const std::vector<long long>& relation) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < relation.size(); ++i) os << (i ? ", " : "") << relation[i];
    os << ")";
    return os.str();
}

}  // namespace

CutProjectParams unchecked_params(int k, Vec alpha, Vec beta) {
    if (k < 1) throw InvalidInput("multiplicity k must be at least 1");
    if (alpha.size() < 1 || alpha.size() != beta.size())
        throw InvalidInput("alpha and beta must be non-empty vectors of equal dimension");
    if (!alpha.allFinite() || !beta.allFinite()) throw InvalidInput("alpha and beta must be finite");
    return {static_cast<int>(alpha.size()), k, std::move(alpha), std::move(beta)};
}

CutProjectParams make_params(int k, Vec alpha, Vec beta) {
    CutProjectParams p = unchecked_params(k, std::move(alpha), std::move(beta));
    std::vector<double> first{1.0};
    first.insert(first.end(), p.alpha.data(), p.alpha.data() + p.d);
    if (auto rel = find_integer_relation(first))
        throw IndependenceHeuristicFailed("{1, alpha} satisfies integer relation " + describe(*rel));
    std::vector<double> second(p.beta.data(), p.beta.data() + p.d);
    second.push_back(1.0 + p.beta.dot(p.alpha));
    if (auto rel = find_integer_relation(second))
        throw IndependenceHeuristicFailed("{beta, 1 + beta.alpha} satisfies integer relation " +
                                          describe(*rel));
    return p;
}

CutProjectParams default_params(int d, int k, std::uint64_t seed) {
    if (d < 1) throw InvalidInput("dimension must be at least 1");
    const std::vector<int> primes = first_primes(2 * d);
    UniformSource rng(seed);
    Vec alpha(d), beta(d);
    for (int i = 0; i < d; ++i) {
        alpha[i] = frac(std::sqrt(static_cast<double>(primes[i])));
        beta[i] = frac(std::sqrt(static_cast<double>(primes[d + i]))) + 1e-3 * rng.next(-1.0, 1.0);
    }
    beta *= 0.25 / std::sqrt(static_cast<double>(d));
    if (beta.norm() > 0.25) beta *= 0.25 / beta.norm();
    return make_params(k, alpha, beta);
}

GammaGenerators gamma_generators(const CutProjectParams& params) {
    const int d = params.d;
    const Vec& a = params.alpha;
    const Vec& b = params.beta;
    GammaGenerators g{Mat::Zero(d + 1, d + 1), Mat::Zero(d + 1, d + 1)};
    g.gamma_basis.topLeftCorner(d, d) = Mat::Identity(d, d) + b * a.transpose();
    g.gamma_basis.bottomLeftCorner(1, d) = -a.transpose();
    g.gamma_basis.topRightCorner(d, 1) = -b;
    g.gamma_basis(d, d) = 1.0;

    g.gamma_star_basis.topLeftCorner(d, d) = Mat::Identity(d, d);
    g.gamma_star_basis.bottomLeftCorner(1, d) = b.transpose();
    g.gamma_star_basis.topRightCorner(d, 1) = a;
    g.gamma_star_basis(d, d) = 1.0 + b.dot(a);
    return g;
}

Vec gamma_point(const CutProjectParams& params, const IVec& m, long long n) {
    const Vec mm = m.cast<double>();
    const double nn = static_cast<double>(n);
    const double s = params.alpha.dot(mm);
    Vec out(params.d + 1);
    out.head(params.d) = mm + params.beta * s - params.beta * nn;
    out[params.d] = nn - s;
    return out;
}

Vec gamma_star_point(const CutProjectParams& params, const IVec& m, long long n) {
    const Vec mm = m.cast<double>();
    const double nn = static_cast<double>(n);
    Vec out(params.d + 1);
    out.head(params.d) = mm + params.alpha * nn;
    out[params.d] = (1.0 + params.beta.dot(params.alpha)) * nn + params.beta.dot(mm);
    return out;
}

Box centered_window(int d, double radius) {
    return {Vec::Constant(d, -radius), Vec::Constant(d, radius)};
}

QuasicrystalPoints generate_lambda(const CutProjectParams& params, const Box& window) {
    const int d = params.d;
    if (window.dim() != d) throw InvalidInput("window dimension differs from params");
    if (!window.lo.allFinite() || !window.hi.allFinite()) throw InvalidInput("window must be bounded");
    if ((window.hi.array() <= window.lo.array()).any()) throw WindowTooSmall("window has zero volume");
    const double kk = static_cast<double>(params.k);
    IVec lo(d), hi(d);
    for (int i = 0; i < d; ++i) {
        const double shift = params.beta[i] * kk;
        lo[i] = static_cast<long long>(std::floor(window.lo[i] + std::min(0.0, shift)));
        hi[i] = static_cast<long long>(std::ceil(window.hi[i] + std::max(0.0, shift)));
    }

    QuasicrystalPoints out;
    out.window = window;
    out.interval_lo = 0.0;
    out.interval_hi = kk;
    for_each_integer_point(lo, hi, [&](const IVec& m) {
        const Vec mm = m.cast<double>();
        const double s = params.alpha.dot(mm);
        const long long first_n = static_cast<long long>(std::ceil(s));
        for (int i = 0; i < params.k; ++i) {
            const long long n = first_n + i;
            const double height = static_cast<double>(n) - s;
            if (height < 0.0 || height >= kk) continue;
            Vec p = mm - params.beta * height;
            bool inside = true;
            for (int c = 0; c < d && inside; ++c)
                inside = p[c] >= window.lo[c] && p[c] <= window.hi[c];
            if (inside) out.points.push_back({std::move(p), m, n});
        }
    });
    if (out.points.empty()) throw WindowTooSmall("no model-set points inside the window");

    auto lex = [](const QuasicrystalPoint& a, const QuasicrystalPoint& b) {
        return std::lexicographical_compare(a.point.data(), a.point.data() + a.point.size(),
                                            b.point.data(), b.point.data() + b.point.size());
    };
    std::sort(out.points.begin(), out.points.end(), lex);
    std::vector<QuasicrystalPoint> unique;
    unique.reserve(out.points.size());
    for (auto& p : out.points) {
        if (!unique.empty() && (unique.back().point - p.point).cwiseAbs().maxCoeff() <= 1e-12) {
            out.degenerate = true;
            continue;
        }
        unique.push_back(std::move(p));
    }
    out.points = std::move(unique);
    return out;
}

BlockEnumeration BlockEnumeration::from_sequence(int k, long long n_first, const std::vector<double>& lambdas) {
    if (k < 1) throw InvalidInput("multiplicity k must be at least 1");
    if (lambdas.empty() || lambdas.size() % static_cast<std::size_t>(k) != 0)
        throw InvalidInput("sequence length must be a positive multiple of k");
    BlockEnumeration e;
    e.k = k;
    e.n_first = n_first;
    e.n_last = n_first + static_cast<long long>(lambdas.size() / k) - 1;
    e.entries.reserve(lambdas.size());
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const long long j = k * n_first + 1 + static_cast<long long>(i);
        const long long n = n_first + static_cast<long long>(i) / k;
        e.entries.push_back({j, lambdas[i], n, lambdas[i] - static_cast<double>(j) / k});
    }
    return e;
}

BlockEnumeration generate_lambda_star(const CutProjectParams& params, const Region& region,
                                      long long n_range) {
    const int d = params.d;
    if (region.dim() != d) throw InvalidInput("region dimension differs from params");
    if (n_range < 0) throw InvalidInput("n_range must be non-negative");
    const Box bb = region.bbox();
    const std::size_t blocks = static_cast<std::size_t>(2 * n_range + 1);

    struct Block {
        std::vector<double> values;
        bool boundary = false;
    };
    std::vector<Block> found(blocks);
    parallel_for(blocks, [&](std::size_t idx) {
        const long long n = -n_range + static_cast<long long>(idx);
        const Vec base = params.alpha * static_cast<double>(n);
        IVec lo(d), hi(d);
        for (int i = 0; i < d; ++i) {
            lo[i] = static_cast<long long>(std::floor(bb.lo[i] - base[i]));
            hi[i] = static_cast<long long>(std::ceil(bb.hi[i] - base[i]));
        }
        Block& block = found[idx];
        for_each_integer_point(lo, hi, [&](const IVec& m) {
            const Vec x = base + m.cast<double>();
            switch (region.classify(x, 0.0)) {
                case Membership::inside:
                    block.values.push_back(static_cast<double>(n) + x.dot(params.beta));
                    break;
                case Membership::boundary: block.boundary = true; break;
                case Membership::outside: break;
            }
        });
        std::sort(block.values.begin(), block.values.end());
    });

    BlockEnumeration e;
    e.k = params.k;
    e.n_first = -n_range;
    e.n_last = n_range;
    e.entries.reserve(blocks * params.k);
    for (std::size_t idx = 0; idx < blocks; ++idx) {
        const long long n = -n_range + static_cast<long long>(idx);
        if (found[idx].boundary)
            throw BoundaryHit("orbit point for block " + std::to_string(n) + " lies on the region boundary");
        if (found[idx].values.size() != static_cast<std::size_t>(params.k))
            throw BlockCardinalityViolation(n, found[idx].values.size(), params.k);
        for (int i = 0; i < params.k; ++i) {
            const long long j = params.k * n + 1 + i;
            const double lambda = found[idx].values[i];
            e.entries.push_back({j, lambda, n, lambda - static_cast<double>(j) / params.k});
        }
    }
    return e;
}

double separation_gap(std::vector<double> values) {
    if (values.size() < 2) throw InvalidInput("separation gap needs at least two values");
    std::sort(values.begin(), values.end());
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < values.size(); ++i) gap = std::min(gap, values[i] - values[i - 1]);
    return gap;
}

double separation_gap(const BlockEnumeration& enumeration) {
    std::vector<double> values;
    values.reserve(enumeration.entries.size());
    for (const auto& e : enumeration.entries) values.push_back(e.lambda);
    return separation_gap(std::move(values));
}

double density_estimate(const QuasicrystalPoints& points) {
    const double volume = points.window.volume();
    if (!(volume > 0.0)) throw InvalidInput("window volume must be positive");
    if (points.points.empty()) throw WindowTooSmall("no points in window");
    return static_cast<double>(points.points.size()) / volume;
}

}  // namespace quasibasis
