#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "quasibasis/errors.hpp"
#include "quasibasis/quasicrystal.hpp"
#include "quasibasis/random.hpp"
#include "quasibasis/riesz.hpp"

using namespace quasibasis;

namespace {

Vec v(std::initializer_list<double> xs) {
    Vec out(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) out[i++] = x;
    return out;
}

const std::vector<Box> kTwoBoxes{Box{v({0}), v({1})}, Box{v({2}), v({3})}};
Region two_intervals() { return BoxUnionRegion(kTwoBoxes); }

std::vector<Vec> integer_points(int d, int reach) {
    std::vector<Vec> out;
    for_each_integer_point(IVec::Constant(d, -reach), IVec::Constant(d, reach),
                           [&](const IVec& m) { out.push_back(m.cast<double>()); });
    return out;
}

double max_offdiag(const CMat& g) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            if (i != j) worst = std::max(worst, std::abs(g(i, j)));
    return worst;
}

}  // namespace

TEST_CASE("box transform at special frequencies") {
    CHECK(std::abs(ft_region(two_intervals(), v({0.0})) - 2.0) < 1e-15);
    for (int n : {-3, -1, 1, 2, 7}) CHECK(std::abs(ft_box(kTwoBoxes[0], v({double(n)}))) < 1e-14);
}

TEST_CASE("box transform matches quadrature") {
    CHECK(std::abs(ft_region(two_intervals(), v({0.5})) - oracle::ft_quadrature(kTwoBoxes, v({0.5}), 20000)) < 1e-8);
    const std::vector<Box> squares{Box{v({0, 0}), v({1, 1})}, Box{v({2, 2}), v({3, 3})}};
    UniformSource rng(5);
    for (int i = 0; i < 10; ++i) {
        const Vec xi = v({rng.next(-3, 3), rng.next(-3, 3)});
        CHECK(std::abs(ft_region(BoxUnionRegion(squares), xi) - oracle::ft_quadrature(squares, xi, 400)) < 1e-5);
    }
    // Small-argument branches stay continuous.
    for (double xi : {1e-13, 1e-9, 5e-7, 2e-6, 1e-4}) {
        const auto exact = oracle::ft_quadrature(kTwoBoxes, v({xi}), 200);
        CHECK(std::abs(ft_region(two_intervals(), v({xi})) - exact) < 1e-10);
    }
}

TEST_CASE("transform of an indicator region by quadrature") {
    const Region ind = IndicatorRegion(
        [](const Vec& x) {
            if (std::abs(x[0]) < 1e-12 || std::abs(x[0] - 1) < 1e-12) return Membership::boundary;
            return x[0] > 0 && x[0] < 1 ? Membership::inside : Membership::outside;
        },
        Box{v({0}), v({1})}, 1.0);
    CHECK(std::abs(ft_region(ind, v({0.3})) - ft_box(kTwoBoxes[0], v({0.3}))) < 1e-5);
}

TEST_CASE("integer frequencies on the unit cube are orthonormal") {
    for (int d = 1; d <= 2; ++d) {
        const GramMatrix g = gram_dd(integer_points(d, 3), BoxUnionRegion({Box{Vec::Zero(d), Vec::Ones(d)}}));
        CHECK((g.entries - CMat::Identity(g.order(), g.order())).norm() < 1e-12);
        CHECK(max_offdiag(g.entries) < 1e-14);
        CHECK(g.diagonal == 1.0);
    }
    const GramMatrix one = gram_dd({v({0.37})}, two_intervals());
    CHECK(one.order() == 1);
    CHECK(std::abs(one.entries(0, 0) - 2.0) < 1e-15);
}

TEST_CASE("frequencies at a zero of the transform are orthogonal") {
    // The region is symmetric about 3/2, so rotating the transform makes it real.
    const auto rotated = [](double xi) {
        const auto phase = std::exp(std::complex<double>(0.0, 3.0 * std::numbers::pi * xi));
        return (phase * ft_region(two_intervals(), v({xi}))).real();
    };
    const double root = oracle::bisect(rotated, 0.1, 0.4);
    const GramMatrix g = gram_dd({v({0.0}), v({root})}, two_intervals());
    CHECK(std::abs(g.entries(0, 1)) < 1e-12);
    CHECK(std::abs(g.entries(0, 0) - 2.0) < 1e-15);
}

TEST_CASE("one-dimensional Gram matrices") {
    for (int k : {1, 2, 4}) {
        std::vector<double> f;
        for (int j = -20; j <= 20; ++j) f.push_back(static_cast<double>(j) / k);
        const GramMatrix g = gram_1d(f, k);
        CHECK((g.entries - k * CMat::Identity(g.order(), g.order())).norm() < 1e-12);

        const GramMatrix pair = gram_1d({0.0, 1.0 / (2 * k)}, k);
        CHECK(std::abs(pair.entries(0, 1)) == doctest::Approx(2.0 * k / std::numbers::pi).epsilon(1e-12));
        const auto quad = oracle::midpoint_box(Box{v({0}), v({double(k)})}, [&](const Vec& x) {
            return std::exp(std::complex<double>(0.0, 2 * std::numbers::pi * x[0] / (2 * k)));
        }, 20000);
        CHECK(std::abs(pair.entries(0, 1) - quad) < 1e-7);
    }
    UniformSource rng(4);
    std::vector<double> f;
    for (int i = 0; i < 30; ++i) f.push_back(rng.next(-10, 10));
    const GramMatrix g = gram_1d(f, 3);
    CHECK((g.entries - g.entries.adjoint()).norm() < 1e-14);
    for (Eigen::Index i = 0; i < g.entries.rows(); ++i) CHECK(std::abs(g.entries(i, i) - 3.0) < 1e-15);
}

TEST_CASE("duplicate frequencies") {
    CHECK_THROWS_AS(gram_1d({0.0, 0.5, 0.5}, 1), DuplicateFrequency);
    CHECK_THROWS_AS(gram_dd({v({0.0}), v({0.0})}, two_intervals()), DuplicateFrequency);
    const FrameReport r = frame_bounds(gram_1d({0.0, 0.5, 0.5, 1.3}, 1, true));
    CHECK(r.lambda_min <= 1e-8);
    CHECK(std::isinf(r.condition));
}

TEST_CASE("frame bounds of small matrices") {
    const FrameReport id = frame_bounds(gram_dd(integer_points(2, 2), BoxUnionRegion({Box{v({0, 0}), v({1, 1})}})));
    CHECK(id.lambda_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(id.condition - 1.0) < 1e-10);

    for (double x : {0.05, 0.2, 0.45}) {
        const GramMatrix g = gram_1d({0.0, x}, 2);
        const auto [lo, hi] = oracle::hermitian2x2(2.0, 2.0, g.entries(0, 1));
        const FrameReport r = frame_bounds(g);
        CHECK(r.lambda_min == doctest::Approx(lo).epsilon(1e-12));
        CHECK(r.lambda_max == doctest::Approx(hi).epsilon(1e-12));
        CHECK(r.lambda_min == doctest::Approx(2.0 - std::abs(g.entries(0, 1))).epsilon(1e-12));
    }
}

TEST_CASE("Lanczos agrees with the dense solver") {
    UniformSource rng(8);
    std::vector<double> f;
    double x = 0.0;
    for (int i = 0; i < 700; ++i) {
        x += rng.next(0.35, 0.65);
        f.push_back(x);
    }
    const GramMatrix g = gram_1d(f, 2);
    const FrameReport auto_pick = frame_bounds(g);
    CHECK(auto_pick.method == "lanczos");
    Eigen::SelfAdjointEigenSolver<CMat> dense(g.entries, Eigen::EigenvaluesOnly);
    CHECK(auto_pick.lambda_min == doctest::Approx(dense.eigenvalues()[0]).epsilon(1e-8));
    CHECK(auto_pick.lambda_max == doctest::Approx(dense.eigenvalues()[699]).epsilon(1e-8));
}

TEST_CASE("frequency controls") {
    std::vector<double> f;
    for (int i = 0; i < 100; ++i) f.push_back(i);
    const auto deleted = apply_control(f, {ControlKind::delete_fraction, 0.1, 3});
    CHECK(deleted.size() == 90);
    CHECK(deleted == apply_control(f, {ControlKind::delete_fraction, 0.1, 3}));
    CHECK(std::is_sorted(deleted.begin(), deleted.end()));
    const auto dup = apply_control(f, {ControlKind::duplicate, 0.0, 3});
    CHECK(dup.back() == dup[50]);
    const auto pert = apply_control(f, {ControlKind::perturb, 0.5, 3});
    for (std::size_t i = 0; i < f.size(); ++i) {
        CHECK(pert[i] >= f[i]);
        CHECK(pert[i] < f[i] + 0.5);
    }
    CHECK(control_from_string(to_string(ControlKind::delete_fraction)) == ControlKind::delete_fraction);
    CHECK_THROWS_AS(control_from_string("shuffle"), InvalidInput);
}

TEST_CASE("centered slices are nested") {
    std::vector<double> f;
    for (int i = 0; i < 1000; ++i) f.push_back(0.5 * i - 100);
    const auto a = centered_slice(f, 64);
    const auto b = centered_slice(f, 128);
    CHECK(std::search(b.begin(), b.end(), a.begin(), a.end()) != b.end());
    const auto pts = centered_slice(integer_points(2, 5), 9);
    for (const auto& p : pts) CHECK(p.norm() <= std::sqrt(2.0) + 1e-15);
}

TEST_CASE("Gram lower bound can only decrease with the order") {
    const CutProjectParams p = make_params(2, v({std::numbers::sqrt2 - 1}), v({0.1}));
    const TranslationResult t = generic_translate(two_intervals(), p.alpha, 400, 1);
    const BlockEnumeration e = generate_lambda_star(p, t.region, 400);
    std::vector<double> values;
    for (const auto& b : e.entries) values.push_back(b.lambda);
    std::sort(values.begin(), values.end());
    const TrendReport trend = riesz_trend_1d(values, 2, {32, 64, 128, 256});
    for (std::size_t i = 1; i < trend.rows.size(); ++i)
        CHECK(trend.rows[i].gram.lambda_min <= trend.rows[i - 1].gram.lambda_min + 1e-12);
    CHECK(trend.stability_ratio < 3.0);
}

TEST_CASE("frame operator sees deleted frequencies where the Gram matrix cannot") {
    std::vector<double> f;
    for (int j = -600; j <= 600; ++j) f.push_back(0.5 * j);
    const TrendReport full = riesz_trend_1d(f, 2, {256, 512});
    const TrendReport holes = riesz_trend_1d(f, 2, {256, 512}, {ControlKind::delete_fraction, 0.1, 1});
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(full.rows[i].completeness->kind == "frame_operator");
        CHECK(full.rows[i].completeness->lambda_min == doctest::Approx(2.0).epsilon(1e-9));
        // Orthogonal subsets keep a perfect Gram matrix...
        CHECK(holes.rows[i].gram.lambda_min == doctest::Approx(2.0).epsilon(1e-9));
        // ...but the missing directions show up in the frame operator.
        CHECK(holes.rows[i].completeness->lambda_min <= 1e-8);
    }
}

TEST_CASE("orthogonal control over all orders") {
    for (int d = 1; d <= 2; ++d) {
        const TrendReport t = riesz_trend_dd(integer_points(d, d == 1 ? 300 : 13),
                                             BoxUnionRegion({Box{Vec::Zero(d), Vec::Ones(d)}}), {64, 128});
        for (const auto& row : t.rows) CHECK(std::abs(row.gram.condition - 1.0) < 1e-10);
    }
}

TEST_CASE("duality check on a nearly orthogonal cube") {
    const CutProjectParams p =
        make_params(1, v({std::numbers::sqrt2 - 1, std::numbers::sqrt3 - 1}), v({1e-4, 1e-4 * std::numbers::sqrt2}));
    const Region cube = BoxUnionRegion({Box{v({0, 0}), v({1, 1})}});
    const TranslationResult t = generic_translate(cube, p.alpha, 300, 1);
    const BlockEnumeration e = generate_lambda_star(p, t.region, 300);
    std::vector<double> values;
    for (const auto& b : e.entries) values.push_back(b.lambda);
    std::sort(values.begin(), values.end());
    std::vector<Vec> pts;
    for (const auto& q : generate_lambda(p, centered_window(2, 8)).points) pts.push_back(q.point);
    const DualityReport r = duality_cross_check(values, 1, pts, cube, 128);
    CHECK(r.both_conditioned);
    CHECK(r.one_d.condition < 1.01);
    CHECK(r.multi_d.condition < 1.01);
}

TEST_CASE("sabotaged parameters degrade the duality check") {
    // beta = 0 stacks the k lifts of each point: the model set collapses onto
    // Z (half the density needed) and the interval side repeats every value.
    const CutProjectParams p = unchecked_params(2, v({std::numbers::sqrt2 - 1}), v({0.0}));
    const QuasicrystalPoints q = generate_lambda(p, centered_window(1, 40));
    CHECK(q.degenerate);
    CHECK(q.points.size() == 81);

    const TranslationResult t = generic_translate(two_intervals(), p.alpha, 100, 1);
    const BlockEnumeration e = generate_lambda_star(p, t.region, 100);
    std::vector<double> values;
    for (const auto& b : e.entries) values.push_back(b.lambda);
    std::sort(values.begin(), values.end());
    std::vector<Vec> pts;
    for (const auto& x : q.points) pts.push_back(x.point);
    CHECK_THROWS_AS(duality_cross_check(values, 2, pts, two_intervals(), 64), DuplicateFrequency);
    CHECK(frame_bounds(gram_1d(centered_slice(values, 64), 2, true)).lambda_min <= 1e-8);
}
