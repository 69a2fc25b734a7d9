#include "quasibasis/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

#include "quasibasis/errors.hpp"
#include "quasibasis/random.hpp"
#include "quasibasis/report_io.hpp"

namespace quasibasis {

namespace {

// Independent per-stage seeds from the scenario seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stage) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stage + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

enum Stage : std::uint64_t { kStageTiling = 0, kStageTranslate = 1, kStageControl = 2 };

double frac(double x) { return x - std::floor(x); }

BlockEnumeration synthetic_enumeration(const Scenario& s) {
    const SyntheticSequence& syn = *s.synthetic;
    std::vector<double> lambdas;
    for (long long n = -syn.n_range; n <= syn.n_range; ++n)
        for (int i = 0; i < s.k; ++i) {
            const long long j = s.k * n + 1 + i;
            const double jd = static_cast<double>(j);
            double pert = 0.0;
            if (syn.kind == "frac") pert = syn.amplitude * frac(jd * syn.theta) - 0.5 * syn.amplitude;
            else if (syn.kind == "sine") pert = syn.amplitude * std::sin(2.0 * std::numbers::pi * syn.theta * jd);
            else if (syn.kind == "alternating") pert = (j % 2 == 0 ? 1.0 : -1.0) * syn.amplitude;
            lambdas.push_back(jd / s.k + pert);
        }
    return BlockEnumeration::from_sequence(s.k, -syn.n_range, lambdas);
}

BlockEnumeration controlled(BlockEnumeration e, const FrequencyControl& control) {
    if (control.kind == ControlKind::perturb) {
        UniformSource rng(control.seed);
        for (auto& b : e.entries) {
            b.lambda += control.amount * rng.next();
            b.delta = b.lambda - static_cast<double>(b.j) / e.k;
        }
    } else if (control.kind == ControlKind::duplicate && e.entries.size() >= 2) {
        const std::size_t mid = e.entries.size() / 2;
        auto& b = e.entries[mid + 1 < e.entries.size() ? mid + 1 : mid - 1];
        b.lambda = e.entries[mid].lambda;
        b.delta = b.lambda - static_cast<double>(b.j) / e.k;
    }
    return e;
}

// Grows the window until the `order` nearest pulled-back points provably sit
// inside it.
std::vector<Vec> nearest_frequencies(const std::function<std::vector<Vec>(double)>& generate, std::size_t order,
                                     double initial_radius, double map_norm) {
    for (double r = initial_radius;; r *= 1.5) {
        std::vector<Vec> pts = generate(r);
        if (pts.size() < order) continue;
        std::vector<double> norms;
        norms.reserve(pts.size());
        for (const auto& p : pts) norms.push_back(p.norm());
        std::nth_element(norms.begin(), norms.begin() + (order - 1), norms.end());
        if (norms[order - 1] * map_norm <= r) return pts;
    }
}

std::string describe_failure(const std::exception& e) { return e.what(); }

}  // namespace

Pipeline::Pipeline(Scenario scenario) : scenario_(std::move(scenario)) {
    scenario_.control.seed = derive_seed(scenario_.seed, kStageControl);
    if (scenario_.has_region()) {
        region_.emplace(BoxUnionRegion(scenario_.boxes));
        lattice_.emplace(scenario_.lattice_basis);
        if (lattice_->dim() != scenario_.dim) throw InvalidInput("lattice dimension differs from dim");
    }
}

const Region& Pipeline::region() {
    if (!region_) throw InvalidInput("scenario '" + scenario_.name + "' has no region");
    return *region_;
}

const Lattice& Pipeline::lattice() {
    if (!lattice_) throw InvalidInput("scenario '" + scenario_.name + "' has no lattice");
    return *lattice_;
}

TilingReport Pipeline::tiling() {
    return verify_multitiling(region(), lattice(), scenario_.k, scenario_.samples,
                              derive_seed(scenario_.seed, kStageTiling));
}

long long Pipeline::enumeration_range() const {
    if (scenario_.synthetic) return scenario_.synthetic->n_range;
    const long long largest_order = static_cast<long long>(scenario_.orders.back());
    return std::max({scenario_.n_range, required_n_range(scenario_.deviation_grid),
                     largest_order / (2 * scenario_.k) + 2});
}

void Pipeline::prepare() {
    if (working_) return;
    NormalizedProblem normalized = normalize_to_integer_lattice(region(), lattice());
    if (scenario_.alpha) params_ = make_params(scenario_.k, *scenario_.alpha, *scenario_.beta);
    else params_ = default_params(scenario_.dim, scenario_.k, scenario_.seed);
    TranslationResult moved = generic_translate(normalized.region, params_->alpha, enumeration_range(),
                                                derive_seed(scenario_.seed, kStageTranslate));
    pullback_ = normalized.pullback;
    shift_ = moved.shift;
    working_.emplace(std::move(moved.region));
}

const CutProjectParams& Pipeline::params() {
    prepare();
    return *params_;
}

const Region& Pipeline::working_region() {
    prepare();
    return *working_;
}

const Mat& Pipeline::pullback() {
    prepare();
    return pullback_;
}

const Vec& Pipeline::shift() {
    prepare();
    return shift_;
}

const BlockEnumeration& Pipeline::enumeration() {
    if (!enumeration_) {
        if (scenario_.synthetic) enumeration_ = synthetic_enumeration(scenario_);
        else enumeration_ = generate_lambda_star(params(), working_region(), enumeration_range());
    }
    return *enumeration_;
}

BlockEnumeration Pipeline::exported_enumeration() {
    const BlockEnumeration& full = enumeration();
    const long long range = std::min(scenario_.n_range, std::min(-full.n_first, full.n_last));
    BlockEnumeration out;
    out.k = full.k;
    out.n_first = -range;
    out.n_last = range;
    out.entries.assign(full.entries.begin() + full.block_offset(-range),
                       full.entries.begin() + full.block_offset(range + 1));
    return out;
}

QuasicrystalPoints Pipeline::lambda_points() {
    return generate_lambda(params(), centered_window(scenario_.dim, scenario_.window_radius));
}

std::vector<Vec> Pipeline::lambda_frequencies(const QuasicrystalPoints& points) {
    std::vector<Vec> out;
    out.reserve(points.points.size());
    for (const auto& p : points.points) out.push_back(pullback() * p.point);
    return out;
}

AvdoninStage Pipeline::avdonin() {
    const BlockEnumeration e = controlled(enumeration(), scenario_.control);
    AvdoninInputs inputs;
    inputs.grid = scenario_.deviation_grid;
    AvdoninStage stage;
    if (scenario_.synthetic) {
        inputs.c = scenario_.synthetic->c;
        inputs.delta_bound = scenario_.synthetic->delta_bound;
    } else {
        const Region& region = working_region();
        inputs.c = constant_c(region, params().beta, params().k);
        inputs.delta_bound = region.bounding_radius() * params().beta.norm() + 1.0;
        const long long r_range = std::min<long long>(500, enumeration_range());
        stage.block_identity_residual = block_sum_identity_check(e, region, params(), r_range);
        stage.block_identity_range = static_cast<double>(r_range);
    }
    try {
        stage.report = check_conditions(e, inputs);
    } catch (const AvdoninConditionError& err) {
        stage.report = err.report();
        stage.failure = err.what();
    }
    stage.kadec = kadec_check(e, e.k);
    return stage;
}

FrameStage Pipeline::frame() {
    const int k = scenario_.k;
    const int d = scenario_.dim;
    const std::size_t largest = scenario_.orders.back();
    FrameStage stage;

    std::vector<double> values;
    for (const auto& b : enumeration().entries) values.push_back(b.lambda);
    std::sort(values.begin(), values.end());
    stage.one_d = riesz_trend_1d(values, k, scenario_.orders, scenario_.control);

    const Mat& pb = pullback();
    const double map_norm = Eigen::JacobiSVD<Mat>(lattice().basis()).singularValues()[0];
    const double r0 = 0.6 * std::pow(static_cast<double>(largest) / k, 1.0 / d) + 1.0;
    const std::vector<Vec> model = nearest_frequencies(
        [&](double r) {
            std::vector<Vec> out;
            try {
                for (const auto& p : generate_lambda(params(), centered_window(d, r)).points)
                    out.push_back(pb * p.point);
            } catch (const WindowTooSmall&) {
            }
            return out;
        },
        largest, r0, map_norm);
    stage.multi_d = riesz_trend_dd(model, region(), scenario_.orders, scenario_.control, "dd");

    bool rank_ok = true;
    auto check = [&](const TrendReport& t) {
        for (const auto& row : t.rows) rank_ok = rank_ok && row.gram.lambda_min > kRankCollapse;
    };
    check(stage.one_d);
    check(stage.multi_d);

    if (k == 1) {
        const std::vector<Vec> dual = nearest_frequencies(
            [&](double r) {
                std::vector<Vec> out;
                const long long ri = static_cast<long long>(std::floor(r));
                for_each_integer_point(IVec::Constant(d, -ri), IVec::Constant(d, ri),
                                       [&](const IVec& m) { out.push_back(pb * m.cast<double>()); });
                return out;
            },
            largest, r0, map_norm);
        stage.fuglede = riesz_trend_dd(dual, region(), scenario_.orders, {}, "fuglede");
        check(*stage.fuglede);
    }
    stage.duality = duality_cross_check(values, k, model, region(), largest, scenario_.control);
    stage.rank_ok = rank_ok;
    return stage;
}

bool RunManifest::all_ok() const {
    return std::all_of(stages.begin(), stages.end(), [](const StageStatus& s) { return s.status == "ok"; });
}

ordered_json to_json(const RunManifest& m) {
    ordered_json doc;
    doc["scenario"] = m.scenario_name;
    doc["scenario_digest"] = m.scenario_digest;
    doc["tool_version"] = m.tool_version;
    doc["seed"] = m.seed;
    ordered_json stages = ordered_json::array();
    for (const auto& s : m.stages) {
        ordered_json entry;
        entry["name"] = s.name;
        entry["status"] = s.status;
        if (!s.reason.empty()) entry["reason"] = s.reason;
        stages.push_back(entry);
    }
    doc["stages"] = stages;
    doc["outputs"] = m.outputs;
    return doc;
}

namespace {

ordered_json avdonin_document(Pipeline& p, const AvdoninStage& stage) {
    ordered_json doc;
    doc["scenario"] = p.scenario().name;
    if (p.scenario().has_region()) {
        doc["params"] = to_json(p.params());
        doc["shift"] = to_json(p.shift());
    }
    doc["control"] = to_string(p.scenario().control.kind);
    doc["report"] = to_json(stage.report);
    doc["kadec_n1"] = stage.kadec;
    if (stage.block_identity_residual) {
        doc["block_identity_residual"] = *stage.block_identity_residual;
        doc["block_identity_range"] = *stage.block_identity_range;
    }
    doc["status"] = stage.failure ? "conditions not satisfied" : "conditions satisfied";
    if (stage.failure) doc["failure"] = *stage.failure;
    return doc;
}

ordered_json frame_document(Pipeline& p, const FrameStage& stage) {
    ordered_json doc;
    doc["scenario"] = p.scenario().name;
    doc["control"] = to_string(p.scenario().control.kind);
    doc["interval_side"] = to_json(stage.one_d);
    doc["region_side"] = to_json(stage.multi_d);
    if (stage.fuglede) doc["fuglede_control"] = to_json(*stage.fuglede);
    doc["duality"] = to_json(stage.duality);
    doc["rank_ok"] = stage.rank_ok;
    doc["summary"] = stage.rank_ok ? "no instability observed up to order " +
                                         std::to_string(p.scenario().orders.back())
                                   : "rank collapse detected";
    return doc;
}

int tiling_stage(Pipeline& p, const RunOptions& o, std::vector<std::string>& outputs) {
    const TilingReport report = p.tiling();
    write_json(o.out_dir / "tiling.json", to_json(report));
    outputs.push_back("tiling.json");
    if (!report.passed()) {
        std::cerr << "tiling check failed: expected k=" << report.expected_k << ", " << report.failure_count
                  << " failing samples\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int generate_stage(Pipeline& p, const RunOptions& o, std::vector<std::string>& outputs) {
    const QuasicrystalPoints points = p.lambda_points();
    std::vector<Vec> raw;
    for (const auto& q : points.points) raw.push_back(q.point);
    write_text(o.out_dir / "lambda_points.csv", points_csv(raw, "x"));
    write_text(o.out_dir / "lambda_frequencies.csv", points_csv(p.lambda_frequencies(points), "f"));
    ordered_json doc;
    doc["params"] = to_json(p.params());
    doc["shift"] = to_json(p.shift());
    doc["model_set"] = to_json(points);
    write_json(o.out_dir / "lambda_points.json", doc);
    const BlockEnumeration e = p.exported_enumeration();
    write_text(o.out_dir / "lambda_star.csv", enumeration_csv(e));
    write_json(o.out_dir / "lambda_star.json", to_json(e));
    outputs.insert(outputs.end(), {"lambda_points.csv", "lambda_frequencies.csv", "lambda_points.json",
                                   "lambda_star.csv", "lambda_star.json"});
    return kExitOk;
}

int avdonin_stage(Pipeline& p, const RunOptions& o, std::vector<std::string>& outputs, std::string& reason) {
    const AvdoninStage stage = p.avdonin();
    write_json(o.out_dir / "avdonin.json", avdonin_document(p, stage));
    write_text(o.out_dir / "avdonin_deviation.csv", deviation_csv(stage.report));
    outputs.insert(outputs.end(), {"avdonin.json", "avdonin_deviation.csv"});
    if (stage.failure) {
        reason = *stage.failure;
        std::cerr << "conditions not satisfied (not a disproof of the basis property): " << reason << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int frame_stage(Pipeline& p, const RunOptions& o, std::vector<std::string>& outputs) {
    const FrameStage stage = p.frame();
    write_json(o.out_dir / "frame.json", frame_document(p, stage));
    std::vector<TrendReport> trends{stage.one_d, stage.multi_d};
    if (stage.fuglede) trends.push_back(*stage.fuglede);
    write_text(o.out_dir / "frame_trend.csv", trend_csv(trends));
    outputs.insert(outputs.end(), {"frame.json", "frame_trend.csv"});
    if (!stage.rank_ok) {
        std::cerr << "rank collapse: a Gram matrix has lambda_min <= " << kRankCollapse << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

// Mathematical failures become exit code 1; input errors propagate.
template <typename F>
int guarded(F&& body) {
    try {
        return body();
    } catch (const InvalidInput&) {
        throw;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    }
}

}  // namespace

int cmd_check_tiling(const Scenario& scenario, const RunOptions& options) {
    Pipeline p(scenario);
    std::vector<std::string> outputs;
    return guarded([&] { return tiling_stage(p, options, outputs); });
}

int cmd_generate(const Scenario& scenario, const RunOptions& options) {
    Pipeline p(scenario);
    std::vector<std::string> outputs;
    return guarded([&] {
        if (!options.force) {
            int code = tiling_stage(p, options, outputs);
            if (code != kExitOk) return code;
        }
        return generate_stage(p, options, outputs);
    });
}

int cmd_avdonin(const Scenario& scenario, const RunOptions& options) {
    Pipeline p(scenario);
    std::vector<std::string> outputs;
    std::string reason;
    return guarded([&] { return avdonin_stage(p, options, outputs, reason); });
}

int cmd_frame(const Scenario& scenario, const RunOptions& options) {
    Pipeline p(scenario);
    std::vector<std::string> outputs;
    return guarded([&] { return frame_stage(p, options, outputs); });
}

RunManifest run_all(const Scenario& scenario, const RunOptions& options) {
    Pipeline p(scenario);
    RunManifest m;
    m.scenario_name = scenario.name;
    m.scenario_digest = scenario_digest(scenario);
    m.seed = scenario.seed;

    auto run = [&](const std::string& name, auto&& body) {
        StageStatus st{name, "ok", ""};
        try {
            std::string reason;
            if (body(reason) != kExitOk) {
                st.status = "failed";
                st.reason = reason.empty() ? "check failed" : reason;
            }
        } catch (const InvalidInput&) {
            throw;
        } catch (const Error& e) {
            st.status = "failed";
            st.reason = describe_failure(e);
        }
        m.stages.push_back(st);
        return st.status == "ok";
    };
    auto skip = [&](const std::string& name, const std::string& why) {
        m.stages.push_back({name, "skipped", why});
    };

    if (scenario.has_region()) {
        bool tiled = run("check-tiling", [&](std::string&) { return tiling_stage(p, options, m.outputs); });
        if (tiled || options.force) {
            run("generate", [&](std::string&) { return generate_stage(p, options, m.outputs); });
            run("avdonin", [&](std::string& r) { return avdonin_stage(p, options, m.outputs, r); });
            run("frame", [&](std::string&) { return frame_stage(p, options, m.outputs); });
        } else {
            for (const char* s : {"generate", "avdonin", "frame"}) skip(s, "tiling check failed");
        }
    } else {
        skip("check-tiling", "synthetic sequence");
        skip("generate", "synthetic sequence");
        run("avdonin", [&](std::string& r) { return avdonin_stage(p, options, m.outputs, r); });
        skip("frame", "synthetic sequence");
    }
    m.outputs.push_back("manifest.json");
    write_json(options.out_dir / "manifest.json", to_json(m));
    return m;
}

int cmd_demo(const std::string& name, const RunOptions& options, std::optional<std::uint64_t> seed) {
    Scenario s = bundled_demo(name);
    if (seed) s.seed = *seed;
    const RunManifest m = run_all(s, options);
    return m.all_ok() ? kExitOk : kExitCheckFailed;
}

}  // namespace quasibasis
