#include "quasibasis/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quasibasis/errors.hpp"

namespace quasibasis {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

// JSON has no infinity; unbounded values serialize as null.
ordered_json number(double x) {
    if (!std::isfinite(x)) return nullptr;
    return x;
}

}  // namespace

ordered_json to_json(const Vec& v) {
    ordered_json arr = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

ordered_json to_json(const TilingReport& r) {
    ordered_json doc;
    doc["expected_k"] = r.expected_k;
    if (r.k_observed) doc["k_observed"] = *r.k_observed;
    else doc["k_observed"] = "inconsistent";
    doc["samples_tested"] = r.samples_tested;
    doc["boundary_hits"] = r.boundary_hits;
    doc["failure_count"] = r.failure_count;
    ordered_json failures = ordered_json::array();
    for (const auto& f : r.failures) failures.push_back({{"point", to_json(f.point)}, {"multiplicity", f.multiplicity}});
    doc["failures"] = failures;
    doc["passed"] = r.passed();
    return doc;
}

ordered_json to_json(const CutProjectParams& p) {
    ordered_json doc;
    doc["d"] = p.d;
    doc["k"] = p.k;
    doc["alpha"] = to_json(p.alpha);
    doc["beta"] = to_json(p.beta);
    return doc;
}

ordered_json to_json(const AvdoninReport& r) {
    ordered_json doc;
    doc["k"] = r.k;
    doc["gap"] = r.gap;
    doc["delta_sup"] = r.delta_sup;
    doc["delta_bound"] = number(r.delta_bound);
    doc["c"] = r.c;
    doc["threshold"] = r.threshold;
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.deviations) {
        ordered_json entry;
        entry["N"] = row.N;
        entry["deviation"] = row.deviation;
        entry["unaligned_sup"] = row.unaligned_sup;
        entry["passes"] = row.passes;
        rows.push_back(entry);
    }
    doc["deviations"] = rows;
    doc["skipped_N"] = r.skipped_N;
    if (r.smallest_passing_N) doc["smallest_passing_N"] = *r.smallest_passing_N;
    else doc["smallest_passing_N"] = nullptr;
    doc["condition_a"] = r.condition_a();
    doc["condition_b"] = r.condition_b();
    doc["condition_c"] = r.condition_c();
    return doc;
}

ordered_json to_json(const FrameReport& r) {
    ordered_json doc;
    doc["kind"] = r.kind;
    doc["method"] = r.method;
    doc["order"] = r.order;
    doc["lambda_min"] = r.lambda_min;
    doc["lambda_max"] = r.lambda_max;
    doc["condition"] = number(r.condition);
    return doc;
}

ordered_json to_json(const TrendReport& t) {
    ordered_json doc;
    doc["side"] = t.side;
    ordered_json rows = ordered_json::array();
    for (const auto& row : t.rows) {
        ordered_json entry;
        entry["order"] = row.order;
        entry["gram"] = to_json(row.gram);
        if (row.completeness) entry["frame_operator"] = to_json(*row.completeness);
        rows.push_back(entry);
    }
    doc["rows"] = rows;
    doc["stability_ratio"] = number(t.stability_ratio);
    return doc;
}

ordered_json to_json(const DualityReport& r) {
    ordered_json doc;
    doc["order"] = r.order;
    doc["interval_side"] = to_json(r.one_d);
    doc["region_side"] = to_json(r.multi_d);
    doc["both_conditioned"] = r.both_conditioned;
    doc["diagnosis"] = r.diagnosis;
    return doc;
}

ordered_json to_json(const QuasicrystalPoints& q) {
    ordered_json doc;
    doc["window"] = {{"lo", to_json(q.window.lo)}, {"hi", to_json(q.window.hi)}};
    doc["interval"] = {q.interval_lo, q.interval_hi};
    doc["degenerate"] = q.degenerate;
    ordered_json pts = ordered_json::array();
    for (const auto& p : q.points) {
        ordered_json m = ordered_json::array();
        for (Eigen::Index i = 0; i < p.m.size(); ++i) m.push_back(p.m[i]);
        pts.push_back({{"point", to_json(p.point)}, {"m", m}, {"n", p.n}});
    }
    doc["points"] = pts;
    return doc;
}

ordered_json to_json(const BlockEnumeration& e) {
    ordered_json doc;
    doc["k"] = e.k;
    doc["n_first"] = e.n_first;
    doc["n_last"] = e.n_last;
    ordered_json entries = ordered_json::array();
    for (const auto& b : e.entries)
        entries.push_back({{"j", b.j}, {"n", b.n}, {"lambda", b.lambda}, {"delta", b.delta}});
    doc["entries"] = entries;
    return doc;
}

std::string points_csv(const std::vector<Vec>& points, const std::string& prefix) {
    std::ostringstream os;
    const Eigen::Index d = points.empty() ? 0 : points.front().size();
    for (Eigen::Index i = 0; i < d; ++i) os << (i ? "," : "") << prefix << i;
    os << "\n";
    for (const auto& p : points) {
        for (Eigen::Index i = 0; i < d; ++i) os << (i ? "," : "") << format_double(p[i]);
        os << "\n";
    }
    return os.str();
}

std::string enumeration_csv(const BlockEnumeration& e) {
    std::ostringstream os;
    os << "j,n,lambda,delta\n";
    for (const auto& b : e.entries)
        os << b.j << "," << b.n << "," << format_double(b.lambda) << "," << format_double(b.delta) << "\n";
    return os.str();
}

std::string deviation_csv(const AvdoninReport& r) {
    std::ostringstream os;
    os << "N,deviation,threshold,unaligned_sup,passes\n";
    for (const auto& row : r.deviations)
        os << row.N << "," << format_double(row.deviation) << "," << format_double(r.threshold) << ","
           << format_double(row.unaligned_sup) << "," << (row.passes ? 1 : 0) << "\n";
    return os.str();
}

std::string trend_csv(const std::vector<TrendReport>& trends) {
    std::ostringstream os;
    os << "side,kind,order,lambda_min,lambda_max,condition\n";
    auto line = [&](const std::string& side, const TrendRow& row, const FrameReport& f) {
        os << side << "," << f.kind << "," << row.order << "," << format_double(f.lambda_min) << ","
           << format_double(f.lambda_max) << "," << format_double(f.condition) << "\n";
    };
    for (const auto& t : trends)
        for (const auto& row : t.rows) {
            line(t.side, row, row.gram);
            if (row.completeness) line(t.side, row, *row.completeness);
        }
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

}  // namespace quasibasis
