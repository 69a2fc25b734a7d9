#include "quasibasis/scenario.hpp"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "quasibasis/errors.hpp"

namespace quasibasis {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw InvalidInput(where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw InvalidInput("unknown field '" + key + "' in " + where);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw InvalidInput("missing field '" + key + "' in " + where);
    return *it;
}

Vec to_vec(const json& arr, int d, const std::string& what) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != d)
        throw InvalidInput(what + " must be an array of " + std::to_string(d) + " numbers");
    Vec v(d);
    for (int i = 0; i < d; ++i) {
        if (!arr[i].is_number()) throw InvalidInput(what + " must contain numbers");
        v[i] = arr[i].get<double>();
    }
    return v;
}

json from_vec(const Vec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

template <typename T>
T get_number(const json& value, const std::string& what) {
    if (!value.is_number()) throw InvalidInput(what + " must be a number");
    if constexpr (std::is_integral_v<T>) {
        if (!value.is_number_integer()) throw InvalidInput(what + " must be an integer");
        if (std::is_unsigned_v<T> && value.is_number_integer() && !value.is_number_unsigned() &&
            value.get<long long>() < 0)
            throw InvalidInput(what + " must be non-negative");
    }
    return value.get<T>();
}

SyntheticSequence parse_synthetic(const json& obj) {
    reject_unknown(obj, {"kind", "amplitude", "theta", "n_range", "c", "delta_bound"}, "synthetic");
    SyntheticSequence s;
    s.kind = require(obj, "kind", "synthetic").get<std::string>();
    if (s.kind != "lattice" && s.kind != "frac" && s.kind != "sine" && s.kind != "alternating")
        throw InvalidInput("unknown synthetic kind '" + s.kind + "'");
    if (obj.contains("amplitude")) s.amplitude = get_number<double>(obj["amplitude"], "amplitude");
    if (obj.contains("theta")) s.theta = get_number<double>(obj["theta"], "theta");
    s.n_range = get_number<long long>(require(obj, "n_range", "synthetic"), "n_range");
    if (s.n_range < 1) throw InvalidInput("synthetic n_range must be positive");
    if (obj.contains("c")) s.c = get_number<double>(obj["c"], "c");
    if (obj.contains("delta_bound")) s.delta_bound = get_number<double>(obj["delta_bound"], "delta_bound");
    return s;
}

}  // namespace

Scenario parse_scenario(const json& doc) {
    reject_unknown(doc,
                   {"schema_version", "name", "dim", "boxes", "lattice_basis", "k", "seed", "alpha", "beta",
                    "samples", "window_radius", "n_range", "orders", "deviation_grid", "control",
                    "synthetic"},
                   "scenario");
    Scenario s;
    s.schema_version = get_number<int>(require(doc, "schema_version", "scenario"), "schema_version");
    if (s.schema_version != kScenarioSchemaVersion)
        throw InvalidInput("unsupported schema_version " + std::to_string(s.schema_version));
    s.name = require(doc, "name", "scenario").get<std::string>();
    s.k = get_number<int>(require(doc, "k", "scenario"), "k");
    if (s.k < 1) throw InvalidInput("k must be at least 1");
    s.seed = get_number<std::uint64_t>(require(doc, "seed", "scenario"), "seed");

    if (doc.contains("synthetic")) {
        for (const char* key : {"dim", "boxes", "lattice_basis", "alpha", "beta"})
            if (doc.contains(key))
                throw InvalidInput(std::string("synthetic scenarios take no '") + key + "' field");
        s.synthetic = parse_synthetic(doc["synthetic"]);
    } else {
        s.dim = get_number<int>(require(doc, "dim", "scenario"), "dim");
        if (s.dim < 1) throw InvalidInput("dim must be at least 1");
        const json& boxes = require(doc, "boxes", "scenario");
        if (!boxes.is_array() || boxes.empty()) throw InvalidInput("boxes must be a non-empty array");
        for (const auto& b : boxes) {
            if (!b.is_array() || b.size() != 2) throw InvalidInput("each box is [[lo...], [hi...]]");
            s.boxes.push_back({to_vec(b[0], s.dim, "box lo"), to_vec(b[1], s.dim, "box hi")});
        }
        const json& basis = require(doc, "lattice_basis", "scenario");
        if (!basis.is_array() || static_cast<int>(basis.size()) != s.dim)
            throw InvalidInput("lattice_basis must list " + std::to_string(s.dim) + " generators");
        s.lattice_basis.resize(s.dim, s.dim);
        for (int j = 0; j < s.dim; ++j) s.lattice_basis.col(j) = to_vec(basis[j], s.dim, "lattice generator");
        if (doc.contains("alpha") != doc.contains("beta"))
            throw InvalidInput("alpha and beta must be given together");
        if (doc.contains("alpha")) {
            s.alpha = to_vec(doc["alpha"], s.dim, "alpha");
            s.beta = to_vec(doc["beta"], s.dim, "beta");
        }
    }

    if (doc.contains("samples")) s.samples = get_number<std::size_t>(doc["samples"], "samples");
    if (s.samples < 1) throw InvalidInput("samples must be at least 1");
    if (doc.contains("window_radius")) s.window_radius = get_number<double>(doc["window_radius"], "window_radius");
    if (!(s.window_radius >= 0.0)) throw InvalidInput("window_radius must be non-negative");
    if (doc.contains("n_range")) s.n_range = get_number<long long>(doc["n_range"], "n_range");
    if (s.n_range < 1) throw InvalidInput("n_range must be positive");
    if (doc.contains("orders")) {
        s.orders.clear();
        for (const auto& o : doc["orders"]) s.orders.push_back(get_number<std::size_t>(o, "order"));
    }
    if (s.orders.empty()) throw InvalidInput("orders must be non-empty");
    for (std::size_t i = 0; i < s.orders.size(); ++i) {
        if (s.orders[i] < 2) throw InvalidInput("orders must be at least 2");
        if (i > 0 && s.orders[i] <= s.orders[i - 1]) throw InvalidInput("orders must be strictly ascending");
    }
    if (doc.contains("deviation_grid")) {
        s.deviation_grid.clear();
        for (const auto& n : doc["deviation_grid"]) s.deviation_grid.push_back(get_number<long long>(n, "N"));
    }
    if (s.deviation_grid.empty()) throw InvalidInput("deviation_grid must be non-empty");
    for (std::size_t i = 0; i < s.deviation_grid.size(); ++i) {
        if (s.deviation_grid[i] < 1) throw InvalidInput("deviation_grid entries must be positive");
        if (i > 0 && s.deviation_grid[i] <= s.deviation_grid[i - 1])
            throw InvalidInput("deviation_grid must be strictly ascending");
    }
    if (doc.contains("control")) {
        const json& c = doc["control"];
        reject_unknown(c, {"kind", "amount"}, "control");
        s.control.kind = control_from_string(require(c, "kind", "control").get<std::string>());
        if (c.contains("amount")) s.control.amount = get_number<double>(c["amount"], "amount");
        if (s.control.kind == ControlKind::delete_fraction && !(s.control.amount > 0.0 && s.control.amount < 1.0))
            throw InvalidInput("delete_fraction amount must lie in (0, 1)");
    }
    s.control.seed = s.seed;
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open scenario file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput("scenario file " + path.string() + " is not valid JSON: " + e.what());
    }
    try {
        return parse_scenario(doc);
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("scenario schema error: ") + e.what());
    }
}

ordered_json scenario_to_json(const Scenario& s) {
    ordered_json doc;
    doc["schema_version"] = s.schema_version;
    doc["name"] = s.name;
    if (s.synthetic) {
        ordered_json syn;
        syn["kind"] = s.synthetic->kind;
        syn["amplitude"] = s.synthetic->amplitude;
        syn["theta"] = s.synthetic->theta;
        syn["n_range"] = s.synthetic->n_range;
        syn["c"] = s.synthetic->c;
        syn["delta_bound"] = s.synthetic->delta_bound;
        doc["synthetic"] = syn;
    } else {
        doc["dim"] = s.dim;
        ordered_json boxes = ordered_json::array();
        for (const auto& b : s.boxes) boxes.push_back(ordered_json::array({ordered_json(from_vec(b.lo)), ordered_json(from_vec(b.hi))}));
        doc["boxes"] = boxes;
        ordered_json basis = ordered_json::array();
        for (int j = 0; j < s.dim; ++j) basis.push_back(ordered_json(from_vec(s.lattice_basis.col(j))));
        doc["lattice_basis"] = basis;
    }
    doc["k"] = s.k;
    doc["seed"] = s.seed;
    if (s.alpha) {
        doc["alpha"] = ordered_json(from_vec(*s.alpha));
        doc["beta"] = ordered_json(from_vec(*s.beta));
    }
    doc["samples"] = s.samples;
    doc["window_radius"] = s.window_radius;
    doc["n_range"] = s.n_range;
    doc["orders"] = s.orders;
    doc["deviation_grid"] = s.deviation_grid;
    doc["control"] = {{"kind", to_string(s.control.kind)}, {"amount", s.control.amount}};
    return doc;
}

std::string scenario_digest(const Scenario& scenario) {
    const std::string text = scenario_to_json(scenario).dump();
    unsigned char hash[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(text.data(), text.size(), hash, &length, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < length; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(hash[i]);
    return os.str();
}

std::vector<std::string> bundled_demo_names() {
    return {"cube", "two-intervals", "four-squares", "commensurable-intervals"};
}

Scenario bundled_demo(const std::string& name) {
    json doc;
    if (name == "cube") {
        doc = R"({"schema_version": 1, "name": "cube", "dim": 3,
                  "boxes": [[[0, 0, 0], [1, 1, 1]]],
                  "lattice_basis": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
                  "k": 1, "seed": 7, "window_radius": 4})"_json;
    } else if (name == "two-intervals") {
        doc = R"({"schema_version": 1, "name": "two-intervals", "dim": 1,
                  "boxes": [[[0], [1]], [[2], [3]]],
                  "lattice_basis": [[1]],
                  "k": 2, "seed": 7, "window_radius": 50})"_json;
    } else if (name == "four-squares") {
        doc = R"({"schema_version": 1, "name": "four-squares", "dim": 2,
                  "boxes": [[[0, 0], [1, 1]], [[1, 0], [2, 1]], [[0, 1], [1, 2]], [[2, 2], [3, 3]]],
                  "lattice_basis": [[1, 0], [0, 1]],
                  "k": 4, "seed": 7, "window_radius": 6})"_json;
    } else if (name == "commensurable-intervals") {
        doc = R"({"schema_version": 1, "name": "commensurable-intervals", "dim": 1,
                  "boxes": [[[0], [0.5]], [[1], [2]], [[3.5], [4]]],
                  "lattice_basis": [[0.5]],
                  "k": 4, "seed": 7, "window_radius": 25})"_json;
    } else {
        throw InvalidInput("unknown demo '" + name + "'");
    }
    return parse_scenario(doc);
}

}  // namespace quasibasis
