#include "phiconv/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "phiconv/bauer.hpp"
#include "phiconv/convexity.hpp"
#include "phiconv/linprog.hpp"
#include "phiconv/perturb.hpp"

namespace phiconv {

using njson = nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw PhiError(ErrorKind::ParseError, "at '" + path + "': " + what);
}

const njson& require_key(const njson& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "." + key, "missing key");
    return *it;
}

double as_number(const njson& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

int as_int(const njson& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

bool as_bool(const njson& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected a boolean");
    return j.get<bool>();
}

std::string as_string(const njson& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

Vector as_vector(const njson& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of numbers");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (size_t i = 0; i < j.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = as_number(j[i], path + "[" + std::to_string(i) + "]");
    }
    return v;
}

Matrix as_matrix(const njson& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a nonempty array of rows");
    const size_t cols = j[0].is_array() ? j[0].size() : 0;
    if (cols == 0) fail(path + "[0]", "expected a nonempty row");
    Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (size_t r = 0; r < j.size(); ++r) {
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != cols) fail(rp, "ragged row");
        for (size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                as_number(j[r][c], rp + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

std::vector<int> as_index_list(const njson& j, const std::string& path, int cloud_size) {
    if (!j.is_array()) fail(path, "expected an array of indices");
    std::vector<int> out;
    for (size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const int v = as_int(j[i], p);
        if (v < 0 || v >= cloud_size) fail(p, "index out of range");
        out.push_back(v);
    }
    return out;
}

int checked_index(const njson& j, const std::string& path, int cloud_size) {
    const int v = as_int(j, path);
    if (v < 0 || v >= cloud_size) fail(path, "index out of range");
    return v;
}

GridSpec parse_grid(const njson& j, const std::string& path) {
    GridSpec g;
    g.width = as_int(require_key(j, "width", path), path + ".width");
    g.height = as_int(require_key(j, "height", path), path + ".height");
    g.spacing = j.contains("spacing") ? as_number(j["spacing"], path + ".spacing") : 1.0;
    if (g.width < 3 || g.height < 3) fail(path, "grid width and height must be >= 3");
    if (!(g.spacing > 0.0)) fail(path + ".spacing", "spacing must be positive");
    return g;
}

TaskKind parse_task_kind(const std::string& name, const std::string& path) {
    if (name == "between") return TaskKind::Between;
    if (name == "convexity-check") return TaskKind::ConvexityCheck;
    if (name == "extremal") return TaskKind::Extremal;
    if (name == "exposed") return TaskKind::Exposed;
    if (name == "hull") return TaskKind::Hull;
    if (name == "bauer") return TaskKind::Bauer;
    if (name == "common-max") return TaskKind::CommonMax;
    if (name == "omega") return TaskKind::Omega;
    if (name == "perturb") return TaskKind::Perturb;
    if (name == "strong-max") return TaskKind::StrongMax;
    if (name == "genericity") return TaskKind::Genericity;
    fail(path, "unknown task '" + name + "'");
}

} // namespace

const char* task_name(TaskKind kind) {
    switch (kind) {
    case TaskKind::Between:        return "between";
    case TaskKind::ConvexityCheck: return "convexity-check";
    case TaskKind::Extremal:       return "extremal";
    case TaskKind::Exposed:        return "exposed";
    case TaskKind::Hull:           return "hull";
    case TaskKind::Bauer:          return "bauer";
    case TaskKind::CommonMax:      return "common-max";
    case TaskKind::Omega:          return "omega";
    case TaskKind::Perturb:        return "perturb";
    case TaskKind::StrongMax:      return "strong-max";
    case TaskKind::Genericity:     return "genericity";
    }
    return "?";
}

bool CloudSpec::operator==(const CloudSpec& other) const {
    auto opt_eq = [](const auto& a, const auto& b) {
        if (a.has_value() != b.has_value()) return false;
        return !a.has_value() || *a == *b;
    };
    return opt_eq(points, other.points) && opt_eq(metric, other.metric) &&
           grid == other.grid;
}

bool ScenarioConfig::operator==(const ScenarioConfig& other) const {
    return cloud == other.cloud && family == other.family && functions == other.functions &&
           task == other.task && tolerances.lp_feas == other.tolerances.lp_feas &&
           tolerances.argmax_tie == other.tolerances.argmax_tie &&
           tolerances.unique_gap == other.tolerances.unique_gap &&
           tolerances.geom_tol == other.tolerances.geom_tol &&
           check_convexity == other.check_convexity;
}

namespace {

// The validated cloud plus the grid effectively in force for harmonic runs.
struct CloudBuild {
    PointCloud cloud;
    std::optional<GridSpec> grid;
};

CloudBuild build_cloud(const ScenarioConfig& cfg) {
    std::optional<GridSpec> grid = cfg.family.grid ? cfg.family.grid : cfg.cloud.grid;
    if (cfg.cloud.points) {
        PointCloud cloud = cfg.cloud.metric
                               ? PointCloud::with_metric(*cfg.cloud.points, *cfg.cloud.metric)
                               : PointCloud::euclidean(*cfg.cloud.points);
        return {std::move(cloud), std::move(grid)};
    }
    if (!grid) {
        throw PhiError(ErrorKind::ParseError, "at 'cloud': needs points or a grid");
    }
    return {grid->make_cloud(), grid};
}

ScalarField realize_function(const FunctionSpec& spec, const PointCloud& cloud) {
    if (const auto* v = std::get_if<ValuesSpec>(&spec)) {
        return ScalarField(v->values);
    }
    if (const auto* q = std::get_if<QuadraticSpec>(&spec)) {
        Vector out(cloud.size());
        for (int i = 0; i < cloud.size(); ++i) {
            const Vector d = cloud.point(i) - q->center;
            out(i) = d.dot(q->matrix * d);
        }
        return ScalarField(out);
    }
    if (const auto* l = std::get_if<LinearSpec>(&spec)) {
        return ScalarField(cloud.points() * l->direction);
    }
    const auto& c = std::get<ConstantSpec>(spec);
    return ScalarField(Vector::Constant(cloud.size(), c.value));
}

} // namespace

ScenarioConfig parse_scenario(const std::string& text) {
    njson root;
    try {
        root = njson::parse(text);
    } catch (const njson::exception& e) {
        throw PhiError(ErrorKind::ParseError, std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) fail("$", "scenario must be a JSON object");

    ScenarioConfig cfg;

    // cloud
    const njson& jcloud = require_key(root, "cloud", "$");
    const bool has_points = jcloud.contains("points");
    const bool has_grid = jcloud.contains("grid");
    if (has_points == has_grid) fail("cloud", "give exactly one of 'points' or 'grid'");
    if (has_points) {
        cfg.cloud.points = as_matrix(jcloud["points"], "cloud.points");
        if (jcloud.contains("metric")) {
            const njson& jm = jcloud["metric"];
            if (jm.is_string()) {
                if (as_string(jm, "cloud.metric") != "euclidean") {
                    fail("cloud.metric", "expected \"euclidean\" or a distance matrix");
                }
            } else {
                cfg.cloud.metric = as_matrix(jm, "cloud.metric");
            }
        }
    } else {
        cfg.cloud.grid = parse_grid(jcloud["grid"], "cloud.grid");
    }

    const int cloud_size = cfg.cloud.points
                               ? static_cast<int>(cfg.cloud.points->rows())
                               : cfg.cloud.grid->node_count();
    const int dim = cfg.cloud.points ? static_cast<int>(cfg.cloud.points->cols()) : 2;
    if (cfg.cloud.metric && (cfg.cloud.metric->rows() != cloud_size ||
                             cfg.cloud.metric->cols() != cloud_size)) {
        fail("cloud.metric", "distance matrix must be N x N");
    }

    // family
    const njson& jfam = require_key(root, "family", "$");
    const std::string kind = as_string(require_key(jfam, "kind", "family"), "family.kind");
    if (kind == "affine") {
        cfg.family.kind = FamilyKind::Affine;
    } else if (kind == "polynomial") {
        cfg.family.kind = FamilyKind::Polynomial;
        cfg.family.degree = as_int(require_key(jfam, "degree", "family"), "family.degree");
        if (cfg.family.degree < 1) fail("family.degree", "degree must be >= 1");
    } else if (kind == "lipschitz") {
        cfg.family.kind = FamilyKind::Lipschitz;
        cfg.family.basepoint = jfam.contains("basepoint")
                                   ? checked_index(jfam["basepoint"], "family.basepoint",
                                                   cloud_size)
                                   : 0;
        if (jfam.contains("full")) cfg.family.lip_full = as_bool(jfam["full"], "family.full");
    } else if (kind == "harmonic") {
        cfg.family.kind = FamilyKind::Harmonic;
        if (jfam.contains("grid")) cfg.family.grid = parse_grid(jfam["grid"], "family.grid");
        const std::optional<GridSpec> effective =
            cfg.family.grid ? cfg.family.grid : cfg.cloud.grid;
        if (!effective) fail("family.grid", "harmonic family needs a grid");
        if (cfg.cloud.points) {
            const PointCloud probe = PointCloud::euclidean(*cfg.cloud.points);
            if (!effective->matches_cloud(probe)) fail("family.grid", "cloud/grid mismatch");
        }
    } else {
        fail("family.kind", "unknown family kind '" + kind + "'");
    }

    // functions
    if (root.contains("functions")) {
        const njson& jfns = root["functions"];
        if (!jfns.is_array()) fail("functions", "expected an array");
        for (size_t i = 0; i < jfns.size(); ++i) {
            const std::string p = "functions[" + std::to_string(i) + "]";
            const njson& jf = jfns[i];
            if (!jf.is_object()) fail(p, "expected an object");
            if (jf.contains("values")) {
                ValuesSpec v{as_vector(jf["values"], p + ".values")};
                if (v.values.size() != cloud_size) fail(p + ".values", "length != cloud size");
                cfg.functions.emplace_back(std::move(v));
            } else if (jf.contains("generator")) {
                const std::string gen = as_string(jf["generator"], p + ".generator");
                if (gen == "quadratic") {
                    QuadraticSpec q;
                    q.matrix = as_matrix(require_key(jf, "matrix", p), p + ".matrix");
                    q.center = as_vector(require_key(jf, "center", p), p + ".center");
                    if (q.matrix.rows() != dim || q.matrix.cols() != dim) {
                        fail(p + ".matrix", "must be dim x dim");
                    }
                    if (q.center.size() != dim) fail(p + ".center", "must have length dim");
                    cfg.functions.emplace_back(std::move(q));
                } else if (gen == "linear") {
                    LinearSpec l;
                    l.direction = as_vector(require_key(jf, "direction", p), p + ".direction");
                    if (l.direction.size() != dim) fail(p + ".direction", "must have length dim");
                    cfg.functions.emplace_back(std::move(l));
                } else if (gen == "constant") {
                    ConstantSpec c;
                    c.value = as_number(require_key(jf, "value", p), p + ".value");
                    cfg.functions.emplace_back(c);
                } else {
                    fail(p + ".generator", "unknown generator '" + gen + "'");
                }
            } else {
                fail(p, "expected 'values' or 'generator'");
            }
        }
    }

    // task
    const njson& jtask = require_key(root, "task", "$");
    const std::string tname = as_string(require_key(jtask, "name", "task"), "task.name");
    cfg.task.kind = parse_task_kind(tname, "task.name");
    if (jtask.contains("domain")) {
        cfg.task.domain = as_index_list(jtask["domain"], "task.domain", cloud_size);
        if (cfg.task.domain->empty()) fail("task.domain", "domain must be nonempty");
    }
    switch (cfg.task.kind) {
    case TaskKind::Between:
        cfg.task.a = checked_index(require_key(jtask, "a", "task"), "task.a", cloud_size);
        cfg.task.x = checked_index(require_key(jtask, "x", "task"), "task.x", cloud_size);
        cfg.task.y = checked_index(require_key(jtask, "y", "task"), "task.y", cloud_size);
        break;
    case TaskKind::Omega:
        cfg.task.x = checked_index(require_key(jtask, "x", "task"), "task.x", cloud_size);
        break;
    case TaskKind::Hull:
        cfg.task.hull_set =
            as_index_list(require_key(jtask, "set", "task"), "task.set", cloud_size);
        if (cfg.task.hull_set.empty()) fail("task.set", "the hull set must be nonempty");
        if (jtask.contains("ambient")) {
            cfg.task.ambient = as_index_list(jtask["ambient"], "task.ambient", cloud_size);
        }
        break;
    case TaskKind::Perturb:
    case TaskKind::Genericity:
        cfg.task.epsilon =
            as_number(require_key(jtask, "epsilon", "task"), "task.epsilon");
        if (!(cfg.task.epsilon > 0.0 && cfg.task.epsilon < 1.0)) {
            fail("task.epsilon", "epsilon must lie in (0, 1)");
        }
        if (cfg.task.kind == TaskKind::Genericity) {
            cfg.task.samples =
                as_int(require_key(jtask, "samples", "task"), "task.samples");
            if (cfg.task.samples < 1) fail("task.samples", "samples must be >= 1");
            if (jtask.contains("seed")) {
                const auto& js = jtask["seed"];
                if (!js.is_number_integer()) fail("task.seed", "expected an integer");
                cfg.task.seed = js.get<std::uint64_t>();
            }
        }
        break;
    case TaskKind::StrongMax:
        cfg.task.n = as_int(require_key(jtask, "n", "task"), "task.n");
        if (cfg.task.n < 1) fail("task.n", "n must be >= 1");
        break;
    default:
        break;
    }

    // function-count requirements
    const size_t nfun = cfg.functions.size();
    switch (cfg.task.kind) {
    case TaskKind::ConvexityCheck:
    case TaskKind::Bauer:
    case TaskKind::Perturb:
    case TaskKind::StrongMax:
    case TaskKind::Genericity:
    case TaskKind::CommonMax:
    case TaskKind::Omega:
        if (nfun == 0) fail("functions", "this task needs at least one function");
        break;
    default:
        break;
    }

    // tolerances
    if (root.contains("tolerances")) {
        const njson& jt = root["tolerances"];
        if (!jt.is_object()) fail("tolerances", "expected an object");
        auto grab = [&](const char* key, double& slot) {
            if (jt.contains(key)) slot = as_number(jt[key], std::string("tolerances.") + key);
        };
        grab("lpFeas", cfg.tolerances.lp_feas);
        grab("argmaxTie", cfg.tolerances.argmax_tie);
        grab("uniqueGap", cfg.tolerances.unique_gap);
        grab("geomTol", cfg.tolerances.geom_tol);
        try {
            cfg.tolerances.validate();
        } catch (const PhiError& e) {
            fail("tolerances", e.detail());
        }
    }

    if (root.contains("checkConvexity")) {
        cfg.check_convexity = as_bool(root["checkConvexity"], "checkConvexity");
    }

    // Deep validation of the cloud itself (duplicates, metric axioms, grids).
    try {
        build_cloud(cfg);
    } catch (const PhiError& e) {
        if (e.kind() == ErrorKind::ParseError) throw;
        fail("cloud", e.detail());
    }
    return cfg;
}

namespace {

JsonValue vector_json(const Vector& v) {
    JsonValue arr = JsonValue::array();
    for (int i = 0; i < v.size(); ++i) arr.push(JsonValue::of(v(i)));
    return arr;
}

JsonValue matrix_json(const Matrix& m) {
    JsonValue rows = JsonValue::array();
    for (int r = 0; r < m.rows(); ++r) {
        JsonValue row = JsonValue::array();
        for (int c = 0; c < m.cols(); ++c) row.push(JsonValue::of(m(r, c)));
        rows.push(std::move(row));
    }
    return rows;
}

JsonValue index_json(const std::vector<int>& v) {
    JsonValue arr = JsonValue::array();
    for (int i : v) arr.push(JsonValue::of(i));
    return arr;
}

JsonValue grid_json(const GridSpec& g) {
    JsonValue j = JsonValue::object();
    j.set("width", JsonValue::of(g.width));
    j.set("height", JsonValue::of(g.height));
    j.set("spacing", JsonValue::of(g.spacing));
    return j;
}

} // namespace

std::string serialize_scenario(const ScenarioConfig& cfg) {
    JsonValue root = JsonValue::object();

    JsonValue jcloud = JsonValue::object();
    if (cfg.cloud.points) {
        jcloud.set("points", matrix_json(*cfg.cloud.points));
        if (cfg.cloud.metric) jcloud.set("metric", matrix_json(*cfg.cloud.metric));
    } else {
        jcloud.set("grid", grid_json(*cfg.cloud.grid));
    }
    root.set("cloud", std::move(jcloud));

    JsonValue jfam = JsonValue::object();
    switch (cfg.family.kind) {
    case FamilyKind::Affine:
        jfam.set("kind", JsonValue::of("affine"));
        break;
    case FamilyKind::Polynomial:
        jfam.set("kind", JsonValue::of("polynomial"));
        jfam.set("degree", JsonValue::of(cfg.family.degree));
        break;
    case FamilyKind::Lipschitz:
        jfam.set("kind", JsonValue::of("lipschitz"));
        jfam.set("basepoint", JsonValue::of(cfg.family.basepoint));
        jfam.set("full", JsonValue::of(cfg.family.lip_full));
        break;
    case FamilyKind::Harmonic:
        jfam.set("kind", JsonValue::of("harmonic"));
        if (cfg.family.grid) jfam.set("grid", grid_json(*cfg.family.grid));
        break;
    case FamilyKind::Custom:
        throw PhiError(ErrorKind::InvalidArgument, "custom families have no scenario form");
    }
    root.set("family", std::move(jfam));

    JsonValue jfns = JsonValue::array();
    for (const auto& f : cfg.functions) {
        JsonValue jf = JsonValue::object();
        if (const auto* v = std::get_if<ValuesSpec>(&f)) {
            jf.set("values", vector_json(v->values));
        } else if (const auto* q = std::get_if<QuadraticSpec>(&f)) {
            jf.set("generator", JsonValue::of("quadratic"));
            jf.set("matrix", matrix_json(q->matrix));
            jf.set("center", vector_json(q->center));
        } else if (const auto* l = std::get_if<LinearSpec>(&f)) {
            jf.set("generator", JsonValue::of("linear"));
            jf.set("direction", vector_json(l->direction));
        } else {
            jf.set("generator", JsonValue::of("constant"));
            jf.set("value", JsonValue::of(std::get<ConstantSpec>(f).value));
        }
        jfns.push(std::move(jf));
    }
    root.set("functions", std::move(jfns));

    JsonValue jtask = JsonValue::object();
    jtask.set("name", JsonValue::of(task_name(cfg.task.kind)));
    switch (cfg.task.kind) {
    case TaskKind::Between:
        jtask.set("a", JsonValue::of(cfg.task.a));
        jtask.set("x", JsonValue::of(cfg.task.x));
        jtask.set("y", JsonValue::of(cfg.task.y));
        break;
    case TaskKind::Omega:
        jtask.set("x", JsonValue::of(cfg.task.x));
        break;
    case TaskKind::Hull:
        jtask.set("set", index_json(cfg.task.hull_set));
        if (cfg.task.ambient) jtask.set("ambient", index_json(*cfg.task.ambient));
        break;
    case TaskKind::Perturb:
        jtask.set("epsilon", JsonValue::of(cfg.task.epsilon));
        break;
    case TaskKind::Genericity:
        jtask.set("epsilon", JsonValue::of(cfg.task.epsilon));
        jtask.set("samples", JsonValue::of(cfg.task.samples));
        jtask.set("seed", JsonValue::of(cfg.task.seed));
        break;
    case TaskKind::StrongMax:
        jtask.set("n", JsonValue::of(cfg.task.n));
        break;
    default:
        break;
    }
    if (cfg.task.domain) jtask.set("domain", index_json(*cfg.task.domain));
    root.set("task", std::move(jtask));

    JsonValue jtol = JsonValue::object();
    jtol.set("lpFeas", JsonValue::of(cfg.tolerances.lp_feas));
    jtol.set("argmaxTie", JsonValue::of(cfg.tolerances.argmax_tie));
    jtol.set("uniqueGap", JsonValue::of(cfg.tolerances.unique_gap));
    jtol.set("geomTol", JsonValue::of(cfg.tolerances.geom_tol));
    root.set("tolerances", std::move(jtol));
    root.set("checkConvexity", JsonValue::of(cfg.check_convexity));

    return root.dump();
}

namespace {

JsonValue exposure_json(const ExposureCertificate& cert) {
    JsonValue j = JsonValue::object();
    j.set("point", JsonValue::of(cert.point));
    j.set("coefficients", vector_json(cert.coefficients));
    j.set("margin", JsonValue::of(cert.margin));
    return j;
}

JsonValue witness_json(const BauerWitness& w) {
    JsonValue j = JsonValue::object();
    j.set("point", JsonValue::of(w.point));
    j.set("maxValue", JsonValue::of(w.max_value));
    j.set("functionsChecked", JsonValue::of(w.functions_checked));
    if (w.exposure) j.set("exposure", exposure_json(*w.exposure));
    return j;
}

// Emitted certificates must replay against the family before serialization.
void replay_exposure(const ExposureCertificate& cert, const FunctionFamily& family,
                     const IndexSet& domain, const Tolerances& tol) {
    const Vector values = family.basis().transpose() * cert.coefficients;
    for (int q : domain) {
        if (q == cert.point) continue;
        if (values(cert.point) < values(q) + cert.margin - tol.lp_feas) {
            throw PhiError(ErrorKind::NoExposedPoint,
                           "certificate replay failed before emission");
        }
    }
}

struct TaskOutput {
    JsonValue payload = JsonValue::object();
    ReportStatus status = ReportStatus::Ok;
    std::string warn_kind;
    std::string warn_detail;
    std::optional<std::string> csv;
};

TaskOutput run_task(const ScenarioConfig& cfg) {
    const CloudBuild built = build_cloud(cfg);
    const PointCloud& cloud = built.cloud;

    FamilySpec fam_spec = cfg.family;
    if (fam_spec.kind == FamilyKind::Harmonic && !fam_spec.grid) fam_spec.grid = built.grid;
    const FunctionFamily family = build_family(fam_spec, cloud);

    std::vector<ScalarField> fields;
    fields.reserve(cfg.functions.size());
    for (const auto& f : cfg.functions) fields.push_back(realize_function(f, cloud));

    const IndexSet domain = cfg.task.domain
                                ? IndexSet::of(*cfg.task.domain, cloud.size())
                                : IndexSet::full(cloud.size());
    const Tolerances& tol = cfg.tolerances;

    TaskOutput out;
    switch (cfg.task.kind) {
    case TaskKind::Between: {
        const BetweennessCertificate r =
            is_between(cfg.task.a, cfg.task.x, cfg.task.y, family, tol);
        out.payload.set("result", JsonValue::of(r.between ? "between" : "notBetween"));
        if (r.witness) {
            const Vector values = family.basis().transpose() * (*r.witness);
            const double mx = values(cfg.task.a) - values(cfg.task.x);
            const double my = values(cfg.task.a) - values(cfg.task.y);
            if (mx < -tol.lp_feas || my < -tol.lp_feas || mx + my < 1.0 - tol.lp_feas) {
                throw PhiError(ErrorKind::NoExposedPoint,
                               "betweenness witness failed replay");
            }
            out.payload.set("witness", vector_json(*r.witness));
        }
        break;
    }
    case TaskKind::ConvexityCheck: {
        const ConvexityCheck r = is_phi_convex(fields.at(0), domain, family, tol);
        out.payload.set("convex", JsonValue::of(r.convex));
        if (r.violating_triple) {
            JsonValue t = JsonValue::object();
            t.set("a", JsonValue::of((*r.violating_triple)[0]));
            t.set("x", JsonValue::of((*r.violating_triple)[1]));
            t.set("y", JsonValue::of((*r.violating_triple)[2]));
            out.payload.set("violation", std::move(t));
        }
        break;
    }
    case TaskKind::Extremal: {
        const IndexSet pts = phi_extremal_points(domain, family, tol);
        out.payload.set("points", index_json(pts.values()));
        break;
    }
    case TaskKind::Exposed: {
        const ExposedPointsResult r = phi_exposed_points(domain, family, tol);
        out.payload.set("separating", JsonValue::of(r.separating));
        out.payload.set("points", index_json(r.point_set(cloud.size()).values()));
        JsonValue certs = JsonValue::array();
        for (const auto& c : r.certificates) {
            replay_exposure(c, family, domain, tol);
            certs.push(exposure_json(c));
        }
        out.payload.set("certificates", std::move(certs));
        if (!r.separating) {
            out.status = ReportStatus::Warning;
            out.warn_kind = error_kind_name(ErrorKind::NonSeparatingFamily);
            out.warn_detail =
                "family does not separate points " +
                std::to_string(r.non_separated_pair->first) + " and " +
                std::to_string(r.non_separated_pair->second);
        }
        break;
    }
    case TaskKind::Hull: {
        const IndexSet ambient = cfg.task.ambient
                                     ? IndexSet::of(*cfg.task.ambient, cloud.size())
                                     : IndexSet::full(cloud.size());
        const IndexSet a_set = IndexSet::of(cfg.task.hull_set, cloud.size());
        const IndexSet hull = phi_convex_hull(a_set, ambient, family, tol);
        out.payload.set("points", index_json(hull.values()));
        break;
    }
    case TaskKind::Bauer: {
        const BauerWitness w =
            bauer_witness(fields.at(0), domain, family, tol, cfg.check_convexity);
        if (w.exposure) replay_exposure(*w.exposure, family, argmax_set(fields.at(0), domain, tol), tol);
        out.payload = witness_json(w);
        break;
    }
    case TaskKind::CommonMax: {
        const BauerWitness w =
            common_extremal_maximizer(fields, domain, family, tol, cfg.check_convexity);
        out.payload = witness_json(w);
        break;
    }
    case TaskKind::Omega: {
        const BauerWitness w = omega_cone_witness(cfg.task.x, fields, domain, family, tol,
                                                  cfg.check_convexity);
        out.payload = witness_json(w);
        break;
    }
    case TaskKind::Perturb: {
        const PerturbationResult r =
            perturb_to_unique_max(fields.at(0), domain, family, cfg.task.epsilon, tol);
        out.payload.set("coefficients", vector_json(r.coefficients));
        out.payload.set("rhoDistance", JsonValue::of(r.rho_distance));
        out.payload.set("uniquePoint", JsonValue::of(r.unique_point));
        if (std::isfinite(r.gap)) out.payload.set("gap", JsonValue::of(r.gap));
        break;
    }
    case TaskKind::StrongMax: {
        const std::optional<int> r =
            has_strong_max(fields.at(0), domain, cfg.task.n, cloud, tol);
        out.payload.set("found", JsonValue::of(r.has_value()));
        if (r) out.payload.set("point", JsonValue::of(*r));
        break;
    }
    case TaskKind::Genericity: {
        if (cfg.check_convexity) {
            const ConvexityCheck cc = is_phi_convex(fields.at(0), domain, family, tol);
            if (!cc.convex) {
                out.status = ReportStatus::Warning;
                out.warn_kind = error_kind_name(ErrorKind::NotPhiConvex);
                out.warn_detail = "f is not Phi-convex; extremalFraction is informational";
            }
        }
        const GenericityReport r =
            genericity_estimate(fields.at(0), domain, family, cfg.task.epsilon,
                                cfg.task.samples, cfg.task.seed, tol);
        out.payload.set("samples", JsonValue::of(r.samples));
        out.payload.set("uniqueFraction", JsonValue::of(r.unique_fraction));
        out.payload.set("extremalFraction", JsonValue::of(r.extremal_fraction));
        out.payload.set("seed", JsonValue::of(r.seed));
        out.payload.set("epsilon", JsonValue::of(r.epsilon));

        std::string csv = "sample,unique,argmax,extremal\n";
        for (size_t k = 0; k < r.records.size(); ++k) {
            const auto& row = r.records[k];
            csv += std::to_string(k) + "," + (row.unique ? "1" : "0") + "," +
                   std::to_string(row.argmax) + "," + (row.extremal ? "1" : "0") + "\n";
        }
        out.csv = std::move(csv);
        break;
    }
    }
    return out;
}

} // namespace

Report execute_scenario(const ScenarioConfig& cfg) {
    Report report;
    report.task = task_name(cfg.task.kind);
    report.tolerances = cfg.tolerances;
    try {
        TaskOutput out = run_task(cfg);
        report.status = out.status;
        report.error_kind = out.warn_kind;
        report.error_detail = out.warn_detail;
        report.payload = std::move(out.payload);
        report.csv = std::move(out.csv);
    } catch (const PhiError& e) {
        report.status = ReportStatus::Error;
        report.error_kind = error_kind_name(e.kind());
        report.error_detail = e.detail();
        report.payload = JsonValue::object();
    } catch (const std::exception& e) {
        report.status = ReportStatus::Error;
        report.error_kind = "Internal";
        report.error_detail = e.what();
        report.payload = JsonValue::object();
    }
    return report;
}

std::string report_to_json(const Report& report) {
    JsonValue root = JsonValue::object();
    root.set("version", JsonValue::of("1"));
    root.set("task", JsonValue::of(report.task));
    const char* status = report.status == ReportStatus::Ok        ? "ok"
                         : report.status == ReportStatus::Warning ? "warning"
                                                                  : "error";
    root.set("status", JsonValue::of(status));
    if (report.status != ReportStatus::Ok) {
        root.set("errorKind", JsonValue::of(report.error_kind));
        root.set("errorDetail", JsonValue::of(report.error_detail));
    }
    JsonValue jtol = JsonValue::object();
    jtol.set("lpFeas", JsonValue::of(report.tolerances.lp_feas));
    jtol.set("argmaxTie", JsonValue::of(report.tolerances.argmax_tie));
    jtol.set("uniqueGap", JsonValue::of(report.tolerances.unique_gap));
    jtol.set("geomTol", JsonValue::of(report.tolerances.geom_tol));
    root.set("tolerances", std::move(jtol));
    root.set("payload", report.payload);
    return root.dump() + "\n";
}

int run_scenario_file(const RunOptions& options, std::string& stdout_text,
                      std::string& stderr_text) {
    Report report;
    try {
        std::ifstream in(options.scenario_path);
        if (!in) {
            throw PhiError(ErrorKind::InvalidArgument,
                           "cannot read scenario file '" + options.scenario_path + "'");
        }
        std::ostringstream buf;
        buf << in.rdbuf();

        ScenarioConfig cfg = parse_scenario(buf.str());
        if (options.seed_override) cfg.task.seed = *options.seed_override;
        if (options.lip_full && cfg.family.kind == FamilyKind::Lipschitz) {
            cfg.family.lip_full = true;
        }
        report = execute_scenario(cfg);
    } catch (const PhiError& e) {
        report.status = ReportStatus::Error;
        report.error_kind = error_kind_name(e.kind());
        report.error_detail = e.detail();
        report.payload = JsonValue::object();
    }

    const std::string json = report_to_json(report);
    if (options.out_path) {
        std::ofstream out(*options.out_path);
        if (!out) {
            stderr_text += "cannot write report to '" + *options.out_path + "'\n";
            return 1;
        }
        out << json;
    } else {
        stdout_text += json;
    }

    if (options.csv_path) {
        if (report.csv) {
            std::ofstream csv(*options.csv_path);
            if (!csv) {
                stderr_text += "cannot write CSV to '" + *options.csv_path + "'\n";
                return 1;
            }
            csv << *report.csv;
        } else {
            stderr_text += "--csv applies to genericity tasks only; no CSV written\n";
        }
    }
    return report.status == ReportStatus::Error ? 1 : 0;
}

} // namespace phiconv
