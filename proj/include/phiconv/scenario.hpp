#ifndef PHICONV_SCENARIO_HPP
#define PHICONV_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "phiconv/core.hpp"
#include "phiconv/families.hpp"
#include "phiconv/json_writer.hpp"

namespace phiconv {

/// Inline point list (with optional explicit metric) or a grid. Exactly one
/// of `points` / `grid` must be present.
struct CloudSpec {
    std::optional<Matrix> points;  // N x n
    std::optional<Matrix> metric;  // N x N explicit distances; requires points
    std::optional<GridSpec> grid;

    bool operator==(const CloudSpec& other) const;
};

struct ValuesSpec {
    Vector values;
    bool operator==(const ValuesSpec& o) const { return values == o.values; }
};
struct QuadraticSpec { // f(p) = (p - center)^T matrix (p - center)
    Matrix matrix;
    Vector center;
    bool operator==(const QuadraticSpec& o) const {
        return matrix == o.matrix && center == o.center;
    }
};
struct LinearSpec { // f(p) = direction . p
    Vector direction;
    bool operator==(const LinearSpec& o) const { return direction == o.direction; }
};
struct ConstantSpec {
    double value = 0.0;
    bool operator==(const ConstantSpec&) const = default;
};
using FunctionSpec = std::variant<ValuesSpec, QuadraticSpec, LinearSpec, ConstantSpec>;

enum class TaskKind {
    Between,
    ConvexityCheck,
    Extremal,
    Exposed,
    Hull,
    Bauer,
    CommonMax,
    Omega,
    Perturb,
    StrongMax,
    Genericity,
};

const char* task_name(TaskKind kind);

struct TaskSpec {
    TaskKind kind = TaskKind::Extremal;
    int a = -1, x = -1, y = -1;               ///< between: all three; omega: x
    std::optional<std::vector<int>> domain;   ///< default: the whole cloud
    std::vector<int> hull_set;                ///< hull: the generating set A
    std::optional<std::vector<int>> ambient;  ///< hull: default the whole cloud
    double epsilon = 0.0;                     ///< perturb, genericity
    int n = 0;                                ///< strong-max
    int samples = 0;                          ///< genericity
    std::uint64_t seed = 0;                   ///< genericity

    bool operator==(const TaskSpec&) const = default;
};

struct ScenarioConfig {
    CloudSpec cloud;
    FamilySpec family;
    std::vector<FunctionSpec> functions;
    TaskSpec task;
    Tolerances tolerances;        ///< defaults merged with scenario overrides
    bool check_convexity = true;  ///< precondition checks in bauer/omega/genericity

    bool operator==(const ScenarioConfig& other) const;
};

/// Parses and fully validates a scenario. Throws PhiError(ParseError) naming
/// the offending key path.
ScenarioConfig parse_scenario(const std::string& text);

/// Normalized JSON form of a config; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& config);

enum class ReportStatus { Ok, Warning, Error };

struct Report {
    std::string task;
    ReportStatus status = ReportStatus::Ok;
    std::string error_kind;   ///< stable kind string when status != Ok
    std::string error_detail;
    Tolerances tolerances;
    JsonValue payload;                 ///< task-specific, empty object on error
    std::optional<std::string> csv;    ///< per-sample rows for genericity tasks
};

/// Runs the task, replaying every emitted certificate first.
Report execute_scenario(const ScenarioConfig& config);

/// Deterministic serialization: fixed field order, floats at 17 significant
/// digits. Identical config (and seed) gives byte-identical output.
std::string report_to_json(const Report& report);

/// Options of `phiconv run`.
struct RunOptions {
    std::string scenario_path;
    std::optional<std::string> out_path;      ///< report destination; stdout otherwise
    std::optional<std::string> csv_path;      ///< per-sample CSV for genericity tasks
    std::optional<std::uint64_t> seed_override; ///< overrides the scenario's seed
    bool lip_full = false;                    ///< force the full lipschitz basis
};

/// Process-level driver behind the phiconv binary. Returns the exit code:
/// 0 for ok/warning reports, nonzero for every error path.
int run_scenario_file(const RunOptions& options, std::string& stdout_text,
                      std::string& stderr_text);

} // namespace phiconv

#endif // PHICONV_SCENARIO_HPP
