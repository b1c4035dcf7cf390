#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqabench/harness.hpp"

namespace vqabench {

/// Malformed or inconsistent data in an input file.
struct schema_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// number and label formatting

/// Shortest decimal form that parses back to the same double (17 significant
/// digits).
inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline double parse_double(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw schema_error("cannot parse number '" + text + "' in " + what);
    return v;
}

inline std::string optimizer_label(OptimizerKind kind) {
    return kind == OptimizerKind::nelder_mead ? "nelder-mead" : "quasi-newton";
}

inline OptimizerKind parse_optimizer(const std::string& label) {
    if (label == "nelder-mead") return OptimizerKind::nelder_mead;
    if (label == "quasi-newton") return OptimizerKind::quasi_newton;
    throw schema_error("unknown optimizer '" + label + "'");
}

inline std::string objective_label(const ObjectiveKind& objective) {
    if (objective.kind == ObjectiveKind::Kind::mean_energy) return "mean-energy";
    char buf[48];
    std::snprintf(buf, sizeof buf, "optimal-cost-%g", objective.c);
    return buf;
}

inline ObjectiveKind parse_objective(const std::string& label) {
    if (label == "mean-energy") return ObjectiveKind::mean_energy();
    constexpr const char* prefix = "optimal-cost-";
    if (label.rfind(prefix, 0) == 0) {
        const double c =
            parse_double(label.substr(std::string(prefix).size()), "objective label");
        return ObjectiveKind::optimal_cost(c);
    }
    throw schema_error("unknown objective '" + label + "'");
}

inline std::string instance_label(std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "i%03zu", index);
    return buf;
}

// ---------------------------------------------------------------------------
// generic file helpers

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

/// Writes via a temporary then renames, so a file at `path` is always complete.
inline void write_text_file_atomic(const std::filesystem::path& path,
                                   const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j,
                                           const std::string& key,
                                           const std::string& what) {
    const auto it = j.find(key);
    if (it == j.end())
        throw schema_error(what + ": missing field '" + key + "'");
    return *it;
}

inline nlohmann::json parse_json(const std::string& text, const std::string& what) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw schema_error(what + ": not valid JSON");
    return j;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// ensemble files
//
// {
//   "format": "vqabench-ensemble/1",
//   "instances": [
//     {"n_vars": 8, "seed": 42, "couplings": [[0, 1, 3], [0, 2, -7], ...]},
//     ...
//   ]
// }
//
// Each couplings entry is [r, s, J_rs] with 0 <= r < s < n_vars; every pair
// must appear exactly once.

inline constexpr const char* kEnsembleFormat = "vqabench-ensemble/1";

inline nlohmann::json instance_to_json(const IsingInstance& instance) {
    nlohmann::json couplings = nlohmann::json::array();
    const int n = instance.n_vars();
    for (int r = 0; r < n; ++r)
        for (int s = r + 1; s < n; ++s)
            couplings.push_back({r, s, instance.coupling(r, s)});
    return {{"n_vars", n}, {"seed", instance.seed()}, {"couplings", std::move(couplings)}};
}

inline IsingInstance instance_from_json(const nlohmann::json& j,
                                        const std::string& what) {
    const int n = detail::require_field(j, "n_vars", what).get<int>();
    if (n < 2) throw schema_error(what + ": n_vars must be >= 2");
    const auto seed = detail::require_field(j, "seed", what).get<std::uint64_t>();
    const auto& arr = detail::require_field(j, "couplings", what);
    if (!arr.is_array()) throw schema_error(what + ": couplings must be an array");

    std::vector<int> flat(static_cast<std::size_t>(IsingInstance::pair_count(n)));
    std::vector<bool> seen(flat.size(), false);
    for (const auto& entry : arr) {
        if (!entry.is_array() || entry.size() != 3)
            throw schema_error(what + ": coupling entries must be [r, s, J]");
        const int r = entry[0].get<int>();
        const int s = entry[1].get<int>();
        const int value = entry[2].get<int>();
        if (r < 0 || s <= r || s >= n)
            throw schema_error(what + ": coupling pair out of range");
        const auto idx = static_cast<std::size_t>(IsingInstance::pair_index(r, s, n));
        if (seen[idx]) throw schema_error(what + ": duplicate coupling pair");
        seen[idx] = true;
        flat[idx] = value;
    }
    for (const bool s : seen)
        if (!s) throw schema_error(what + ": missing coupling pair");
    return IsingInstance(n, std::move(flat), seed);
}

inline void write_ensemble(const std::filesystem::path& path,
                           const std::vector<IsingInstance>& instances) {
    nlohmann::json j;
    j["format"] = kEnsembleFormat;
    j["instances"] = nlohmann::json::array();
    for (const auto& inst : instances) j["instances"].push_back(instance_to_json(inst));
    write_text_file_atomic(path, j.dump(2) + "\n");
}

inline std::vector<IsingInstance> read_ensemble(const std::filesystem::path& path) {
    const std::string what = "ensemble file " + path.string();
    const nlohmann::json j = detail::parse_json(read_text_file(path), what);
    if (detail::require_field(j, "format", what).get<std::string>() != kEnsembleFormat)
        throw schema_error(what + ": unsupported format tag");
    const auto& arr = detail::require_field(j, "instances", what);
    if (!arr.is_array() || arr.empty())
        throw schema_error(what + ": instances must be a non-empty array");
    std::vector<IsingInstance> instances;
    instances.reserve(arr.size());
    for (const auto& entry : arr) instances.push_back(instance_from_json(entry, what));
    return instances;
}

// ---------------------------------------------------------------------------
// trace files (JSON lines, streamable)
//
// line 1: header object with the run settings and seeds
// line 1+n: {"n": n, "value": v, "dist": [[energy, probability], ...]}

inline constexpr const char* kTraceFormat = "vqabench-trace/1";

inline std::string trace_filename(const std::string& instance_id,
                                  OptimizerKind optimizer,
                                  const ObjectiveKind& objective, int restart) {
    char suffix[16];
    std::snprintf(suffix, sizeof suffix, "r%03d", restart);
    return instance_id + "__" + optimizer_label(optimizer) + "__" +
           objective_label(objective) + "__" + suffix + ".jsonl";
}

inline void write_trace(const std::filesystem::path& path,
                        const EvaluationTrace& trace) {
    std::string out;
    {
        nlohmann::json header{{"format", kTraceFormat},
                              {"instance_id", trace.instance_id},
                              {"n_vars", trace.n_vars},
                              {"depth", trace.depth},
                              {"max_evals", trace.max_evals},
                              {"restart_seed", trace.restart_seed},
                              {"optimizer", optimizer_label(trace.optimizer)},
                              {"objective", objective_label(trace.objective)},
                              {"error", trace.error}};
        header["converged_at"] =
            trace.converged_at ? nlohmann::json(*trace.converged_at) : nlohmann::json();
        out += header.dump();
        out += '\n';
    }
    for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
        const auto& snap = trace.snapshots[i];
        nlohmann::json dist = nlohmann::json::array();
        for (const auto& entry : snap.distribution.entries)
            dist.push_back({entry.energy, entry.probability});
        const nlohmann::json line{{"n", i + 1},
                                  {"value", snap.objective_value},
                                  {"dist", std::move(dist)}};
        out += line.dump();
        out += '\n';
    }
    write_text_file_atomic(path, out);
}

inline EvaluationTrace read_trace(const std::filesystem::path& path) {
    const std::string what = "trace file " + path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw schema_error(what + ": empty file");
    const nlohmann::json header = detail::parse_json(line, what + " header");
    if (detail::require_field(header, "format", what).get<std::string>() != kTraceFormat)
        throw schema_error(what + ": unsupported format tag");

    EvaluationTrace trace;
    trace.instance_id = detail::require_field(header, "instance_id", what).get<std::string>();
    trace.n_vars = detail::require_field(header, "n_vars", what).get<int>();
    trace.depth = detail::require_field(header, "depth", what).get<int>();
    trace.max_evals = detail::require_field(header, "max_evals", what).get<int>();
    trace.restart_seed =
        detail::require_field(header, "restart_seed", what).get<std::uint64_t>();
    trace.optimizer = parse_optimizer(
        detail::require_field(header, "optimizer", what).get<std::string>());
    trace.objective = parse_objective(
        detail::require_field(header, "objective", what).get<std::string>());
    trace.error = detail::require_field(header, "error", what).get<std::string>();
    const auto& conv = detail::require_field(header, "converged_at", what);
    if (!conv.is_null()) trace.converged_at = conv.get<int>();

    trace.snapshots.reserve(static_cast<std::size_t>(trace.max_evals));
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const nlohmann::json snap = detail::parse_json(line, what + " snapshot");
        const auto n = detail::require_field(snap, "n", what).get<std::size_t>();
        if (n != trace.snapshots.size() + 1)
            throw schema_error(what + ": snapshot lines out of order");
        TraceSnapshot s;
        s.objective_value = detail::require_field(snap, "value", what).get<double>();
        const auto& dist = detail::require_field(snap, "dist", what);
        if (!dist.is_array()) throw schema_error(what + ": dist must be an array");
        s.distribution.entries.reserve(dist.size());
        for (const auto& pair : dist) {
            if (!pair.is_array() || pair.size() != 2)
                throw schema_error(what + ": dist entries must be [energy, probability]");
            s.distribution.entries.push_back(
                {pair[0].get<double>(), pair[1].get<double>()});
        }
        trace.snapshots.push_back(std::move(s));
    }
    if (trace.snapshots.size() != static_cast<std::size_t>(trace.max_evals))
        throw schema_error(what + ": snapshot count does not match max_evals");
    return trace;
}

// ---------------------------------------------------------------------------
// run manifests

inline constexpr const char* kManifestFormat = "vqabench-run-manifest/1";

/// Every setting and seed needed to reproduce a run byte for byte.
struct RunManifest {
    int n_vars = 0;
    int instance_count = 0;
    int depth = 3;
    int max_evals = 2000;
    int restarts = 20;
    std::uint64_t master_seed = 1;
    double tol = 1e-4;
    std::vector<OptimizerKind> optimizers;
    std::vector<ObjectiveKind> objectives;
};

inline nlohmann::json manifest_to_json(const RunManifest& m) {
    nlohmann::json j{{"format", kManifestFormat},
                     {"n_vars", m.n_vars},
                     {"instance_count", m.instance_count},
                     {"depth", m.depth},
                     {"max_evals", m.max_evals},
                     {"restarts", m.restarts},
                     {"master_seed", m.master_seed},
                     {"tol", m.tol}};
    j["optimizers"] = nlohmann::json::array();
    for (const auto o : m.optimizers) j["optimizers"].push_back(optimizer_label(o));
    j["objectives"] = nlohmann::json::array();
    for (const auto& b : m.objectives) j["objectives"].push_back(objective_label(b));
    return j;
}

inline RunManifest manifest_from_json(const nlohmann::json& j, const std::string& what) {
    if (detail::require_field(j, "format", what).get<std::string>() != kManifestFormat)
        throw schema_error(what + ": unsupported format tag");
    RunManifest m;
    m.n_vars = detail::require_field(j, "n_vars", what).get<int>();
    m.instance_count = detail::require_field(j, "instance_count", what).get<int>();
    m.depth = detail::require_field(j, "depth", what).get<int>();
    m.max_evals = detail::require_field(j, "max_evals", what).get<int>();
    m.restarts = detail::require_field(j, "restarts", what).get<int>();
    m.master_seed = detail::require_field(j, "master_seed", what).get<std::uint64_t>();
    m.tol = detail::require_field(j, "tol", what).get<double>();
    for (const auto& o : detail::require_field(j, "optimizers", what))
        m.optimizers.push_back(parse_optimizer(o.get<std::string>()));
    for (const auto& b : detail::require_field(j, "objectives", what))
        m.objectives.push_back(parse_objective(b.get<std::string>()));
    if (m.optimizers.empty() || m.objectives.empty())
        throw schema_error(what + ": optimizers and objectives must be non-empty");
    return m;
}

inline void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    write_text_file_atomic(path, manifest_to_json(m).dump(2) + "\n");
}

inline RunManifest read_manifest(const std::filesystem::path& path) {
    const std::string what = "manifest " + path.string();
    return manifest_from_json(detail::parse_json(read_text_file(path), what), what);
}

// ---------------------------------------------------------------------------
// CSV

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

inline void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::string out;
    const auto append_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i].find_first_of(",\n\r") != std::string::npos)
                throw std::invalid_argument("write_csv: field contains a separator");
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    };
    append_row(table.columns);
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("write_csv: row width does not match header");
        append_row(row);
    }
    write_text_file_atomic(path, out);
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    const std::string what = "csv file " + path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    CsvTable table;
    std::string line;
    const auto split = [](const std::string& text) {
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const std::size_t pos = text.find(',', start);
            if (pos == std::string::npos) {
                fields.push_back(text.substr(start));
                break;
            }
            fields.push_back(text.substr(start, pos - start));
            start = pos + 1;
        }
        return fields;
    };
    if (!std::getline(in, line)) throw schema_error(what + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    table.columns = split(line);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split(line);
        if (fields.size() != table.columns.size())
            throw schema_error(what + ": row width does not match header");
        table.rows.push_back(std::move(fields));
    }
    return table;
}

inline std::size_t csv_column(const CsvTable& table, const std::string& name,
                              const std::string& what) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == name) return i;
    throw schema_error(what + ": missing column '" + name + "'");
}

}  // namespace vqabench
