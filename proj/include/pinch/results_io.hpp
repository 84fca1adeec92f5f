// SPDX-License-Identifier: Apache-2.0
//
// JSON scenario configs, RFC-4180 CSV output and run manifests.
//
// CSV: CRLF line endings, mandatory header row, floating point printed with
// 12 significant digits. A manifest holds the full config and can be passed
// back as --config to reproduce the same CSV bytes.

#ifndef PINCH_RESULTS_IO_HPP
#define PINCH_RESULTS_IO_HPP

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pinch/experiment.hpp"
#include "pinch/version.hpp"

namespace pinch {

namespace fs = std::filesystem;

inline std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Quotes a CSV field when it contains a separator, quote or line break.
inline std::string csv_field(std::string_view s)
{
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

class CsvWriter {
public:
    void row(const std::vector<std::string>& fields)
    {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << csv_field(fields[i]);
        }
        out_ << "\r\n";
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

/// Parses RFC-4180 text into rows of fields.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\r' || c == '\n') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
        } else {
            field += c;
        }
    }
    if (!field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::string_view sweep_column(SweepKind kind) { return kind == SweepKind::PMax ? "p_max_dbm" : "r_min"; }

inline std::string raw_csv(const SweepResult& result, std::size_t m_users)
{
    CsvWriter w;
    std::vector<std::string> header{std::string(sweep_column(result.kind)), "realization", "scheme", "feasible",
                                    "sum_rate", "x_pin", "outer_iterations"};
    for (std::size_t m = 1; m <= m_users; ++m) header.push_back("power_" + std::to_string(m));
    for (std::size_t m = 1; m <= m_users; ++m) header.push_back("rate_" + std::to_string(m));
    w.row(header);
    for (const auto& rec : result.records) {
        const Solution& s = rec.solution;
        std::vector<std::string> row{format_double(result.sweep_values[rec.point]), std::to_string(rec.realization),
                                     std::string(scheme_name(rec.scheme)), s.feasible ? "1" : "0",
                                     format_double(s.sum_rate), format_double(s.x_pin),
                                     std::to_string(s.outer_iterations)};
        for (double p : s.powers) row.push_back(format_double(p));
        for (double r : s.rates) row.push_back(format_double(r));
        w.row(row);
    }
    return w.str();
}

inline std::string aggregate_csv(const SweepResult& result)
{
    CsvWriter w;
    std::vector<std::string> header{std::string(sweep_column(result.kind))};
    for (Scheme s : result.schemes) {
        const std::string name(scheme_name(s));
        header.push_back(name + "_mean_sum_rate");
        header.push_back(name + "_outages");
        header.push_back(name + "_mean_outer_iterations");
    }
    w.row(header);
    for (std::size_t p = 0; p < result.sweep_values.size(); ++p) {
        std::vector<std::string> row{format_double(result.sweep_values[p])};
        for (const auto& agg : result.aggregates[p]) {
            row.push_back(format_double(agg.mean_sum_rate));
            row.push_back(std::to_string(agg.outages));
            row.push_back(format_double(agg.mean_outer_iterations));
        }
        w.row(row);
    }
    return w.str();
}

// ---------------------------------------------------------------------------
// Config <-> JSON

inline nlohmann::json config_to_json(const ScenarioConfig& c)
{
    nlohmann::json j;
    j["system"] = {{"carrier_hz", c.system.carrier_hz},
                   {"antenna_height_m", c.system.antenna_height_m},
                   {"noise_dbm", c.noise_dbm},
                   {"waveguide_length_m", c.system.waveguide_length_m},
                   {"region_x_m", c.system.region_x_m},
                   {"region_y_m", c.system.region_y_m},
                   {"speed_of_light", c.system.speed_of_light}};
    j["users"] = c.m_users;
    j["realizations"] = c.n_realizations;
    j["seed"] = c.master_seed;
    j["p_max_dbm"] = c.p_max_dbm;
    j["r_min"] = c.r_min;
    j["fixed_p_max_dbm"] = c.fixed_p_max_dbm;
    j["fixed_r_min"] = c.fixed_r_min;
    j["r_min_weights"] = c.r_min_weights;
    std::vector<std::string> schemes;
    for (Scheme s : c.schemes) schemes.emplace_back(scheme_name(s));
    j["schemes"] = schemes;
    j["pso"] = {{"swarm_size", c.pso.swarm_size},   {"max_iterations", c.pso.max_iterations},
                {"inertia", c.pso.inertia},         {"cognitive", c.pso.cognitive},
                {"social", c.pso.social},           {"tolerance", c.pso.tolerance},
                {"velocity_cap", c.pso.velocity_cap}, {"min_iterations", c.pso.min_iterations}};
    j["grid_step"] = c.grid_step;
    j["outage_policy"] = std::string(outage_policy_name(c.outage_policy));
    return j;
}

namespace detail {
template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out)
{
    if (j.contains(key)) out = j.at(key).get<T>();
}
} // namespace detail

/// Reads a config document (or a manifest, whose "config" member is used).
/// Keys that are absent keep their defaults.
inline ScenarioConfig config_from_json(const nlohmann::json& doc)
{
    const nlohmann::json& j = doc.contains("config") ? doc.at("config") : doc;
    ScenarioConfig c;
    using detail::read_if;
    if (j.contains("system")) {
        const auto& s = j.at("system");
        read_if(s, "carrier_hz", c.system.carrier_hz);
        read_if(s, "antenna_height_m", c.system.antenna_height_m);
        read_if(s, "noise_dbm", c.noise_dbm);
        read_if(s, "waveguide_length_m", c.system.waveguide_length_m);
        read_if(s, "region_x_m", c.system.region_x_m);
        read_if(s, "region_y_m", c.system.region_y_m);
        read_if(s, "speed_of_light", c.system.speed_of_light);
    }
    read_if(j, "users", c.m_users);
    read_if(j, "realizations", c.n_realizations);
    read_if(j, "seed", c.master_seed);
    read_if(j, "p_max_dbm", c.p_max_dbm);
    read_if(j, "r_min", c.r_min);
    read_if(j, "fixed_p_max_dbm", c.fixed_p_max_dbm);
    read_if(j, "fixed_r_min", c.fixed_r_min);
    read_if(j, "r_min_weights", c.r_min_weights);
    if (j.contains("schemes")) {
        c.schemes.clear();
        for (const auto& s : j.at("schemes")) c.schemes.push_back(parse_scheme(s.get<std::string>()));
    }
    if (j.contains("pso")) {
        const auto& p = j.at("pso");
        read_if(p, "swarm_size", c.pso.swarm_size);
        read_if(p, "max_iterations", c.pso.max_iterations);
        read_if(p, "inertia", c.pso.inertia);
        read_if(p, "cognitive", c.pso.cognitive);
        read_if(p, "social", c.pso.social);
        read_if(p, "tolerance", c.pso.tolerance);
        read_if(p, "velocity_cap", c.pso.velocity_cap);
        read_if(p, "min_iterations", c.pso.min_iterations);
    }
    read_if(j, "grid_step", c.grid_step);
    if (j.contains("outage_policy")) c.outage_policy = parse_outage_policy(j.at("outage_policy").get<std::string>());
    read_if(j, "threads", c.threads);
    return c;
}

inline nlohmann::json read_json_file(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

inline std::string sweep_prefix(SweepKind kind) { return kind == SweepKind::PMax ? "sweep_pmax" : "sweep_rmin"; }

inline nlohmann::json manifest_json(const SweepResult& result, const ScenarioConfig& config)
{
    nlohmann::json wall = nlohmann::json::object();
    for (std::size_t s = 0; s < result.schemes.size(); ++s) {
        double total = 0.0;
        for (const auto& point : result.aggregates) total += point[s].wall_time_s;
        wall[std::string(scheme_name(result.schemes[s]))] = total;
    }
    return {{"tool", "pinch"},
            {"version", kVersion},
            {"command", result.kind == SweepKind::PMax ? "sweep-pmax" : "sweep-rmin"},
            {"config", config_to_json(config)},
            {"wall_time_s", wall}};
}

struct WrittenFiles {
    fs::path raw;
    fs::path aggregate;
    fs::path manifest;
};

/// Writes <prefix>_raw.csv, <prefix>_aggregate.csv and <prefix>_manifest.json
/// into `out_dir`, which must already exist. Content is rendered in memory
/// first so a failure never leaves a partial set behind.
inline WrittenFiles write_results(const SweepResult& result, const ScenarioConfig& config, const fs::path& out_dir)
{
    std::error_code ec;
    if (!fs::is_directory(out_dir, ec)) {
        throw std::runtime_error("output directory does not exist: " + out_dir.string());
    }
    const std::string prefix = sweep_prefix(result.kind);
    WrittenFiles files{out_dir / (prefix + "_raw.csv"), out_dir / (prefix + "_aggregate.csv"),
                       out_dir / (prefix + "_manifest.json")};
    const std::string contents[] = {raw_csv(result, config.m_users), aggregate_csv(result),
                                    manifest_json(result, config).dump(2) + "\n"};
    const fs::path* targets[] = {&files.raw, &files.aggregate, &files.manifest};

    std::vector<fs::path> staged;
    for (std::size_t i = 0; i < 3; ++i) {
        fs::path tmp = *targets[i];
        tmp += ".tmp";
        std::ofstream out(tmp, std::ios::binary);
        out << contents[i];
        out.close();
        if (!out) {
            for (const auto& p : staged) fs::remove(p, ec);
            fs::remove(tmp, ec);
            throw std::runtime_error("failed to write " + tmp.string());
        }
        staged.push_back(tmp);
    }
    for (std::size_t i = 0; i < 3; ++i) fs::rename(staged[i], *targets[i]);
    return files;
}

} // namespace pinch

#endif // PINCH_RESULTS_IO_HPP
