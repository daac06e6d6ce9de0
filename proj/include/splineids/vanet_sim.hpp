#ifndef SPLINEIDS_VANET_SIM_HPP
#define SPLINEIDS_VANET_SIM_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace splineids {

enum class AttackType { None, Probe, DoS, U2R, R2U };

std::string_view to_token(AttackType type);
AttackType attack_type_from_token(std::string_view token);  // throws ConfigError

/// One monitored message observation. label is 1 exactly when attack_type != None.
struct TrafficRecord {
    double packet_delay_ms = 0.0;
    std::uint64_t packets_dropped = 0;
    double transfer_interval_ms = 0.0;
    bool congested = false;
    AttackType attack_type = AttackType::None;
    int label = 0;

    friend bool operator==(const TrafficRecord&, const TrafficRecord&) = default;
};

/// Feature distributions of one (class, congestion) cell.
struct CellParams {
    double delay_mu = 0.0;  // ln-milliseconds
    double delay_sigma = 1.0;
    double drop_rate = 0.0;
    double interval_mu = 0.0;  // ln-milliseconds
    double interval_sigma = 1.0;
};

struct ScenarioConfig {
    // Cells are indexed [attack][congested].
    using CellTable = std::array<std::array<CellParams, 2>, 2>;

    std::size_t n_records = 600;
    std::size_t n_vehicles = 52;
    double attack_fraction = 0.5;
    double congested_fraction = 0.5;
    std::array<double, 4> attack_mix{1.0, 1.0, 1.0, 1.0};  // probe, dos, u2r, r2u
    CellTable cells{};
    double vehicle_jitter_sigma = 0.05;  // per-vehicle offset on ln(delay)
    bool type_modulates_delay = false;
    std::array<double, 4> type_delay_shift{0.0, 0.0, 0.0, 0.0};  // ln-ms, used when modulation is on
    std::uint64_t seed = 42;

    /// The frozen default scenario (mirrors config/default_scenario.json).
    static ScenarioConfig defaults();

    const CellParams& cell(bool attack, bool congested) const { return cells[attack ? 1 : 0][congested ? 1 : 0]; }

    /// Throws ConfigError naming the first invalid field.
    void validate() const;
};

nlohmann::json to_json(const ScenarioConfig& config);
/// Missing keys keep their default values; unknown keys are rejected.
ScenarioConfig scenario_from_json(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/**
 * Draw `n_records` records. Draw order: one jitter normal per vehicle,
 * then per record: congestion uniform, label uniform, attack-type uniform,
 * vehicle index, delay normal, drop count, interval normal. The whole
 * sequence is a function of the config alone.
 */
std::vector<TrafficRecord> generate_dataset(const ScenarioConfig& config);

inline constexpr std::string_view kCsvHeader =
    "packet_delay_ms,packets_dropped,transfer_interval_ms,congested,attack_type,label";

void write_csv(std::ostream& out, const std::vector<TrafficRecord>& records);
std::vector<TrafficRecord> read_csv(std::istream& in);

void write_csv(const std::filesystem::path& path, const std::vector<TrafficRecord>& records);
std::vector<TrafficRecord> read_csv(const std::filesystem::path& path);

}  // namespace splineids

#endif  // SPLINEIDS_VANET_SIM_HPP
