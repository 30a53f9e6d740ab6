#pragma once

// Reproducible experiments: input families, parameter sweeps over seeds,
// result rows persisted as JSON (canonical) or CSV (fixed columns).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "arreg/caps.hpp"
#include "arreg/group.hpp"
#include "arreg/io.hpp"
#include "arreg/rational.hpp"

namespace arreg {

struct FamilySpec {
  enum class Kind { planted, interval, random, file };
  Kind kind = Kind::random;
  std::uint64_t subgroup_index = 2;   // planted: index of the hidden subgroup
  std::uint64_t coset_count = 1;      // planted: cosets in the union
  Rational noise{0};                  // planted: per-element flip probability
  Rank interval_start = 1;            // interval: ranks start .. start+length-1
  std::optional<std::uint32_t> interval_length;  // default floor(|G|/2)
  Rational density{1, 2};             // random: per-element inclusion probability
  std::filesystem::path path;         // file
};

FamilySpec family_from_json(const io::Json& j, const std::filesystem::path& base_dir);
io::Json family_to_json(const FamilySpec& f);

/// A subgroup of exactly the given index, grown from seeded random
/// generators. Throws InvalidArgument if the index does not divide |G| or no
/// such subgroup is reached.
Subgroup random_subgroup_of_index(const Group& g, std::uint64_t index, std::uint64_t seed);

/// Deterministic in (spec, seed).
GroupSubset generate_family(const Group& g, const FamilySpec& spec, std::uint64_t seed, const Caps& caps = Caps{});

enum class Operation { regularize, oracle, robust, packing, ball, tester, density, kneser };

struct ExperimentConfig {
  std::string name = "experiment";
  Group group{std::vector<std::uint32_t>{2}};
  FamilySpec family;
  Operation operation = Operation::regularize;
  std::vector<std::string> sweep;     // ε, δ, sample count, or t, per operation
  std::vector<std::uint64_t> seeds;
  io::Json params = io::Json::object();
  std::optional<std::filesystem::path> output;
  std::string format = "json";
  bool timing = false;                // adds wall_ms (outside the determinism contract)
  Caps caps;
};

ExperimentConfig experiment_from_json(const io::Json& j, const std::filesystem::path& base_dir);

/// One row per (sweep value, seed), sweep-major.
struct ResultRow {
  std::string run_id;
  std::size_t sweep_index = 0;
  std::uint64_t seed = 0;
  std::string operation;
  std::string parameter;
  std::string input_hash;
  io::Json input;                     // set file object
  io::Json measured = io::Json::object();
  std::string status = "ok";          // ok | cap_exceeded | invalid_argument | precondition | error
  std::string message;
  std::optional<double> wall_ms;
};

io::Json to_json(const ResultRow& r);

std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

/// Canonical document {"schema", "name", "rows"}.
std::string rows_to_json_text(const ExperimentConfig& config, const std::vector<ResultRow>& rows);

inline constexpr const char* kCsvSchema = "arreg.rows.v1";
/// Fixed columns: schema,run_id,sweep_index,seed,operation,parameter,
/// input_hash,status,index,error,density,fraction,measured,wall_ms.
std::string rows_to_csv(const std::vector<ResultRow>& rows);

/// Writes rows in config.format to config.output (atomically), if set.
void persist_rows(const ExperimentConfig& config, const std::vector<ResultRow>& rows);

/// Summary table, one line per row.
std::string summary_table(const std::vector<ResultRow>& rows);

/// Least-squares slope of log(index) against log(1/ε) over successful
/// regularize rows.
std::optional<double> index_epsilon_slope(const std::vector<ResultRow>& rows);

}  // namespace arreg
