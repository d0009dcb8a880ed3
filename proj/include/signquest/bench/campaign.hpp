#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "signquest/attacks/attack.hpp"
#include "signquest/models/dataset.hpp"
#include "signquest/models/mlp.hpp"

namespace signquest {

/// Malformed or inconsistent campaign configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class AttackKind { signhunter, nes, zosignsgd };

std::string to_string(AttackKind kind);
AttackKind parse_attack_kind(std::string_view text);

struct AttackSpec {
  AttackKind kind = AttackKind::signhunter;
  /// Per-attack overrides of the norm defaults.
  std::optional<double> fd_probe;
  std::optional<double> learning_rate;
  std::optional<std::size_t> samples;
};

struct DatasetSpec {
  enum class Source { blobs, idx } source = Source::blobs;
  BlobConfig blobs{};
  std::size_t train_samples = 600;
  std::size_t test_samples = 300;
  std::filesystem::path train_images, train_labels, test_images, test_labels;
};

struct CampaignConfig {
  std::string name = "campaign";
  DatasetSpec dataset{};
  TrainConfig model{};
  std::vector<AttackSpec> attacks{{AttackKind::signhunter, {}, {}, {}}};
  std::vector<Norm> norms{Norm::linf};
  /// Per-norm radius; absent entries use AttackConfig::defaults.
  std::optional<double> epsilon_linf;
  std::optional<double> epsilon_l2;
  std::uint64_t budget = 10000;
  std::uint64_t seed = 1;
  std::size_t num_inputs = 100;
  bool record_traces = false;
  std::size_t jobs = 1;

  /// Attack configuration for one (attack, norm) pair.
  AttackConfig attack_config(const AttackSpec& spec, Norm norm) const;
};

/// Parses a JSON campaign document. Throws ConfigError.
CampaignConfig parse_campaign(const std::string& json_text);
CampaignConfig load_campaign(const std::filesystem::path& path);

struct AttackOutcome {
  std::size_t image_id = 0;
  AttackStatus status = AttackStatus::failure;
  std::uint64_t queries = 0;
  std::uint64_t base_queries = 0;
  double final_loss = 0.0;
  /// Queried points outside the ball or data range.
  std::uint64_t violations = 0;
  /// |oracle counter delta - reported queries|.
  std::uint64_t accounting_error = 0;
  std::vector<double> loss_trace;
  std::vector<double> hamming_trace;
  std::vector<double> cosine_trace;
};

struct AttackSummary {
  std::string attack;
  Norm norm = Norm::linf;
  double epsilon = 0.0;
  std::uint64_t budget = 0;
  /// Attacked inputs (correctly classified at start).
  std::size_t attempted = 0;
  std::size_t excluded = 0;
  std::size_t successes = 0;
  double failure_rate = 0.0;
  /// Mean queries over successful attacks; absent when none succeeded.
  std::optional<double> avg_queries;
  std::optional<double> avg_queries_excl_base;
  /// (1 - failure_rate) * avg_queries + failure_rate * budget.
  double expected_spend = 0.0;
  /// (queries, fraction of attempted inputs broken within that many queries).
  std::vector<std::pair<std::uint64_t, double>> success_curve;
  std::vector<double> avg_loss;
  std::vector<double> avg_hamming;
  std::vector<double> avg_cosine;
  std::uint64_t violations = 0;
  std::uint64_t accounting_errors = 0;
  std::vector<AttackOutcome> outcomes;  // sorted by image_id
};

struct CampaignResult {
  CampaignConfig config;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
  std::vector<AttackSummary> summaries;  // in (attack, norm) config order
};

/// Trains the model, attacks the first num_inputs test rows with every
/// (attack, norm) pair and folds the outcomes. Deterministic for a fixed
/// config regardless of `jobs`.
CampaignResult run_campaign(const CampaignConfig& config);

/// Writes <out>/<name>/<attack>_<norm>.csv, summary.json and, when traces
/// were recorded, <attack>_<norm>_traces.csv. Returns the campaign directory.
std::filesystem::path write_campaign(const CampaignResult& result, const std::filesystem::path& out);

}  // namespace signquest
