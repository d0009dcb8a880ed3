#include <fstream>

#include <fmt/format.h>
#include <fmt/os.h>
#include <json.hpp>

#include "signquest/bench/campaign.hpp"

namespace signquest {

namespace {

std::string stem(const AttackSummary& s) { return s.attack + "_" + to_string(s.norm); }

void write_outcomes(const AttackSummary& s, const std::filesystem::path& path) {
  auto out = fmt::output_file(path.string());
  out.print("attack,image_id,success,queries,queries_excl_base,final_loss\n");
  for (const auto& o : s.outcomes) {
    if (o.status == AttackStatus::misclassified_at_start) continue;
    out.print("{},{},{},{},{},{:.17g}\n", s.attack, o.image_id,
              o.status == AttackStatus::success ? 1 : 0, o.queries, o.queries - o.base_queries,
              o.final_loss);
  }
}

void write_traces(const AttackSummary& s, const std::filesystem::path& path) {
  auto out = fmt::output_file(path.string());
  out.print("query,avg_loss,avg_hamming_similarity,avg_cosine_similarity\n");
  for (std::size_t k = 0; k < s.avg_loss.size(); ++k) {
    const double h = k < s.avg_hamming.size() ? s.avg_hamming[k] : 0.0;
    const double c = k < s.avg_cosine.size() ? s.avg_cosine[k] : 0.0;
    out.print("{},{:.17g},{:.17g},{:.17g}\n", k + 1, s.avg_loss[k], h, c);
  }
}

}  // namespace

std::filesystem::path write_campaign(const CampaignResult& result, const std::filesystem::path& out) {
  const auto dir = out / result.config.name;
  std::filesystem::create_directories(dir);

  nlohmann::ordered_json summary;
  summary["campaign"] = result.config.name;
  summary["seed"] = result.config.seed;
  summary["budget"] = result.config.budget;
  summary["train_accuracy"] = result.train_accuracy;
  summary["test_accuracy"] = result.test_accuracy;
  auto& attacks = summary["attacks"] = nlohmann::ordered_json::array();
  for (const auto& s : result.summaries) {
    write_outcomes(s, dir / (stem(s) + ".csv"));
    if (result.config.record_traces) write_traces(s, dir / (stem(s) + "_traces.csv"));

    nlohmann::ordered_json a;
    a["attack"] = s.attack;
    a["norm"] = to_string(s.norm);
    a["epsilon"] = s.epsilon;
    a["attempted"] = s.attempted;
    a["excluded_misclassified"] = s.excluded;
    a["successes"] = s.successes;
    a["failure_rate"] = s.failure_rate;
    a["avg_queries"] = s.avg_queries ? nlohmann::ordered_json(*s.avg_queries) : nullptr;
    a["avg_queries_excl_base"] =
        s.avg_queries_excl_base ? nlohmann::ordered_json(*s.avg_queries_excl_base) : nullptr;
    a["expected_spend"] = s.expected_spend;
    a["ball_violations"] = s.violations;
    a["accounting_errors"] = s.accounting_errors;
    auto& curve = a["success_curve"] = nlohmann::ordered_json::array();
    for (const auto& [q, rate] : s.success_curve) curve.push_back({q, rate});
    attacks.push_back(std::move(a));
  }
  std::ofstream(dir / "summary.json") << summary.dump(2) << '\n';
  return dir;
}

}  // namespace signquest
